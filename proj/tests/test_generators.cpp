#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "jitter/discrepancy.hpp"
#include "jitter/generators.hpp"
#include "oracles.hpp"

using namespace jitter;

TEST_CASE("uniform points") {
  const auto one = gen_uniform(1, 1, 3);
  CHECK(one.size() == 1);
  const auto a = gen_uniform(50, 3, 8), b = gen_uniform(50, 3, 8), c = gen_uniform(50, 3, 9);
  CHECK(std::equal(a.raw().begin(), a.raw().end(), b.raw().begin()));
  CHECK_FALSE(std::equal(a.raw().begin(), a.raw().end(), c.raw().begin()));
  CHECK(a.provenance().generator == "uniform");
  CHECK(a.provenance().seed == 8);

  const auto big = gen_uniform(10000, 2, 1);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i) mean += big[i][j];
    mean /= 10000.0;
    CHECK(std::abs(mean - 0.5) <= 3.0 / std::sqrt(12.0) / 100.0);
  }
}

TEST_CASE("regular grid") {
  const auto g = gen_grid(1, 2);
  CHECK(g.size() == 1);
  CHECK(g[0][0] == 0.5);
  CHECK(g[0][1] == 0.5);
  const auto h = gen_grid(2, 1);
  CHECK(h[0][0] == 0.25);
  CHECK(h[1][0] == 0.75);
  CHECK(star_1d_exact(gen_grid(4, 1)).value == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(oracle::star_brute(gen_grid(4, 1)) == doctest::Approx(0.125).epsilon(1e-15));
  const auto corner = gen_grid(2, 1, GridMode::Corner);
  CHECK(corner[0][0] == 0.0);
  CHECK(corner[1][0] == 0.5);
}

TEST_CASE("jittered points occupy every cell once") {
  for (std::size_t d : {1u, 2u, 3u}) {
    const std::size_t m = 4;
    const auto p = gen_jittered(m, d, 12);
    CHECK(p.size() == checked_power(m, d));
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto k = bracket(p[i], m);
      // lexicographic order, last axis fastest
      std::size_t flat = 0;
      for (auto v : k) flat = flat * m + (v - 1);
      CHECK(flat == i);
      seen.insert(k);
    }
    CHECK(seen.size() == p.size());
  }
  const auto a = gen_jittered(5, 2, 4), b = gen_jittered(5, 2, 4);
  CHECK(std::equal(a.raw().begin(), a.raw().end(), b.raw().begin()));
}

TEST_CASE("partition jittering matches grid jittering") {
  for (std::uint64_t seed : {0ull, 1ull, 123456789ull}) {
    const auto a = gen_jittered(3, 2, seed);
    const auto b = gen_partition_jittered(grid_partition(3, 2), seed);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.raw().size(); ++i) CHECK(a.raw()[i] == b.raw()[i]);
  }
  const auto single = gen_partition_jittered(grid_partition(1, 3), 5);
  CHECK(single.size() == 1);
  const auto halves = gen_partition_jittered(grid_partition(2, 1), 5);
  CHECK(halves[0][0] <= 0.5);
  CHECK(halves[1][0] >= 0.5);
}

TEST_CASE("partition jittering lands in each cell") {
  const auto part = random_box_partition(6, 2, 3, 21);
  const auto p = gen_partition_jittered(part, 8);
  for (std::size_t i = 0; i < part.size(); ++i) {
    bool inside = false;
    for (const auto& b : part[i].boxes()) {
      bool in = true;
      for (std::size_t j = 0; j < 2; ++j) in &= b.lower()[j] <= p[i][j] && p[i][j] <= b.upper()[j];
      inside |= in;
    }
    CHECK(inside);
  }
}

TEST_CASE("radical inverse") {
  CHECK(radical_inverse(0, 2) == 0.0);
  CHECK(radical_inverse(0, 7) == 0.0);
  CHECK(radical_inverse(5, 2) == 0.625);
  CHECK(radical_inverse(7, 3) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK_THROWS(radical_inverse(3, 1));
  CHECK(nth_prime(0) == 2);
  CHECK(nth_prime(1) == 3);
  CHECK(nth_prime(9) == 29);
}

TEST_CASE("Hammersley points") {
  const auto h = gen_hammersley(4, 2);
  const std::vector<double> expect{0, 0, 0.25, 0.5, 0.5, 0.25, 0.75, 0.75};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(h.raw()[i] == expect[i]);
  const auto one = gen_hammersley(1, 3);
  CHECK(one[0][0] == 0.0);
  CHECK(one[0][1] == 0.0);
  CHECK(one[0][2] == 0.0);
  const auto h3 = gen_hammersley(10, 3);
  CHECK(h3[7][2] == doctest::Approx(radical_inverse(7, 3)));

  CHECK(star_exact_grid(gen_hammersley(64, 2)).value < star_exact_grid(gen_grid(8, 2)).value);
}
