#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "jitter/core.hpp"
#include "jitter/pointset_io.hpp"
#include "oracles.hpp"

using namespace jitter;

TEST_CASE("points are validated") {
  CHECK_THROWS_AS(Point({0.5, 1.5}), InvalidArgument);
  CHECK_THROWS_AS(Point({-0.1}), InvalidArgument);
  CHECK_THROWS_AS(Point(std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(Point({std::nan("")}), InvalidArgument);
  CHECK(Point::filled(3, 1.0).dim() == 3);
  CHECK_THROWS_AS(PointSet(2, std::vector<double>{0.1, 0.2, 0.3}), InvalidArgument);
}

TEST_CASE("anchored volume") {
  CHECK(volume_anchored(Point{1, 1, 1}) == 1.0);
  CHECK(volume_anchored(Point{0.5, 0.5}) == 0.25);
  CHECK(volume_anchored(Point{0.1, 0.2, 0.9}) == doctest::Approx(0.018).epsilon(1e-15));
}

TEST_CASE("closed and open counts") {
  const PointSet one(2, {Point{0.5, 0.5}});
  CHECK(count_closed(one, Point{0.5, 0.5}) == 1);
  CHECK(count_closed(one, Point{0.4, 1.0}) == 0);
  CHECK(count_open(one, Point{0.5, 0.5}) == 0);
  CHECK(count_open(one, Point{0.6, 0.6}) == 1);

  std::vector<Point> grid;
  for (double a : {0.0, 0.5, 1.0})
    for (double b : {0.0, 0.5, 1.0}) grid.push_back(Point{a, b});
  const PointSet g(2, grid);
  // hand enumeration: (0,0),(0,.5),(.5,0),(.5,.5) closed; only (0,0) open
  CHECK(count_closed(g, Point{0.5, 0.5}) == 4);
  CHECK(count_open(g, Point{0.5, 0.5}) == 1);

  CHECK_THROWS_AS(count_closed(g, Point{0.5}), DimensionMismatch);
  CHECK_THROWS_AS(count_open(g, Point{0.5, 0.5, 0.5}), DimensionMismatch);
}

TEST_CASE("counts are monotone and ordered") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto p = oracle::random_points(12, 3, gen);
    std::vector<double> x(3), y(3);
    for (int j = 0; j < 3; ++j) {
      x[j] = u(gen);
      y[j] = x[j] + (1.0 - x[j]) * u(gen);
    }
    const Point px(x), py(y);
    CHECK(count_open(p, px) <= count_closed(p, px));
    CHECK(count_closed(p, px) <= count_closed(p, py));
    CHECK(volume_anchored(px) <= volume_anchored(py));
  }
}

TEST_CASE("bracket") {
  CHECK(bracket(Point{0.0, 0.0}, 5) == std::vector<std::size_t>{1, 1});
  CHECK(bracket(Point{0.99, 0.2}, 5) == std::vector<std::size_t>{5, 2});
  CHECK(bracket(Point{1.0}, 3) == std::vector<std::size_t>{3});
  CHECK_THROWS_AS(bracket(Point{0.5}, 0), InvalidArgument);

  // constant on half-open cells: membership oracle k-1 <= m x < k
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t m : {1u, 2u, 3u, 7u, 10u}) {
    for (int i = 0; i < 500; ++i) {
      const double x = u(gen);
      const auto k = bracket(Point{x}, m)[0];
      CHECK(static_cast<double>(k - 1) <= static_cast<double>(m) * x);
      CHECK(static_cast<double>(m) * x < static_cast<double>(k));
    }
    for (std::size_t k = 1; k <= m; ++k) {
      CHECK(bracket(Point{static_cast<double>(k - 1) / static_cast<double>(m)}, m)[0] == k);
    }
  }
}

TEST_CASE("checked power guards overflow") {
  CHECK(checked_power(5, 3) == 125);
  CHECK(checked_power(1, 60) == 1);
  CHECK_THROWS_AS(checked_power(10, 20), InvalidArgument);
}

TEST_CASE("rng streams are deterministic and keyed") {
  RngStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs |= x != c.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(differs);
  RngStream r(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = r.uniform(0.25, 0.5);
    CHECK(v >= 0.25);
    CHECK(v < 0.5);
    CHECK(r.below(7) < 7);
  }
  CHECK(r.uniform(0.3, 0.3) == 0.3);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(stable_hash("table1") == stable_hash(std::string("table1")));
  CHECK(stable_hash("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("point set file round trip") {
  std::mt19937_64 gen(3);
  const auto raw = oracle::random_points(17, 3, gen);
  const PointSet p(3, std::vector<double>(raw.raw().begin(), raw.raw().end()),
                   Provenance{"uniform", 99, {}});
  std::stringstream s;
  write_pointset(s, p);
  CHECK(s.str().rfind("# dim=3 n=17 generator=uniform seed=99", 0) == 0);
  const auto q = read_pointset(s);
  CHECK(q.dim() == 3);
  CHECK(q.size() == 17);
  CHECK(q.provenance().seed == 99);
  CHECK(q.provenance().generator == "uniform");
  for (std::size_t i = 0; i < p.raw().size(); ++i) CHECK(p.raw()[i] == q.raw()[i]);
}

TEST_CASE("point set reader rejects malformed input") {
  std::stringstream no_header("0.1 0.2\n");
  CHECK_THROWS(read_pointset(no_header));
  std::stringstream wrong_width("# dim=2 n=1 generator=x seed=0\n0.1 0.2 0.3\n");
  CHECK_THROWS(read_pointset(wrong_width));
  std::stringstream wrong_rows("# dim=1 n=2 generator=x seed=0\n0.1\n");
  CHECK_THROWS(read_pointset(wrong_rows));
  std::stringstream out_of_range("# dim=1 n=1 generator=x seed=0\n1.5\n");
  CHECK_THROWS(read_pointset(out_of_range));
}
