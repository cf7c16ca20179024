#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jitter/bounds.hpp"
#include "jitter/core.hpp"

using namespace jitter::bounds;

// Reference values below were evaluated once with mpmath at 30 digits.

TEST_CASE("jittered-sampling envelope") {
  CHECK(thm1_upper(1024, 2) == doctest::Approx(0.0205685066229231).epsilon(1e-12));
  CHECK(thm1_upper(std::numbers::e, 1) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-14));
  CHECK(thm1_lower(1024, 2) == doctest::Approx(0.00110485434560398).epsilon(1e-12));
  CHECK(thm1_lower(1, 1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(thm1_upper(1, 2), jitter::InvalidArgument);

  for (double d = 1; d <= 6; ++d) {
    double prev = thm1_upper(3, d);
    for (double n = 4; n < 5000; n *= 1.3) {
      CHECK(thm1_lower(n, d) < thm1_upper(n, d));
      const double cur = thm1_upper(n, d);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  CHECK(refined_upper_constant(1) == 1.0);
  CHECK(refined_upper_constant(2) == doctest::Approx(std::sqrt(0.875)));
}

TEST_CASE("DKW tail") {
  CHECK(dkw_tail(10, 0) == 2.0);
  CHECK(dkw_tail(64, 0.125) == doctest::Approx(0.270670566473225).epsilon(1e-12));
  CHECK(dkw_tail(256, 0.2) == doctest::Approx(2.55081525905208e-9).epsilon(1e-10));
  CHECK(dkw_tail(1e6, 0.1) < 1e-300);
  for (double e = 0.0; e < 0.5; e += 0.05) CHECK(dkw_tail(64, e + 0.05) < dkw_tail(64, e));
  for (double n = 1; n < 500; n *= 2) CHECK(dkw_tail(2 * n, 0.1) < dkw_tail(n, 0.1));
}

TEST_CASE("exponential moment bound") {
  CHECK(lemma31_moment_bound(1e-12, 64) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lemma31_moment_bound(8, 64) == doctest::Approx(3.84038195181169).epsilon(1e-12));
  CHECK(lemma31_moment_bound(1, 64) == doctest::Approx(1.31394110213851).epsilon(1e-12));
  for (double t = 0.5; t < 20; t += 0.5) CHECK(lemma31_moment_bound(t + 0.5, 16) > lemma31_moment_bound(t, 16));
}

TEST_CASE("Bernstein-type tail") {
  CHECK(lemma32_bernstein_tail(0, 64, 2) == 1.0);
  CHECK(lemma32_bernstein_tail(0.5, 64, 2) == doctest::Approx(4.98789555937526e-5).epsilon(1e-11));
  CHECK(lemma32_bernstein_tail(5, 64, 2) < 1e-100);
}

TEST_CASE("HNWW tail") {
  CHECK(hnww_tail(1, 0, 1) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(hnww_tail(0.1, 1000, 2) == doctest::Approx(6.52233269511473).epsilon(1e-12));
  CHECK_THROWS_AS(hnww_tail(0, 10, 2), jitter::InvalidArgument);
  for (double n = 10; n < 1e5; n *= 3) CHECK(hnww_tail(0.1, 3 * n, 2) < hnww_tail(0.1, n, 2));
  for (double delta = 0.05; delta < 1; delta += 0.05) CHECK(hnww_tail(delta + 0.05, 100, 3) < hnww_tail(delta, 100, 3));
  // (d/delta + 2)^d alone overflows a double here; the log form does not
  CHECK(std::isfinite(hnww_tail(1, 2000, 200)));
  CHECK(hnww_tail(1, 2000, 200) > 1.0);
}

TEST_CASE("Hammersley leading term") {
  CHECK(hammersley_leading_bound(std::numbers::e, 2) == doctest::Approx(3.5 / std::numbers::e).epsilon(1e-14));
  CHECK(hammersley_leading_bound(1024, 2) == doctest::Approx(0.0236915540230450).epsilon(1e-12));
  CHECK(hammersley_leading_bound(1e4, 3) == doctest::Approx(0.00742265735466976).epsilon(1e-12));
  CHECK_THROWS_AS(hammersley_leading_bound(100, 1), jitter::InvalidArgument);
}

TEST_CASE("inverse discrepancy bounds") {
  auto [plain, improved] = inverse_disc_bounds(1e4, 2);
  CHECK(plain == doctest::Approx(0.141421356237310).epsilon(1e-12));
  CHECK(improved == doctest::Approx(0.0429193205257869).epsilon(1e-12));
  CHECK(improved / plain == doctest::Approx(0.303485425877029).epsilon(1e-12));
  // where log N >= N^{1/d} the two coincide
  auto [a, b] = inverse_disc_bounds(20, 5);
  CHECK(std::log(20.0) >= std::pow(20.0, 0.2));
  CHECK(a == b);
  // no improvement at N = d^d (log N = d log d >= d), improvement past the crossover
  for (double d = 3; d <= 6; ++d) {
    const double dd = std::pow(d, d);
    auto [p0, q0] = inverse_disc_bounds(dd, d);
    CHECK(q0 == p0);
    double n = dd;
    while (std::log(n) >= std::pow(n, 1.0 / d)) n *= 1.01;
    auto [p1, q1] = inverse_disc_bounds(n * 1.01, d);
    CHECK(q1 < p1);
  }
}

TEST_CASE("big-box fraction") {
  CHECK(bigbox_fraction(256, 4) == doctest::Approx(0.31640625).epsilon(1e-15));
  CHECK(bigbox_fraction(std::pow(100.0, 100.0), 100) == doctest::Approx(std::exp(-1.0)).epsilon(6e-3));
  CHECK(bigbox_fraction(1e12, 2) > 0.99);
}

TEST_CASE("Kolmogorov constant") {
  CHECK(kolmogorov_limit_constant() == doctest::Approx(0.868731160636159).epsilon(1e-14));
  // alternating harmonic series for log 2, averaged partial sums for speed
  double s = 0.0, prev = 0.0;
  const int terms = 2'000'000;
  for (int k = 1; k <= terms; ++k) {
    prev = s;
    s += (k % 2 ? 1.0 : -1.0) / k;
  }
  const double log2 = 0.5 * (s + prev);
  CHECK(std::abs(std::sqrt(std::numbers::pi / 2) * log2 - kolmogorov_limit_constant()) < 1e-10);
  CHECK(kolmogorov_limit_constant() > 0.0);
  CHECK(kolmogorov_limit_constant() < 1.0);
}

TEST_CASE("conjectural rate") {
  CHECK(heuristic_conjecture_rate(std::numbers::e, 1) == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-14));
  CHECK(heuristic_conjecture_rate(1024, 2) == doctest::Approx(0.0255926739679892).epsilon(1e-12));
  for (double d = 1; d <= 5; ++d)
    for (double n = 2; n < 1e6; n *= 2.5) CHECK(heuristic_conjecture_rate(n, d) > thm1_lower(n, d));
}

TEST_CASE("evaluators are pure and the table is complete") {
  CHECK(thm1_upper(777, 3) == thm1_upper(777, 3));
  const auto rows = evaluate_all(1024, 2);
  bool conjecture_flagged = false;
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.value));
    CHECK(r.value >= 0.0);
    if (r.name == "heuristic_conjecture_rate") conjecture_flagged = r.conjectural;
  }
  CHECK(conjecture_flagged);
  CHECK(rows.size() >= 8);
}
