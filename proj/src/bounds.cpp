#include "jitter/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jitter/core.hpp"

namespace jitter::bounds {

namespace {

double rate_exponent(double d) { return 0.5 + 0.5 / d; }

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

double thm1_upper(double n, double d) {
  require(n >= 2.0, "thm1_upper requires N >= 2");
  require(d >= 1.0, "thm1_upper requires d >= 1");
  return std::exp(0.5 * std::log(d) + 0.5 * std::log(std::log(n)) - rate_exponent(d) * std::log(n));
}

double thm1_lower(double n, double d) {
  require(n >= 1.0, "thm1_lower requires N >= 1");
  require(d >= 1.0, "thm1_lower requires d >= 1");
  return d / 10.0 * std::exp(-rate_exponent(d) * std::log(n));
}

double refined_upper_constant(double d) {
  require(d >= 1.0, "refined_upper_constant requires d >= 1");
  return std::sqrt(0.75 + 0.25 / d);
}

double dkw_tail(double n, double eps) {
  require(n >= 1.0, "dkw_tail requires n >= 1");
  require(eps >= 0.0, "dkw_tail requires eps >= 0");
  return 2.0 * std::exp(-2.0 * n * eps * eps);
}

double lemma31_moment_bound(double t, double n) {
  require(t >= 0.0, "lemma31_moment_bound requires t >= 0");
  require(n >= 1.0, "lemma31_moment_bound requires n >= 1");
  return 1.0 + std::sqrt(2.0 * std::numbers::pi) * t / std::sqrt(n) * std::exp(t * t / (8.0 * n));
}

double lemma32_bernstein_tail(double y, double n, double d) {
  require(y >= 0.0, "lemma32_bernstein_tail requires y >= 0");
  require(n >= 1.0 && d >= 1.0, "lemma32_bernstein_tail requires n, d >= 1");
  const double base = 1.0 + std::sqrt(32.0 * std::numbers::pi * n) * y / d;
  return std::exp(d * std::log(base) - 2.0 * n * y * y / d);
}

double hnww_tail(double delta, double n, double d) {
  require(delta > 0.0, "hnww_tail requires delta > 0");
  require(n >= 0.0 && d >= 1.0, "hnww_tail requires N >= 0 and d >= 1");
  return 2.0 * std::exp(d * std::log(d / delta + 2.0) - delta * delta * n / 2.0);
}

double hammersley_leading_bound(double n, double d) {
  require(d >= 2.0, "hammersley_leading_bound requires d >= 2");
  require(n >= 2.0, "hammersley_leading_bound requires N >= 2");
  const double log_n = std::log(n);
  return 7.0 / (std::pow(2.0, d - 1.0) * (d - 1.0)) * std::pow(log_n, d - 1.0) / n;
}

std::pair<double, double> inverse_disc_bounds(double n, double d) {
  require(n >= 2.0, "inverse_disc_bounds requires N >= 2");
  require(d >= 1.0, "inverse_disc_bounds requires d >= 1");
  const double base = d / n;
  const double shrink = std::min(1.0, std::log(n) / std::pow(n, 1.0 / d));
  return {10.0 * std::sqrt(base), 10.0 * std::sqrt(base * shrink)};
}

double bigbox_fraction(double n, double d) {
  require(n >= 1.0, "bigbox_fraction requires N >= 1");
  require(d >= 1.0, "bigbox_fraction requires d >= 1");
  return std::pow(1.0 - std::pow(n, -1.0 / d), d);
}

double kolmogorov_limit_constant() {
  return std::sqrt(std::numbers::pi / 2.0) * std::numbers::ln2;
}

double heuristic_conjecture_rate(double n, double d) {
  require(n >= 2.0, "heuristic_conjecture_rate requires N >= 2");
  require(d >= 1.0, "heuristic_conjecture_rate requires d >= 1");
  return (d + std::sqrt(std::log(n))) * std::exp(-rate_exponent(d) * std::log(n));
}

std::vector<BoundRow> evaluate_all(double n, double d) {
  std::vector<BoundRow> rows;
  rows.push_back({"thm1_lower", thm1_lower(n, d)});
  if (n >= 2.0) {
    rows.push_back({"thm1_upper", thm1_upper(n, d)});
    rows.push_back({"thm1_upper_refined_constant", refined_upper_constant(d)});
    auto [plain, improved] = inverse_disc_bounds(n, d);
    rows.push_back({"inverse_disc_c10", plain});
    rows.push_back({"inverse_disc_c10_min_form", improved});
  }
  if (n >= 2.0 && d >= 2.0) rows.push_back({"hammersley_leading_term", hammersley_leading_bound(n, d)});
  rows.push_back({"bigbox_fraction", bigbox_fraction(n, d)});
  rows.push_back({"kolmogorov_limit_constant", kolmogorov_limit_constant()});
  if (n >= 2.0) rows.push_back({"heuristic_conjecture_rate", heuristic_conjecture_rate(n, d), true});
  return rows;
}

}  // namespace jitter::bounds
