#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jitter::bounds {

// Expected star discrepancy of jittered sampling with N = m^d points is
// sandwiched, for N large enough, between
//   d / (10 N^{1/2 + 1/(2d)})   and   sqrt(d) sqrt(log N) / N^{1/2 + 1/(2d)}.
double thm1_upper(double n, double d);
double thm1_lower(double n, double d);

/// Sharper leading constant of the upper bound, sqrt(3/4 + 1/(4d)).
double refined_upper_constant(double d);

/// Two-sided DKW tail with Massart's constant: 2 exp(-2 n eps^2).
double dkw_tail(double n, double eps);

/// Exponential-moment bound on the 1-D discrepancy of n uniforms:
/// 1 + sqrt(2 pi) (t / sqrt(n)) exp(t^2 / (8 n)).
double lemma31_moment_bound(double t, double n);

/// Tail bound on a sum of d independent 1-D discrepancies:
/// (1 + sqrt(32 pi n) y / d)^d exp(-2 n y^2 / d).
double lemma32_bernstein_tail(double y, double n, double d);

/// P(D*_N >= 2 delta) <= 2 (d/delta + 2)^d exp(-delta^2 N / 2).
double hnww_tail(double delta, double n, double d);

/// Leading term 7 / (2^{d-1} (d-1)) (log N)^{d-1} / N of the Hammersley
/// star-discrepancy bound (remainder excluded).
double hammersley_leading_bound(double n, double d);

/// (10 sqrt(d/N), 10 sqrt(d/N min{1, log N / N^{1/d}})).
std::pair<double, double> inverse_disc_bounds(double n, double d);

/// Fraction (1 - N^{-1/d})^d of points in the big box.
double bigbox_fraction(double n, double d);

/// sqrt(pi/2) log 2, the mean of the Kolmogorov distribution.
double kolmogorov_limit_constant();

/// Conjectural rate (d + sqrt(log N)) / N^{1/2 + 1/(2d)}; diagnostic only.
double heuristic_conjecture_rate(double n, double d);

struct BoundRow {
  std::string name;
  double value;
  bool conjectural = false;
};

/// Every evaluator that makes sense at (N, d), in a fixed order.
std::vector<BoundRow> evaluate_all(double n, double d);

}  // namespace jitter::bounds
