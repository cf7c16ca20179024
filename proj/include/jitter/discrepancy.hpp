#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "jitter/core.hpp"
#include "jitter/partition.hpp"

namespace jitter {

enum class StarMethod { Exact1d, ExactGrid, ExactBB, Heuristic };

const char* to_string(StarMethod method);
StarMethod star_method_from_string(const std::string& name);

struct DiscrepancyResult {
  double value = 0.0;
  AnchoredBox witness;
  StarMethod method = StarMethod::ExactGrid;
  bool is_exact = false;
};

// Per-axis sorted, deduplicated point coordinates with 1 appended. The star
// discrepancy supremum is attained on (or approached at) these grid points.
class CriticalGrid {
 public:
  explicit CriticalGrid(const PointSet& points);

  std::size_t dim() const { return axes_.size(); }
  const std::vector<double>& axis(std::size_t j) const { return axes_[j]; }
  /// Product of axis lengths, saturating at the max of double.
  double size() const;

  /// Position of point i's j-th coordinate within axis(j).
  std::uint32_t index(std::size_t i, std::size_t j) const { return index_[i * axes_.size() + j]; }
  const std::vector<std::uint32_t>& indices() const { return index_; }

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<std::uint32_t> index_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double needed, double budget);
  double needed() const { return needed_; }

 private:
  double needed_;
};

inline constexpr double kDefaultEnumerationBudget = 2e8;

/// Exact one-dimensional star discrepancy from the order statistics.
DiscrepancyResult star_1d_exact(const PointSet& points);

/// Exact star discrepancy by evaluating every critical-grid point. Sweeps the
/// first axis while maintaining prefix counts over the remaining axes, so the
/// cost is O(d * grid size). Throws BudgetExceeded when the grid is too large.
DiscrepancyResult star_exact_grid(const PointSet& points,
                                  double budget = kDefaultEnumerationBudget);

struct BBBudget {
  std::uint64_t max_nodes = 200'000'000;
  double max_seconds = std::numeric_limits<double>::infinity();
};

/// Exact star discrepancy by best-bound-first branch and bound over
/// critical-grid index boxes. On budget exhaustion returns the best value
/// found with is_exact = false.
DiscrepancyResult star_exact_bb(const PointSet& points, BBBudget budget = {});

struct HeuristicOptions {
  std::size_t restarts = 0;  ///< 0 selects 16 * d
  std::size_t max_sweeps = 0;  ///< per restart; 0 selects 100 * d
  std::uint64_t seed = 0;
};

/// Multistart coordinate ascent on the critical grid. The returned value is
/// always attained (or approached) by an anchored box, so it never exceeds D*.
DiscrepancyResult star_heuristic_lower(const PointSet& points, HeuristicOptions options = {});

/// Squared L2 star discrepancy by the closed-form pairwise expansion, O(N^2 d).
double l2_star(const PointSet& points);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of the squared L2 discrepancy integral.
MonteCarloEstimate l2_bruteforce(const PointSet& points, std::size_t samples, std::uint64_t seed);

/// E L2^2 for N i.i.d. uniform points: (2^-d - 3^-d) / N.
double expected_l2sq_random(std::size_t n, std::size_t d);

/// E L2^2 for the jittered set of `partition`, exactly, from the variance of
/// the per-cell Bernoulli counts integrated in closed form over box pairs.
double expected_l2sq_partition(const Partition& partition);

/// var(#P_Omega ∩ [0,x]) = N |[0,x]| - N^2 sum_i |Omega_i ∩ [0,x]|^2
double pointwise_count_variance(const Partition& partition, const Point& x);

/// ∫_0^1 clamp(x - a_lo, 0, a_hi - a_lo) * clamp(x - b_lo, 0, b_hi - b_lo) dx
double ramp_product_integral(double a_lo, double a_hi, double b_lo, double b_hi);

}  // namespace jitter
