#include <algorithm>
#include <array>
#include <cmath>

#include "jitter/discrepancy.hpp"

namespace jitter {

double l2_star(const PointSet& points) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = points[i];
    double diag = 1.0;
    for (std::size_t k = 0; k < d; ++k) diag *= 1.0 - p[k];
    pair_sum += diag;
    for (std::size_t j = i + 1; j < n; ++j) {
      auto q = points[j];
      double prod = 1.0;
      for (std::size_t k = 0; k < d; ++k) prod *= 1.0 - std::max(p[k], q[k]);
      pair_sum += 2.0 * prod;
    }
  }
  double single_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = points[i];
    double prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) prod *= 1.0 - p[k] * p[k];
    single_sum += prod;
  }
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double value = pair_sum / (nd * nd) - 2.0 * std::pow(2.0, -dd) * single_sum / nd +
                       std::pow(3.0, -dd);
  // rounding can push an exact zero slightly negative
  return std::max(value, 0.0);
}

MonteCarloEstimate l2_bruteforce(const PointSet& points, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("l2_bruteforce requires samples >= 1");
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const double inv_n = 1.0 / static_cast<double>(n);
  RngStream rng(seed);
  std::vector<double> x(d);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double vol = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = rng.uniform();
      vol *= x[k];
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto p = points[i];
      std::size_t k = 0;
      while (k < d && p[k] <= x[k]) ++k;
      count += (k == d);
    }
    const double diff = static_cast<double>(count) * inv_n - vol;
    const double f = diff * diff;
    const double delta = f - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (f - mean);
  }
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

double expected_l2sq_random(std::size_t n, std::size_t d) {
  if (n < 1) throw InvalidArgument("expected_l2sq_random requires N >= 1");
  const double dd = static_cast<double>(d);
  return (std::pow(2.0, -dd) - std::pow(3.0, -dd)) / static_cast<double>(n);
}

double ramp_product_integral(double a_lo, double a_hi, double b_lo, double b_hi) {
  auto ramp = [](double x, double lo, double hi) { return std::clamp(x - lo, 0.0, hi - lo); };
  auto f = [&](double x) { return ramp(x, a_lo, a_hi) * ramp(x, b_lo, b_hi); };
  std::array<double, 6> knots{0.0, a_lo, a_hi, b_lo, b_hi, 1.0};
  std::sort(knots.begin(), knots.end());
  // The integrand is a quadratic polynomial between consecutive knots, so Simpson is exact.
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double u = knots[i], v = knots[i + 1];
    if (!(v > u)) continue;
    total += (v - u) / 6.0 * (f(u) + 4.0 * f(0.5 * (u + v)) + f(v));
  }
  return total;
}

namespace {

// Kahan-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double box_pair_integral(const Box& a, const Box& b) {
  double prod = 1.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    prod *= ramp_product_integral(a.lower()[k], a.upper()[k], b.lower()[k], b.upper()[k]);
  }
  return prod;
}

}  // namespace

double expected_l2sq_partition(const Partition& partition) {
  const double n = static_cast<double>(partition.size());
  const double dd = static_cast<double>(partition.dim());
  // sum_i ∫ w_i(x)^2 dx with w_i(x) = |Omega_i ∩ [0,x]|
  CompensatedSum squared;
  for (const auto& cell : partition.cells()) {
    const auto& boxes = cell.boxes();
    for (std::size_t a = 0; a < boxes.size(); ++a) {
      squared.add(box_pair_integral(boxes[a], boxes[a]));
      for (std::size_t b = a + 1; b < boxes.size(); ++b) {
        squared.add(2.0 * box_pair_integral(boxes[a], boxes[b]));
      }
    }
  }
  const double value = (n * std::pow(2.0, -dd) - n * n * squared.value()) / (n * n);
  return value;
}

double pointwise_count_variance(const Partition& partition, const Point& x) {
  if (x.dim() != partition.dim()) throw DimensionMismatch(partition.dim(), x.dim());
  const double n = static_cast<double>(partition.size());
  CompensatedSum squares;
  for (const auto& cell : partition.cells()) {
    const double w = cell_anchored_overlap(cell, x.coords());
    squares.add(w * w);
  }
  return n * volume_anchored(x) - n * n * squares.value();
}

}  // namespace jitter
