#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jitter/discrepancy.hpp"

namespace jitter {

const char* to_string(StarMethod method) {
  switch (method) {
    case StarMethod::Exact1d: return "exact_1d";
    case StarMethod::ExactGrid: return "exact_grid";
    case StarMethod::ExactBB: return "exact_bb";
    case StarMethod::Heuristic: return "heuristic";
  }
  return "?";
}

StarMethod star_method_from_string(const std::string& name) {
  if (name == "exact_1d" || name == "exact-1d") return StarMethod::Exact1d;
  if (name == "exact_grid" || name == "exact-grid") return StarMethod::ExactGrid;
  if (name == "exact_bb" || name == "exact-bb") return StarMethod::ExactBB;
  if (name == "heuristic") return StarMethod::Heuristic;
  throw InvalidArgument("unknown discrepancy method '" + name + "'");
}

BudgetExceeded::BudgetExceeded(double needed, double budget)
    : Error([&] {
        std::ostringstream s;
        s << "critical grid has " << needed << " points, enumeration budget is " << budget
          << "; use exact_bb or the heuristic";
        return s.str();
      }()),
      needed_(needed) {}

CriticalGrid::CriticalGrid(const PointSet& points) : axes_(points.dim()) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  index_.resize(n * d);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = points[i][j];
    auto& axis = axes_[j];
    axis = column;
    axis.push_back(1.0);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    for (std::size_t i = 0; i < n; ++i) {
      index_[i * d + j] = static_cast<std::uint32_t>(
          std::lower_bound(axis.begin(), axis.end(), column[i]) - axis.begin());
    }
  }
}

double CriticalGrid::size() const {
  double total = 1.0;
  for (const auto& a : axes_) total *= static_cast<double>(a.size());
  return total;
}

DiscrepancyResult star_1d_exact(const PointSet& points) {
  if (points.dim() != 1) throw DimensionMismatch(1, points.dim());
  std::vector<double> xs(points.raw().begin(), points.raw().end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double best = -1.0;
  double witness = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - xs[i];
    const double below = xs[i] - static_cast<double>(i) / n;
    if (above > best) {
      best = above;
      witness = xs[i];
    }
    if (below > best) {
      best = below;
      witness = xs[i];
    }
  }
  return {best, AnchoredBox{Point{witness}}, StarMethod::Exact1d, true};
}

DiscrepancyResult star_exact_grid(const PointSet& points, double budget) {
  const CriticalGrid grid(points);
  if (grid.size() > budget) throw BudgetExceeded(grid.size(), budget);

  const std::size_t d = points.dim();
  const std::size_t n = points.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Axes 1..d-1 live in a padded array: index g maps to g + 1, slot 0 holds zeros.
  std::vector<std::size_t> stride(d, 1);
  std::size_t padded = 1;
  for (std::size_t j = d; j-- > 1;) {
    stride[j] = padded;
    padded *= grid.axis(j).size() + 1;
  }
  std::size_t all_ones = 0;
  for (std::size_t j = 1; j < d; ++j) all_ones += stride[j];

  // Volume of the rest-axes corner per padded slot; negative marks padding.
  std::vector<double> rest_volume(padded, 1.0);
  for (std::size_t f = 0; f < padded; ++f) {
    std::size_t rem = f;
    for (std::size_t j = 1; j < d; ++j) {
      const std::size_t g = rem / stride[j];
      rem %= stride[j];
      if (g == 0) {
        rest_volume[f] = -1.0;
        break;
      }
      rest_volume[f] *= grid.axis(j)[g - 1];
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid.index(a, 0) < grid.index(b, 0); });

  std::vector<std::int32_t> counts(padded, 0), cur(padded, 0), prev(padded, 0);
  const auto& axis0 = grid.axis(0);
  double best = -1.0;
  std::size_t best_col = 0, best_slot = 0;
  std::size_t next = 0;
  for (std::size_t c = 0; c < axis0.size(); ++c) {
    for (; next < n && grid.index(order[next], 0) == c; ++next) {
      std::size_t f = 0;
      for (std::size_t j = 1; j < d; ++j) f += (grid.index(order[next], j) + 1) * stride[j];
      ++counts[f];
    }
    cur = counts;
    for (std::size_t j = 1; j < d; ++j) {
      const std::size_t len = grid.axis(j).size() + 1;
      const std::size_t s = stride[j];
      // prefix sums along axis j
      for (std::size_t f = 0; f < padded; ++f) {
        if ((f / s) % len != 0) cur[f] += cur[f - s];
      }
    }
    const double x0 = axis0[c];
    for (std::size_t f = 0; f < padded; ++f) {
      if (rest_volume[f] < 0.0) continue;
      const double vol = x0 * rest_volume[f];
      const double closed = static_cast<double>(cur[f]) * inv_n;
      const double open = static_cast<double>(prev[f - all_ones]) * inv_n;
      const double local = std::max(closed - vol, vol - open);
      if (local > best) {
        best = local;
        best_col = c;
        best_slot = f;
      }
    }
    std::swap(prev, cur);
  }

  std::vector<double> witness(d);
  witness[0] = axis0[best_col];
  std::size_t rem = best_slot;
  for (std::size_t j = 1; j < d; ++j) {
    witness[j] = grid.axis(j)[rem / stride[j] - 1];
    rem %= stride[j];
  }
  return {best, AnchoredBox{Point(std::move(witness))}, StarMethod::ExactGrid, true};
}

}  // namespace jitter
