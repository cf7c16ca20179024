#include <algorithm>

#include "jitter/discrepancy.hpp"

namespace jitter {

namespace {

// Local discrepancy at a critical-grid index vector.
class LocalObjective {
 public:
  LocalObjective(const CriticalGrid& grid, std::size_t n)
      : grid_(grid), n_(n), d_(grid.dim()), inv_n_(1.0 / static_cast<double>(n)) {}

  double at(const std::vector<std::uint32_t>& g) const {
    std::size_t closed = 0, open = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      bool c = true, o = true;
      for (std::size_t j = 0; j < d_; ++j) {
        c &= grid_.index(i, j) <= g[j];
        o &= grid_.index(i, j) < g[j];
      }
      closed += c;
      open += o;
    }
    const double vol = volume(g);
    return std::max(static_cast<double>(closed) * inv_n_ - vol,
                    vol - static_cast<double>(open) * inv_n_);
  }

  // Best position along `axis` with the other coordinates of g fixed.
  // Returns the value there; ties keep the current position.
  double optimize_axis(std::vector<std::uint32_t>& g, std::size_t axis, double current) {
    const auto& line = grid_.axis(axis);
    closed_hist_.assign(line.size(), 0);
    open_hist_.assign(line.size(), 0);
    for (std::size_t i = 0; i < n_; ++i) {
      bool c = true, o = true;
      for (std::size_t j = 0; j < d_; ++j) {
        if (j == axis) continue;
        c &= grid_.index(i, j) <= g[j];
        o &= grid_.index(i, j) < g[j];
      }
      const auto k = grid_.index(i, axis);
      closed_hist_[k] += c;
      open_hist_[k] += o;
    }
    double other = 1.0;
    for (std::size_t j = 0; j < d_; ++j) {
      if (j != axis) other *= grid_.axis(j)[g[j]];
    }
    double best = current;
    std::uint32_t best_pos = g[axis];
    std::size_t closed = 0, open = 0;
    for (std::size_t t = 0; t < line.size(); ++t) {
      closed += closed_hist_[t];
      const double vol = other * line[t];
      const double value = std::max(static_cast<double>(closed) * inv_n_ - vol,
                                    vol - static_cast<double>(open) * inv_n_);
      if (value > best) {
        best = value;
        best_pos = static_cast<std::uint32_t>(t);
      }
      open += open_hist_[t];
    }
    g[axis] = best_pos;
    return best;
  }

  double volume(const std::vector<std::uint32_t>& g) const {
    double v = 1.0;
    for (std::size_t j = 0; j < d_; ++j) v *= grid_.axis(j)[g[j]];
    return v;
  }

 private:
  const CriticalGrid& grid_;
  std::size_t n_;
  std::size_t d_;
  double inv_n_;
  std::vector<std::size_t> closed_hist_;
  std::vector<std::size_t> open_hist_;
};

}  // namespace

DiscrepancyResult star_heuristic_lower(const PointSet& points, HeuristicOptions options) {
  const std::size_t d = points.dim();
  const std::size_t restarts = options.restarts ? options.restarts : 16 * d;
  const std::size_t max_sweeps = options.max_sweeps ? options.max_sweeps : 100 * d;
  const CriticalGrid grid(points);
  LocalObjective objective(grid, points.size());

  double best = -1.0;
  std::vector<std::uint32_t> best_g(d, 0);
  std::vector<std::uint32_t> g(d);
  for (std::size_t r = 0; r < restarts; ++r) {
    RngStream rng(mix_seed(options.seed, r));
    for (std::size_t j = 0; j < d; ++j) {
      g[j] = static_cast<std::uint32_t>(rng.below(grid.axis(j).size()));
    }
    double value = objective.at(g);
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = value;
      for (std::size_t j = 0; j < d; ++j) value = objective.optimize_axis(g, j, value);
      if (!(value > before)) break;
    }
    if (value > best) {
      best = value;
      best_g = g;
    }
  }

  std::vector<double> witness(d);
  for (std::size_t j = 0; j < d; ++j) witness[j] = grid.axis(j)[best_g[j]];
  return {best, AnchoredBox{Point(std::move(witness))}, StarMethod::Heuristic, false};
}

}  // namespace jitter
