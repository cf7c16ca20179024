#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "jitter/discrepancy.hpp"

namespace jitter {

namespace {

// Point indices sorted by their first-axis grid index, for prefix scans.
class IndexedPoints {
 public:
  explicit IndexedPoints(const CriticalGrid& grid, std::size_t n) : d_(grid.dim()) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return grid.index(a, 0) < grid.index(b, 0);
    });
    idx_.reserve(n * d_);
    first_.reserve(n);
    for (auto i : order) {
      for (std::size_t j = 0; j < d_; ++j) idx_.push_back(grid.index(i, j));
      first_.push_back(grid.index(i, 0));
    }
  }

  // Closed count at grid point `hi` and open count at grid point `lo` (lo <= hi).
  void count(const std::uint32_t* lo, const std::uint32_t* hi, std::size_t& closed_hi,
             std::size_t& open_lo) const {
    const auto end = static_cast<std::size_t>(
        std::upper_bound(first_.begin(), first_.end(), hi[0]) - first_.begin());
    std::size_t closed = 0, open = 0;
    for (std::size_t i = 0; i < end; ++i) {
      const std::uint32_t* p = &idx_[i * d_];
      bool in_closed = true, in_open = true;
      for (std::size_t j = 0; j < d_; ++j) {
        in_closed &= p[j] <= hi[j];
        in_open &= p[j] < lo[j];
      }
      closed += in_closed;
      open += in_open;
    }
    closed_hi = closed;
    open_lo = open;
  }

 private:
  std::size_t d_;
  std::vector<std::uint32_t> idx_;
  std::vector<std::uint32_t> first_;
};

struct Entry {
  double bound;
  std::size_t slot;
};

}  // namespace

DiscrepancyResult star_exact_bb(const PointSet& points, BBBudget budget) {
  const std::size_t d = points.dim();
  const std::size_t n = points.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const CriticalGrid grid(points);
  const IndexedPoints indexed(grid, n);
  const auto start = std::chrono::steady_clock::now();

  // Warm start from a short coordinate-ascent run; any attained value is a valid incumbent.
  DiscrepancyResult warm = star_heuristic_lower(points, {d, 0, 0});
  double incumbent = warm.value;
  std::vector<double> witness(warm.witness.upper.coords().begin(), warm.witness.upper.coords().end());

  // Node storage: slot k holds lo[0..d) then hi[0..d).
  std::vector<std::uint32_t> arena;
  std::vector<std::size_t> free_slots;
  auto alloc = [&]() -> std::size_t {
    if (!free_slots.empty()) {
      auto s = free_slots.back();
      free_slots.pop_back();
      return s;
    }
    arena.resize(arena.size() + 2 * d);
    return arena.size() / (2 * d) - 1;
  };
  auto lo_of = [&](std::size_t slot) { return &arena[slot * 2 * d]; };
  auto hi_of = [&](std::size_t slot) { return &arena[slot * 2 * d + d]; };

  auto worse = [&](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    // equal bounds: lexicographically smaller lower index comes first
    const auto* la = &arena[a.slot * 2 * d];
    const auto* lb = &arena[b.slot * 2 * d];
    return std::lexicographical_compare(lb, lb + d, la, la + d);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  auto volume_at = [&](const std::uint32_t* g) {
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) v *= grid.axis(j)[g[j]];
    return v;
  };
  auto record = [&](double value, const std::uint32_t* g) {
    if (value > incumbent) {
      incumbent = value;
      for (std::size_t j = 0; j < d; ++j) witness[j] = grid.axis(j)[g[j]];
    }
  };

  std::uint64_t nodes = 0;
  // Evaluates the box in `slot`; returns its upper bound, or a negative value when it is a leaf.
  auto evaluate = [&](std::size_t slot) {
    ++nodes;
    const auto* lo = lo_of(slot);
    const auto* hi = hi_of(slot);
    std::size_t closed_hi = 0, open_lo = 0;
    indexed.count(lo, hi, closed_hi, open_lo);
    const double vol_lo = volume_at(lo);
    const double vol_hi = volume_at(hi);
    const double closed = static_cast<double>(closed_hi) * inv_n;
    const double opened = static_cast<double>(open_lo) * inv_n;
    record(closed - vol_hi, hi);
    record(vol_lo - opened, lo);
    const bool leaf = std::equal(lo, lo + d, hi);
    return leaf ? -1.0 : std::max(closed - vol_lo, vol_hi - opened);
  };

  {
    const auto root = alloc();
    for (std::size_t j = 0; j < d; ++j) {
      lo_of(root)[j] = 0;
      hi_of(root)[j] = static_cast<std::uint32_t>(grid.axis(j).size() - 1);
    }
    const double bound = evaluate(root);
    if (bound > incumbent) open.push({bound, root});
  }

  bool complete = true;
  std::uint64_t expansions = 0;
  while (!open.empty()) {
    const Entry top = open.top();
    if (top.bound <= incumbent) break;
    open.pop();
    if (nodes >= budget.max_nodes) {
      complete = false;
      break;
    }
    if ((++expansions & 511) == 0 && std::isfinite(budget.max_seconds)) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > budget.max_seconds) {
        complete = false;
        break;
      }
    }

    std::size_t axis = 0;
    std::uint32_t extent = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const std::uint32_t e = hi_of(top.slot)[j] - lo_of(top.slot)[j];
      if (e > extent) {
        extent = e;
        axis = j;
      }
    }
    const std::uint32_t mid = lo_of(top.slot)[axis] + extent / 2;

    const auto left = alloc();
    const auto right = alloc();
    // alloc may reallocate the arena; copy through indices afterwards
    std::copy_n(lo_of(top.slot), 2 * d, lo_of(left));
    std::copy_n(lo_of(top.slot), 2 * d, lo_of(right));
    hi_of(left)[axis] = mid;
    lo_of(right)[axis] = mid + 1;
    free_slots.push_back(top.slot);

    for (auto child : {left, right}) {
      const double bound = evaluate(child);
      if (bound > incumbent) {
        open.push({bound, child});
      } else {
        free_slots.push_back(child);
      }
    }
  }

  return {incumbent, AnchoredBox{Point(std::move(witness))}, StarMethod::ExactBB,
          complete};
}

}  // namespace jitter
