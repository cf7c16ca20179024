#include "jitter/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace jitter {

Box::Box(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.dim() != upper_.dim()) throw DimensionMismatch(lower_.dim(), upper_.dim());
  for (std::size_t i = 0; i < lower_.dim(); ++i) {
    if (lower_[i] > upper_[i]) throw InvalidArgument("box lower corner exceeds upper corner");
  }
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= upper_[i] - lower_[i];
  return v;
}

double Box::anchored_overlap(std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    double side = std::clamp(x[i] - lower_[i], 0.0, upper_[i] - lower_[i]);
    if (side == 0.0) return 0.0;
    v *= side;
  }
  return v;
}

Cell::Cell(std::vector<Box> boxes) : boxes_(std::move(boxes)), measure_(0.0) {
  if (boxes_.empty()) throw InvalidArgument("cell needs at least one box");
  for (const auto& b : boxes_) {
    if (b.dim() != boxes_.front().dim()) throw DimensionMismatch(boxes_.front().dim(), b.dim());
    measure_ += b.volume();
  }
}

PartitionError::PartitionError(Kind kind, std::size_t cell, double defect, const std::string& what)
    : Error(std::string(to_string(kind)) + " at cell " + std::to_string(cell) + ": " + what),
      kind_(kind),
      cell_(cell),
      defect_(defect) {}

const char* to_string(PartitionError::Kind kind) {
  switch (kind) {
    case PartitionError::Kind::MeasureMismatch: return "MeasureMismatch";
    case PartitionError::Kind::Overlap: return "Overlap";
    case PartitionError::Kind::CoverageGap: return "CoverageGap";
    case PartitionError::Kind::Malformed: return "Malformed";
  }
  return "?";
}

namespace {

double intersection_volume(const Box& a, const Box& b) {
  double v = 1.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double side = std::min(a.upper()[i], b.upper()[i]) - std::max(a.lower()[i], b.lower()[i]);
    if (side <= 0.0) return 0.0;
    v *= side;
  }
  return v;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

Partition::Partition(std::size_t dim, std::vector<Cell> cells)
    : dim_(dim), cells_(std::move(cells)) {
  validate(true);
}

Partition::Partition(std::size_t dim, std::vector<Cell> cells, TrustedTag)
    : dim_(dim), cells_(std::move(cells)) {
  validate(false);
}

void Partition::validate(bool check_overlap) const {
  using Kind = PartitionError::Kind;
  if (dim_ == 0) throw PartitionError(Kind::Malformed, 0, 0.0, "dimension must be >= 1");
  if (cells_.empty()) throw PartitionError(Kind::CoverageGap, 0, 1.0, "no cells");
  const double n = static_cast<double>(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].dim() != dim_) {
      throw PartitionError(Kind::Malformed, i, 0.0,
                           "cell dimension " + std::to_string(cells_[i].dim()) +
                               " differs from partition dimension " + std::to_string(dim_));
    }
    double defect = cells_[i].measure() - 1.0 / n;
    if (std::abs(defect) > kMeasureTolerance) {
      throw PartitionError(Kind::MeasureMismatch, i, defect,
                           "measure " + fmt(cells_[i].measure()) + " != 1/" +
                               std::to_string(cells_.size()) + " (defect " + fmt(defect) + ")");
    }
  }

  if (check_overlap) {
    // sweep over boxes ordered by their lower corner in the first axis
    struct Ref {
      const Box* box;
      std::size_t cell;
    };
    std::vector<Ref> refs;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      for (const auto& b : cells_[i].boxes()) refs.push_back({&b, i});
    }
    std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
      return a.box->lower()[0] < b.box->lower()[0];
    });
    for (std::size_t a = 0; a < refs.size(); ++a) {
      for (std::size_t b = a + 1; b < refs.size(); ++b) {
        if (refs[b].box->lower()[0] >= refs[a].box->upper()[0]) break;
        double v = intersection_volume(*refs[a].box, *refs[b].box);
        if (v > 1e-15) {
          std::size_t lo = std::min(refs[a].cell, refs[b].cell);
          std::size_t hi = std::max(refs[a].cell, refs[b].cell);
          throw PartitionError(Kind::Overlap, lo, v,
                               "boxes of cells " + std::to_string(lo) + " and " +
                                   std::to_string(hi) + " overlap with volume " + fmt(v));
        }
      }
    }
  }

  // With disjoint boxes inside the cube, full coverage is equivalent to total overlap 1 at (1,...,1).
  std::vector<double> ones(dim_, 1.0);
  double total = 0.0;
  for (const auto& c : cells_) total += cell_anchored_overlap(c, ones);
  double gap = 1.0 - total;
  if (std::abs(gap) > n * kMeasureTolerance) {
    throw PartitionError(Kind::CoverageGap, cells_.size() - 1, gap,
                         "cells cover " + fmt(total) + " of the unit cube");
  }
}

namespace {

// Box of the grid cell with 0-based index vector `k`.
Box grid_box(const std::vector<std::size_t>& k, std::size_t m) {
  std::vector<double> lo(k.size()), hi(k.size());
  const double md = static_cast<double>(m);
  for (std::size_t i = 0; i < k.size(); ++i) {
    lo[i] = static_cast<double>(k[i]) / md;
    hi[i] = static_cast<double>(k[i] + 1) / md;
  }
  return Box(Point(std::move(lo)), Point(std::move(hi)));
}

// Advance a 0-based index vector in lexicographic order (last axis fastest).
bool next_index(std::vector<std::size_t>& k, std::size_t m) {
  for (std::size_t i = k.size(); i-- > 0;) {
    if (++k[i] < m) return true;
    k[i] = 0;
  }
  return false;
}

std::vector<Box> grid_boxes(std::size_t m, std::size_t d) {
  std::vector<Box> boxes;
  boxes.reserve(checked_power(m, d));
  std::vector<std::size_t> k(d, 0);
  do {
    boxes.push_back(grid_box(k, m));
  } while (next_index(k, m));
  return boxes;
}

}  // namespace

Partition grid_partition(std::size_t m, std::size_t d) {
  if (m < 1 || d < 1) throw InvalidArgument("grid_partition requires m >= 1 and d >= 1");
  std::vector<Cell> cells;
  for (auto& b : grid_boxes(m, d)) cells.emplace_back(std::vector<Box>{std::move(b)});
  return Partition(d, std::move(cells), Partition::TrustedTag{});
}

Partition randomized_fine_grid_partition(std::size_t m_fine, std::size_t n_cells, std::size_t d,
                                         std::uint64_t seed) {
  if (m_fine < 1 || n_cells < 1 || d < 1) {
    throw InvalidArgument("randomized_fine_grid_partition requires positive arguments");
  }
  const std::size_t total = checked_power(m_fine, d);
  if (total < n_cells || total % n_cells != 0) {
    throw InvalidArgument("m_fine^d = " + std::to_string(total) +
                          " must be a positive multiple of N = " + std::to_string(n_cells));
  }
  auto boxes = grid_boxes(m_fine, d);
  RngStream rng(seed);
  std::shuffle(boxes.begin(), boxes.end(), rng.engine());
  const std::size_t block = total / n_cells;
  std::vector<Cell> cells;
  cells.reserve(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    std::vector<Box> mine(boxes.begin() + static_cast<std::ptrdiff_t>(i * block),
                          boxes.begin() + static_cast<std::ptrdiff_t>((i + 1) * block));
    cells.emplace_back(std::move(mine));
  }
  return Partition(d, std::move(cells), Partition::TrustedTag{});
}

namespace {

// Split `box` into `pieces` boxes of equal volume by random guillotine cuts.
void guillotine(const std::vector<double>& lo, const std::vector<double>& hi, std::size_t pieces,
                RngStream& rng, std::vector<Box>& out) {
  if (pieces == 1) {
    out.emplace_back(Point(lo), Point(hi));
    return;
  }
  const std::size_t axis = rng.below(lo.size());
  const std::size_t left = 1 + rng.below(pieces - 1);
  const double cut = lo[axis] + (hi[axis] - lo[axis]) * static_cast<double>(left) /
                                    static_cast<double>(pieces);
  auto mid_hi = hi;
  mid_hi[axis] = cut;
  auto mid_lo = lo;
  mid_lo[axis] = cut;
  guillotine(lo, mid_hi, left, rng, out);
  guillotine(mid_lo, hi, pieces - left, rng, out);
}

}  // namespace

Partition random_box_partition(std::size_t n_cells, std::size_t d, std::size_t pieces_per_cell,
                               std::uint64_t seed) {
  if (n_cells < 1 || d < 1 || pieces_per_cell < 1) {
    throw InvalidArgument("random_box_partition requires positive arguments");
  }
  RngStream rng(seed);
  std::vector<Box> boxes;
  guillotine(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0), n_cells * pieces_per_cell,
             rng, boxes);
  std::shuffle(boxes.begin(), boxes.end(), rng.engine());
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n_cells; ++i) {
    std::vector<Box> mine(boxes.begin() + static_cast<std::ptrdiff_t>(i * pieces_per_cell),
                          boxes.begin() + static_cast<std::ptrdiff_t>((i + 1) * pieces_per_cell));
    cells.emplace_back(std::move(mine));
  }
  return Partition(d, std::move(cells));
}

double cell_anchored_overlap(const Cell& cell, std::span<const double> x) {
  double total = 0.0;
  for (const auto& b : cell.boxes()) total += b.anchored_overlap(x);
  return total;
}

Point sample_cell(const Cell& cell, RngStream& rng) {
  if (!(cell.measure() > 0.0)) throw InvalidArgument("cannot sample a zero-measure cell");
  const auto& boxes = cell.boxes();
  std::size_t chosen = 0;
  if (boxes.size() > 1) {
    const double target = rng.uniform() * cell.measure();
    double acc = 0.0;
    chosen = boxes.size() - 1;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      acc += boxes[i].volume();
      if (target < acc) {
        chosen = i;
        break;
      }
    }
    // zero-volume trailing boxes are never selected
    while (boxes[chosen].volume() == 0.0 && chosen > 0) --chosen;
  }
  const Box& b = boxes[chosen];
  std::vector<double> coords(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) coords[i] = rng.uniform(b.lower()[i], b.upper()[i]);
  return Point(std::move(coords));
}

Partition box_partition_from_json(const std::string& text) {
  using nlohmann::json;
  using Kind = PartitionError::Kind;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw PartitionError(Kind::Malformed, 0, 0.0, std::string("invalid JSON: ") + e.what());
  }
  try {
    const auto dim = doc.at("dim").get<std::size_t>();
    const auto& jcells = doc.at("cells");
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < jcells.size(); ++i) {
      std::vector<Box> boxes;
      for (const auto& jb : jcells[i].at("boxes")) {
        auto lo = jb.at("lower").get<std::vector<double>>();
        auto hi = jb.at("upper").get<std::vector<double>>();
        if (lo.size() != dim || hi.size() != dim) {
          throw PartitionError(Kind::Malformed, i, 0.0, "box dimension differs from dim");
        }
        try {
          boxes.emplace_back(Point(std::move(lo)), Point(std::move(hi)));
        } catch (const InvalidArgument& e) {
          throw PartitionError(Kind::Malformed, i, 0.0, e.what());
        }
      }
      if (boxes.empty()) throw PartitionError(Kind::Malformed, i, 0.0, "cell has no boxes");
      cells.emplace_back(std::move(boxes));
    }
    if (doc.contains("n_cells")) {
      const auto declared = doc.at("n_cells").get<std::size_t>();
      if (declared != cells.size()) {
        throw PartitionError(Kind::CoverageGap, cells.size(),
                             static_cast<double>(declared) - static_cast<double>(cells.size()),
                             "n_cells=" + std::to_string(declared) + " but " +
                                 std::to_string(cells.size()) + " cells listed");
      }
    }
    return Partition(dim, std::move(cells));
  } catch (const json::exception& e) {
    throw PartitionError(Kind::Malformed, 0, 0.0, std::string("bad partition file: ") + e.what());
  }
}

Partition load_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return box_partition_from_json(buf.str());
}

std::string partition_to_json(const Partition& partition) {
  using nlohmann::json;
  json doc;
  doc["dim"] = partition.dim();
  doc["n_cells"] = partition.size();
  json cells = json::array();
  for (const auto& c : partition.cells()) {
    json boxes = json::array();
    for (const auto& b : c.boxes()) {
      boxes.push_back({{"lower", std::vector<double>(b.lower().coords().begin(), b.lower().coords().end())},
                       {"upper", std::vector<double>(b.upper().coords().begin(), b.upper().coords().end())}});
    }
    cells.push_back({{"boxes", boxes}});
  }
  doc["cells"] = cells;
  return doc.dump();
}

}  // namespace jitter
