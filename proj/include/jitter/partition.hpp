#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jitter/core.hpp"

namespace jitter {

// Axis-aligned box [lower, upper] inside the unit cube.
class Box {
 public:
  Box(Point lower, Point upper);

  std::size_t dim() const { return lower_.dim(); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  double volume() const;

  /// |[lower, upper] ∩ [0, x]|
  double anchored_overlap(std::span<const double> x) const;

 private:
  Point lower_;
  Point upper_;
};

// A cell is a finite union of interior-disjoint boxes.
class Cell {
 public:
  explicit Cell(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  double measure() const { return measure_; }
  std::size_t dim() const { return boxes_.front().dim(); }

 private:
  std::vector<Box> boxes_;
  double measure_;
};

class PartitionError : public Error {
 public:
  enum class Kind { MeasureMismatch, Overlap, CoverageGap, Malformed };

  PartitionError(Kind kind, std::size_t cell, double defect, const std::string& what);

  Kind kind() const { return kind_; }
  std::size_t cell() const { return cell_; }
  double defect() const { return defect_; }

 private:
  Kind kind_;
  std::size_t cell_;
  double defect_;
};

const char* to_string(PartitionError::Kind kind);

// Tolerance on |cell measure - 1/N|.
inline constexpr double kMeasureTolerance = 1e-12;

// N cells of measure 1/N covering the unit cube. Cell order is significant.
class Partition {
 public:
  /// Validates equal measure, pairwise disjointness and coverage.
  Partition(std::size_t dim, std::vector<Cell> cells);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return cells_.size(); }
  const Cell& operator[](std::size_t i) const { return cells_[i]; }
  const std::vector<Cell>& cells() const { return cells_; }

  struct TrustedTag {};
  /// Skips the pairwise overlap scan; measures and coverage are still checked.
  /// For constructions that are disjoint by design.
  Partition(std::size_t dim, std::vector<Cell> cells, TrustedTag);

 private:
  void validate(bool check_overlap) const;

  std::size_t dim_;
  std::vector<Cell> cells_;
};

/// m^d grid cells in lexicographic order of their 1-based index vector.
Partition grid_partition(std::size_t m, std::size_t d);

/// The m_fine^d grid subcubes, shuffled with `seed` and dealt in equal blocks to N cells.
Partition randomized_fine_grid_partition(std::size_t m_fine, std::size_t n_cells, std::size_t d,
                                         std::uint64_t seed);

/// Random guillotine partition into n_cells * pieces_per_cell equal boxes,
/// randomly grouped `pieces_per_cell` at a time into cells.
Partition random_box_partition(std::size_t n_cells, std::size_t d, std::size_t pieces_per_cell,
                               std::uint64_t seed);

double cell_anchored_overlap(const Cell& cell, std::span<const double> x);
inline double cell_anchored_overlap(const Cell& cell, const Point& x) {
  if (x.dim() != cell.dim()) throw DimensionMismatch(cell.dim(), x.dim());
  return cell_anchored_overlap(cell, x.coords());
}

/// Uniform point in the cell: pick a box with probability proportional to its
/// volume, then sample uniformly inside it. Single-box cells consume no
/// selection draw.
Point sample_cell(const Cell& cell, RngStream& rng);

// Partition description files (JSON):
//   {"dim": d, "n_cells": N, "cells": [{"boxes": [{"lower": [...], "upper": [...]}]}]}
Partition box_partition_from_json(const std::string& text);
Partition load_partition(const std::filesystem::path& path);
std::string partition_to_json(const Partition& partition);

}  // namespace jitter
