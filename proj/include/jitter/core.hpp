#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jitter {

// Errors ---------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got);
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Point in the unit cube. Coordinates are validated on construction.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  /// Point with every coordinate equal to `value`.
  static Point filled(std::size_t dim, double value);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  bool operator==(const Point&) const = default;

 private:
  std::vector<double> coords_;
};

// Free-form description of where a point set came from.
struct Provenance {
  std::string generator = "unknown";
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
};

// N points of dimension d, stored row-major. Immutable once built.
class PointSet {
 public:
  PointSet(std::size_t dim, std::vector<double> coords, Provenance provenance = {});
  PointSet(std::size_t dim, const std::vector<Point>& points, Provenance provenance = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / dim_; }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  Point point(std::size_t i) const;

  std::span<const double> raw() const { return coords_; }
  const Provenance& provenance() const { return provenance_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  Provenance provenance_;
};

// Box [0, upper] anchored in the origin.
struct AnchoredBox {
  Point upper;
};

double volume_anchored(std::span<const double> x);
inline double volume_anchored(const Point& x) { return volume_anchored(x.coords()); }

/// Number of points p with p_i <= x_i for all i.
std::size_t count_closed(const PointSet& points, const Point& x);
/// Number of points p with p_i < x_i for all i.
std::size_t count_open(const PointSet& points, const Point& x);

/// Index of the grid cell [(k-1)/m, k/m)^d containing x, 1-based per axis.
/// Coordinate 1.0 belongs to cell m.
std::vector<std::size_t> bracket(std::span<const double> x, std::size_t m);
inline std::vector<std::size_t> bracket(const Point& x, std::size_t m) {
  return bracket(x.coords(), m);
}

/// m^d with an overflow guard against `limit`.
std::size_t checked_power(std::size_t m, std::size_t d,
                          std::size_t limit = std::size_t{1} << 40);

// Random streams --------------------------------------------------------------

/// Combine two 64-bit keys into a well-mixed seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
/// FNV-1a over the bytes of `text`; stable across platforms.
std::uint64_t stable_hash(std::string_view text);

// A seeded stream of uniform doubles. Distinct keys give independent streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : engine_(key) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi), or lo when the interval is degenerate.
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace jitter
