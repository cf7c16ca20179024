#include "jitter/core.hpp"

#include <cmath>
#include <limits>

namespace jitter {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(got)) {}

namespace {

void validate_coords(std::span<const double> coords) {
  for (double c : coords) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InvalidArgument("coordinate outside [0,1]: " + std::to_string(c));
    }
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("point must have dimension >= 1");
  validate_coords(coords_);
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point Point::filled(std::size_t dim, double value) {
  return Point(std::vector<double>(dim, value));
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords, Provenance provenance)
    : dim_(dim), coords_(std::move(coords)), provenance_(std::move(provenance)) {
  if (dim_ == 0) throw InvalidArgument("point set dimension must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0) {
    throw InvalidArgument("point set must hold a positive whole number of points");
  }
  validate_coords(coords_);
}

PointSet::PointSet(std::size_t dim, const std::vector<Point>& points, Provenance provenance)
    : dim_(dim), provenance_(std::move(provenance)) {
  if (dim_ == 0) throw InvalidArgument("point set dimension must be >= 1");
  if (points.empty()) throw InvalidArgument("point set must be non-empty");
  coords_.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.dim() != dim) throw DimensionMismatch(dim, p.dim());
    coords_.insert(coords_.end(), p.coords().begin(), p.coords().end());
  }
}

Point PointSet::point(std::size_t i) const {
  auto c = (*this)[i];
  return Point(std::vector<double>(c.begin(), c.end()));
}

double volume_anchored(std::span<const double> x) {
  double v = 1.0;
  for (double c : x) v *= c;
  return v;
}

std::size_t count_closed(const PointSet& points, const Point& x) {
  if (points.dim() != x.dim()) throw DimensionMismatch(points.dim(), x.dim());
  const std::size_t d = x.dim();
  std::size_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    std::size_t j = 0;
    while (j < d && p[j] <= x[j]) ++j;
    count += (j == d);
  }
  return count;
}

std::size_t count_open(const PointSet& points, const Point& x) {
  if (points.dim() != x.dim()) throw DimensionMismatch(points.dim(), x.dim());
  const std::size_t d = x.dim();
  std::size_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    std::size_t j = 0;
    while (j < d && p[j] < x[j]) ++j;
    count += (j == d);
  }
  return count;
}

std::vector<std::size_t> bracket(std::span<const double> x, std::size_t m) {
  if (m < 1) throw InvalidArgument("bracket requires m >= 1");
  std::vector<std::size_t> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto cell = static_cast<std::size_t>(std::floor(static_cast<double>(m) * x[i])) + 1;
    k[i] = cell > m ? m : cell;
  }
  return k;
}

std::size_t checked_power(std::size_t m, std::size_t d, std::size_t limit) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (m != 0 && n > limit / m) {
      throw InvalidArgument("m^d = " + std::to_string(m) + "^" + std::to_string(d) +
                            " exceeds the supported point count");
    }
    n *= m;
  }
  return n;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double RngStream::uniform(double lo, double hi) {
  if (!(hi > lo)) return lo;
  double v = lo + uniform() * (hi - lo);
  // keep the half-open convention under rounding
  return v < hi ? v : std::nextafter(hi, lo);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("RngStream::below requires n >= 1");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

}  // namespace jitter
