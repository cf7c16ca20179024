#include "jitter/generators.hpp"

#include <mutex>
#include <string>

namespace jitter {

namespace {

Provenance make_provenance(std::string name, std::uint64_t seed,
                           std::map<std::string, std::string> params) {
  return Provenance{std::move(name), seed, std::move(params)};
}

}  // namespace

PointSet gen_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidArgument("gen_uniform requires N >= 1 and d >= 1");
  RngStream rng(seed);
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = rng.uniform();
  return PointSet(d, std::move(coords),
                  make_provenance("uniform", seed, {{"n", std::to_string(n)}}));
}

PointSet gen_grid(std::size_t m, std::size_t d, GridMode mode) {
  if (m < 1 || d < 1) throw InvalidArgument("gen_grid requires m >= 1 and d >= 1");
  const std::size_t n = checked_power(m, d);
  const double offset = mode == GridMode::Center ? 0.5 : 0.0;
  const double md = static_cast<double>(m);
  std::vector<double> coords(n * d);
  std::vector<std::size_t> k(d, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) coords[i * d + j] = (static_cast<double>(k[j]) + offset) / md;
    for (std::size_t j = d; j-- > 0;) {
      if (++k[j] < m) break;
      k[j] = 0;
    }
  }
  return PointSet(d, std::move(coords),
                  make_provenance(mode == GridMode::Center ? "grid" : "grid_corner", 0,
                                  {{"m", std::to_string(m)}}));
}

PointSet gen_jittered(std::size_t m, std::size_t d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw InvalidArgument("gen_jittered requires m >= 1 and d >= 1");
  const std::size_t n = checked_power(m, d);
  const double md = static_cast<double>(m);
  std::vector<double> coords(n * d);
  std::vector<std::size_t> k(d, 0);
  for (std::size_t i = 0; i < n; ++i) {
    // same box bounds and draw order as sample_cell on grid_partition(m, d)
    RngStream rng(mix_seed(seed, i));
    for (std::size_t j = 0; j < d; ++j) {
      coords[i * d + j] = rng.uniform(static_cast<double>(k[j]) / md,
                                      static_cast<double>(k[j] + 1) / md);
    }
    for (std::size_t j = d; j-- > 0;) {
      if (++k[j] < m) break;
      k[j] = 0;
    }
  }
  return PointSet(d, std::move(coords), make_provenance("jittered", seed, {{"m", std::to_string(m)}}));
}

PointSet gen_partition_jittered(const Partition& partition, std::uint64_t seed) {
  const std::size_t d = partition.dim();
  std::vector<double> coords;
  coords.reserve(partition.size() * d);
  for (std::size_t i = 0; i < partition.size(); ++i) {
    RngStream rng(mix_seed(seed, i));
    Point p = sample_cell(partition[i], rng);
    coords.insert(coords.end(), p.coords().begin(), p.coords().end());
  }
  return PointSet(d, std::move(coords),
                  make_provenance("partition", seed, {{"n", std::to_string(partition.size())}}));
}

double radical_inverse(std::uint64_t k, std::uint64_t base) {
  if (base < 2) throw InvalidArgument("radical_inverse requires base >= 2");
  const double inv = 1.0 / static_cast<double>(base);
  double scale = inv;
  double value = 0.0;
  while (k > 0) {
    value += static_cast<double>(k % base) * scale;
    k /= base;
    scale *= inv;
  }
  return value;
}

std::uint64_t nth_prime(std::size_t i) {
  static std::vector<std::uint64_t> primes{2};
  static std::mutex lock;
  std::lock_guard guard(lock);
  for (std::uint64_t c = primes.back() + 1; primes.size() <= i; ++c) {
    bool prime = true;
    for (auto p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes[i];
}

PointSet gen_hammersley(std::size_t n, std::size_t d) {
  if (n < 1 || d < 1) throw InvalidArgument("gen_hammersley requires N >= 1 and d >= 1");
  std::vector<std::uint64_t> bases(d > 1 ? d - 1 : 0);
  for (std::size_t j = 0; j < bases.size(); ++j) bases[j] = nth_prime(j);
  std::vector<double> coords(n * d);
  for (std::size_t k = 0; k < n; ++k) {
    coords[k * d] = static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t j = 1; j < d; ++j) coords[k * d + j] = radical_inverse(k, bases[j - 1]);
  }
  return PointSet(d, std::move(coords), make_provenance("hammersley", 0, {{"n", std::to_string(n)}}));
}

}  // namespace jitter
