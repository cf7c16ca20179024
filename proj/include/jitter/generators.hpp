#pragma once

#include <cstdint>

#include "jitter/core.hpp"
#include "jitter/partition.hpp"

namespace jitter {

/// N i.i.d. uniform points drawn from a single stream keyed by `seed`.
PointSet gen_uniform(std::size_t n, std::size_t d, std::uint64_t seed);

enum class GridMode { Center, Corner };

/// m^d points, lexicographic in cell index. Center mode places ((k-1/2)/m, ...);
/// corner mode places the lower-left corner ((k-1)/m, ...).
PointSet gen_grid(std::size_t m, std::size_t d, GridMode mode = GridMode::Center);

/// One uniform point in each half-open cell of the m^d grid. The point of
/// cell k (lexicographic rank) is drawn from the substream mix_seed(seed, k).
PointSet gen_jittered(std::size_t m, std::size_t d, std::uint64_t seed);

/// One sample_cell draw per partition cell, with the same per-cell substream
/// keying as gen_jittered.
PointSet gen_partition_jittered(const Partition& partition, std::uint64_t seed);

/// Digit reversal of k in base b, placed after the radix point.
double radical_inverse(std::uint64_t k, std::uint64_t base);

/// The i-th prime, 0-based (2, 3, 5, ...).
std::uint64_t nth_prime(std::size_t i);

/// Point k = (k/N, phi_2(k), phi_3(k), phi_5(k), ...), k = 0..N-1.
PointSet gen_hammersley(std::size_t n, std::size_t d);

}  // namespace jitter
