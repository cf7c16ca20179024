#pragma once

#include <filesystem>
#include <iosfwd>

#include "jitter/core.hpp"

namespace jitter {

// Text format: a header line "# dim=<d> n=<N> generator=<name> seed=<u64>"
// followed by one point per line, coordinates separated by single spaces and
// printed with 17 significant digits.

void write_pointset(std::ostream& out, const PointSet& points);
PointSet read_pointset(std::istream& in);

void save_pointset(const std::filesystem::path& path, const PointSet& points);
PointSet load_pointset(const std::filesystem::path& path);

}  // namespace jitter
