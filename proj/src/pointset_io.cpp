#include "jitter/pointset_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace jitter {

void write_pointset(std::ostream& out, const PointSet& points) {
  const auto& prov = points.provenance();
  out << "# dim=" << points.dim() << " n=" << points.size()
      << " generator=" << prov.generator << " seed=" << prov.seed << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out << ' ';
      out << p[j];
    }
    out << '\n';
  }
}

PointSet read_pointset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw Error("point-set file: missing '# dim=... n=...' header");
  }
  std::size_t dim = 0, n = 0;
  bool have_dim = false, have_n = false;
  Provenance prov;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw Error("point-set header: malformed field '" + field + "'");
    auto key = field.substr(0, eq);
    auto value = field.substr(eq + 1);
    if (key == "dim") {
      dim = std::stoull(value);
      have_dim = true;
    } else if (key == "n") {
      n = std::stoull(value);
      have_n = true;
    } else if (key == "generator") {
      prov.generator = value;
    } else if (key == "seed") {
      prov.seed = std::stoull(value);
    }
  }
  if (!have_dim || !have_n) throw Error("point-set header: dim and n are required");

  std::vector<double> coords;
  coords.reserve(dim * n);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::size_t before = coords.size();
    double v;
    while (row >> v) coords.push_back(v);
    if (!row.eof()) throw Error("point-set file: bad number on data line " + std::to_string(rows + 1));
    if (coords.size() - before != dim) {
      throw Error("point-set file: line " + std::to_string(rows + 1) + " has " +
                  std::to_string(coords.size() - before) + " coordinates, expected " +
                  std::to_string(dim));
    }
    ++rows;
  }
  if (rows != n) {
    throw Error("point-set file: header says n=" + std::to_string(n) + " but found " +
                std::to_string(rows) + " points");
  }
  return PointSet(dim, std::move(coords), std::move(prov));
}

void save_pointset(const std::filesystem::path& path, const PointSet& points) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_pointset(out, points);
}

PointSet load_pointset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_pointset(in);
}

}  // namespace jitter
