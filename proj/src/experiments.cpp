#include "jitter/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "jitter/bounds.hpp"
#include "jitter/generators.hpp"

namespace jitter::experiments {

using nlohmann::json;

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::Table1: return "table1";
    case Kind::PartitionPrinciple: return "partition";
    case Kind::Scaling: return "scaling";
    case Kind::DkwTails: return "dkw";
    case Kind::MomentBound: return "moment";
    case Kind::Kolmogorov: return "kolmogorov";
    case Kind::HammersleyCompare: return "hammersley";
  }
  return "?";
}

Kind kind_from_string(const std::string& name) {
  if (name == "table1") return Kind::Table1;
  if (name == "partition" || name == "partition_principle") return Kind::PartitionPrinciple;
  if (name == "scaling") return Kind::Scaling;
  if (name == "dkw" || name == "dkw_tails") return Kind::DkwTails;
  if (name == "moment" || name == "moment_bound") return Kind::MomentBound;
  if (name == "kolmogorov") return Kind::Kolmogorov;
  if (name == "hammersley" || name == "hammersley_compare") return Kind::HammersleyCompare;
  throw InvalidArgument("unknown experiment kind '" + name + "'");
}

const char* to_string(MethodPreference method) {
  switch (method) {
    case MethodPreference::ExactGrid: return "exact_grid";
    case MethodPreference::ExactBB: return "exact_bb";
    case MethodPreference::Heuristic: return "heuristic";
    case MethodPreference::Auto: return "auto";
  }
  return "?";
}

MethodPreference method_from_string(const std::string& name) {
  if (name == "exact_grid" || name == "exact-grid") return MethodPreference::ExactGrid;
  if (name == "exact_bb" || name == "exact-bb") return MethodPreference::ExactBB;
  if (name == "heuristic") return MethodPreference::Heuristic;
  if (name == "auto") return MethodPreference::Auto;
  throw InvalidArgument("unknown method '" + name + "'");
}

// Partitions -----------------------------------------------------------------

std::string PartitionSource::label() const {
  std::ostringstream s;
  if (type == "grid") {
    s << "grid_m" << m << "_d" << d;
  } else if (type == "single") {
    s << "single_d" << d;
  } else if (type == "random_box") {
    s << "boxes_n" << n << "_d" << d << "_p" << pieces << "_s" << seed;
  } else if (type == "fine_grid") {
    s << "fine_m" << m << "_n" << n << "_d" << d << "_s" << seed;
  } else if (type == "file") {
    s << "file_" << std::filesystem::path(path).stem().string();
  } else {
    s << type;
  }
  return s.str();
}

Partition PartitionSource::build() const {
  if (type == "grid") return grid_partition(m, d);
  if (type == "single") return grid_partition(1, d);
  if (type == "random_box") return random_box_partition(n, d, pieces, seed);
  if (type == "fine_grid") return randomized_fine_grid_partition(m, n, d, seed);
  if (type == "file") return load_partition(path);
  throw InvalidArgument("unknown partition source type '" + type + "'");
}

// Configuration ----------------------------------------------------------------

namespace {

template <class T>
void read(const json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  ExperimentConfig c;
  try {
    if (doc.contains("kind")) c.kind = kind_from_string(doc.at("kind").get<std::string>());
    read(doc, "seed", c.seed);
    read(doc, "replications", c.replications);
    if (doc.contains("method")) c.method = method_from_string(doc.at("method").get<std::string>());
    read(doc, "grid_budget", c.grid_budget);
    read(doc, "bb_seconds", c.bb_seconds);
    read(doc, "heuristic_restarts", c.heuristic_restarts);
    read(doc, "allow_heuristic", c.allow_heuristic);
    read(doc, "threads", c.threads);
    read(doc, "keep_records", c.keep_records);
    if (doc.contains("cells")) {
      for (const auto& j : doc.at("cells")) {
        GridCell g;
        read(j, "d", g.d);
        read(j, "m", g.m);
        read(j, "replications", g.replications);
        c.cells.push_back(g);
      }
    }
    read(doc, "include_random", c.include_random);
    if (doc.contains("partitions")) {
      for (const auto& j : doc.at("partitions")) {
        PartitionSource p;
        read(j, "type", p.type);
        read(j, "d", p.d);
        read(j, "m", p.m);
        read(j, "m_fine", p.m);
        read(j, "n", p.n);
        read(j, "pieces", p.pieces);
        read(j, "seed", p.seed);
        read(j, "path", p.path);
        c.partitions.push_back(p);
      }
    }
    if (doc.contains("sharpness")) {
      SharpnessStudy s;
      const auto& j = doc.at("sharpness");
      read(j, "n", s.n);
      read(j, "d", s.d);
      read(j, "m_fine", s.m_fine);
      read(j, "assignments", s.assignments);
      read(j, "min_ratio", s.min_ratio);
      c.sharpness = s;
    }
    read(doc, "dim", c.dim);
    read(doc, "m_values", c.m_values);
    if (doc.contains("slope_band")) {
      auto band = doc.at("slope_band").get<std::vector<double>>();
      if (band.size() != 2) throw InvalidArgument("slope_band needs two values");
      c.slope_band = std::make_pair(band[0], band[1]);
    }
    read(doc, "n_values", c.n_values);
    read(doc, "eps_values", c.eps_values);
    read(doc, "t_values", c.t_values);
    read(doc, "kolmogorov_tolerance", c.kolmogorov_tolerance);
    if (doc.contains("sizes")) {
      for (const auto& j : doc.at("sizes")) {
        SizeCell s;
        read(j, "d", s.d);
        read(j, "n", s.n);
        c.sizes.push_back(s);
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad experiment config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

json ExperimentConfig::to_json() const {
  json doc;
  doc["kind"] = experiments::to_string(kind);
  doc["seed"] = seed;
  doc["replications"] = replications;
  doc["method"] = experiments::to_string(method);
  doc["grid_budget"] = grid_budget;
  doc["bb_seconds"] = bb_seconds;
  doc["heuristic_restarts"] = heuristic_restarts;
  doc["allow_heuristic"] = allow_heuristic;
  doc["keep_records"] = keep_records;
  switch (kind) {
    case Kind::Table1: {
      json cs = json::array();
      for (const auto& g : cells) cs.push_back({{"d", g.d}, {"m", g.m}, {"replications", g.replications}});
      doc["cells"] = cs;
      doc["include_random"] = include_random;
      break;
    }
    case Kind::PartitionPrinciple: {
      json ps = json::array();
      for (const auto& p : partitions) {
        ps.push_back({{"type", p.type}, {"d", p.d}, {"m", p.m}, {"n", p.n}, {"pieces", p.pieces},
                      {"seed", p.seed}, {"path", p.path}});
      }
      doc["partitions"] = ps;
      if (sharpness) {
        doc["sharpness"] = {{"n", sharpness->n},
                            {"d", sharpness->d},
                            {"m_fine", sharpness->m_fine},
                            {"assignments", sharpness->assignments},
                            {"min_ratio", sharpness->min_ratio}};
      }
      break;
    }
    case Kind::Scaling:
      doc["dim"] = dim;
      doc["m_values"] = m_values;
      if (slope_band) doc["slope_band"] = {slope_band->first, slope_band->second};
      break;
    case Kind::DkwTails:
      doc["n_values"] = n_values;
      doc["eps_values"] = eps_values;
      break;
    case Kind::MomentBound:
      doc["n_values"] = n_values;
      doc["t_values"] = t_values;
      break;
    case Kind::Kolmogorov:
      doc["n_values"] = n_values;
      doc["kolmogorov_tolerance"] = kolmogorov_tolerance;
      break;
    case Kind::HammersleyCompare: {
      json ss = json::array();
      for (const auto& s : sizes) ss.push_back({{"d", s.d}, {"n", s.n}});
      doc["sizes"] = ss;
      break;
    }
  }
  return doc;
}

// Reference table ----------------------------------------------------------------

const std::vector<Table1Reference>& table1_references() {
  static const std::vector<Table1Reference> refs{
      {2, 5, 0.1518, 0.2180, 0.015, 0.020},  {2, 10, 0.0629, 0.1232, 0.008, 0.012},
      {2, 20, 0.0243, 0.0624, 0.004, 0.007}, {3, 5, 0.0932, 0.1318, 0.012, 0.015},
      {3, 10, 0.0279, 0.0542, 0.0, 0.0},     {5, 3, 0.1046, 0.1200, 0.0, 0.0},
      {5, 5, 0.0259, 0.0331, 0.0, 0.0},
  };
  return refs;
}

std::optional<Table1Reference> table1_reference(std::size_t d, std::size_t m) {
  for (const auto& r : table1_references()) {
    if (r.d == d && r.m == m) return r;
  }
  return std::nullopt;
}

std::uint64_t replication_seed(std::uint64_t master, Kind kind, const std::string& cell,
                               std::size_t index) {
  std::uint64_t s = mix_seed(master, stable_hash(to_string(kind)));
  s = mix_seed(s, stable_hash(cell));
  return mix_seed(s, index);
}

// Execution helpers ---------------------------------------------------------------

namespace {

// Runs fn(i) for i in [0, count) on `threads` workers; results are written by
// index so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard guard(failure_lock);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Measurement {
  double value;
  std::string method;
  bool is_exact;
};

template <class Fn>
std::vector<Record> replicate(const ExperimentConfig& config, const std::string& cell,
                              std::size_t count, Fn&& measure) {
  std::vector<Record> records(count);
  parallel_for(count, config.threads, [&](std::size_t i) {
    const auto seed = replication_seed(config.seed, config.kind, cell, i);
    const auto start = std::chrono::steady_clock::now();
    Measurement m = measure(seed);
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    records[i] = Record{i, seed, m.value, std::move(m.method), m.is_exact, elapsed.count()};
  });
  return records;
}

Check make_check(std::string name, Severity severity, bool passed, std::string detail) {
  return Check{std::move(name), severity, passed, std::move(detail)};
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void finish_cell(CellReport& cell, const ExperimentConfig& config) {
  cell.stats = aggregate(cell.records);
  if (!config.keep_records) cell.records.clear();
}

// Records that mix exact and lower-bound values are all demoted to lower bounds.
bool demote_mixed(std::vector<Record>& records) {
  const bool any_inexact = std::any_of(records.begin(), records.end(), [](const Record& r) { return !r.is_exact; });
  const bool any_exact = std::any_of(records.begin(), records.end(), [](const Record& r) { return r.is_exact; });
  if (!(any_inexact && any_exact)) return false;
  for (auto& r : records) r.is_exact = false;
  return true;
}

std::size_t exact_root(std::size_t n, std::size_t d) {
  const auto guess = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d))));
  for (std::size_t m = guess > 0 ? guess - 1 : 0; m <= guess + 1; ++m) {
    if (m >= 1 && checked_power(m, d, std::size_t{1} << 62) == n) return m;
  }
  return 0;
}

void annotate_rates(CellReport& cell, double n, double d) {
  cell.annotations.emplace_back("thm1_lower", bounds::thm1_lower(n, d));
  if (n >= 2.0) {
    cell.annotations.emplace_back("thm1_upper", bounds::thm1_upper(n, d));
    cell.annotations.emplace_back("conjectural_rate", bounds::heuristic_conjecture_rate(n, d));
  }
}

}  // namespace

DiscrepancyResult measure_star(const PointSet& points, const ExperimentConfig& config) {
  const std::size_t d = points.dim();
  if (d == 1 && config.method != MethodPreference::Heuristic) return star_1d_exact(points);
  const HeuristicOptions heuristic{config.heuristic_restarts, 0,
                                   mix_seed(points.provenance().seed, 0x6865757269737469ULL)};
  const BBBudget bb{BBBudget{}.max_nodes, config.bb_seconds};
  switch (config.method) {
    case MethodPreference::ExactGrid:
      try {
        return star_exact_grid(points, config.grid_budget);
      } catch (const BudgetExceeded& e) {
        throw Infeasible(e.what());
      }
    case MethodPreference::ExactBB: {
      auto r = star_exact_bb(points, bb);
      if (!r.is_exact && !config.allow_heuristic) {
        throw Infeasible("exact_bb did not complete within its budget");
      }
      return r;
    }
    case MethodPreference::Heuristic:
      return star_heuristic_lower(points, heuristic);
    case MethodPreference::Auto: {
      if (CriticalGrid(points).size() <= config.grid_budget) return star_exact_grid(points, config.grid_budget);
      auto r = star_exact_bb(points, bb);
      if (r.is_exact) return r;
      if (!config.allow_heuristic) throw Infeasible("exact_bb did not complete and the heuristic is disallowed");
      auto h = star_heuristic_lower(points, heuristic);
      if (r.value > h.value) {
        h.value = r.value;
        h.witness = r.witness;
      }
      return h;
    }
  }
  throw InvalidArgument("unhandled method preference");
}

// Table 1 ---------------------------------------------------------------------------

ExperimentReport run_table1(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::Table1;
  report.config = config.to_json();
  auto cells = config.cells;
  if (cells.empty()) cells = {{2, 5, 0}, {2, 10, 0}, {2, 20, 0}, {3, 5, 0}};

  for (const auto& cell : cells) {
    const std::size_t n = checked_power(cell.m, cell.d);
    std::size_t reps = cell.replications ? cell.replications : config.replications;
    if (reps == 0) reps = cell.m <= 10 ? 1000 : 200;
    const auto ref = table1_reference(cell.d, cell.m);

    for (const bool jittered : {true, false}) {
      if (!jittered && !config.include_random) continue;
      CellReport c;
      c.series = jittered ? "jittered" : "random";
      c.id = "d" + std::to_string(cell.d) + "_m" + std::to_string(cell.m) + "_" + c.series;
      c.params = {{"d", static_cast<double>(cell.d)},
                  {"m", static_cast<double>(cell.m)},
                  {"n", static_cast<double>(n)},
                  {"replications", static_cast<double>(reps)}};
      c.records = replicate(config, c.id, reps, [&](std::uint64_t seed) {
        const PointSet points = jittered ? gen_jittered(cell.m, cell.d, seed) : gen_uniform(n, cell.d, seed);
        const auto r = measure_star(points, config);
        return Measurement{r.value, to_string(r.method), r.is_exact};
      });
      const bool demoted = demote_mixed(c.records);
      const bool exact = c.records.front().is_exact;
      finish_cell(c, config);
      annotate_rates(c, static_cast<double>(n), static_cast<double>(cell.d));
      if (demoted) {
        c.checks.push_back(make_check("mixed_exactness_demoted", Severity::Info, true,
                                      "some instances exceeded the exact budget; all values reported as lower bounds"));
      }
      if (ref) {
        const double reference = jittered ? ref->jittered : ref->random;
        const double tolerance = jittered ? ref->jittered_tolerance : ref->random_tolerance;
        c.annotations.emplace_back("reference", reference);
        c.stretch = tolerance == 0.0 || !exact;
        if (!c.stretch) {
          c.annotations.emplace_back("tolerance", tolerance);
          const double diff = c.stats.mean - reference;
          c.checks.push_back(make_check(
              c.id + "_matches_reference", Severity::Statistical, std::abs(diff) <= tolerance,
              "mean " + num(c.stats.mean) + " vs reference " + num(reference) + " +/- " + num(tolerance)));
        } else if (!exact) {
          c.checks.push_back(make_check(c.id + "_lower_bound_consistent", Severity::Info,
                                        c.stats.mean <= reference + 0.02,
                                        "lower-bound mean " + num(c.stats.mean) + " <= reference + 0.02 = " +
                                            num(reference + 0.02)));
        } else {
          c.checks.push_back(make_check(c.id + "_stretch_exact", Severity::Info, true,
                                        "exact mean " + num(c.stats.mean) + " vs reference " + num(reference)));
        }
      }
      report.cells.push_back(std::move(c));
    }
    if (config.include_random) {
      const auto& jit = report.cells[report.cells.size() - 2];
      const auto& rnd = report.cells.back();
      report.checks.push_back(make_check(
          "d" + std::to_string(cell.d) + "_m" + std::to_string(cell.m) + "_jittered_below_random", Severity::Info,
          jit.stats.mean < rnd.stats.mean, num(jit.stats.mean) + " < " + num(rnd.stats.mean)));
    }
  }
  return report;
}

// Partition principle ------------------------------------------------------------------

ExperimentReport run_partition_principle(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::PartitionPrinciple;
  report.config = config.to_json();
  const std::size_t reps = config.replications ? config.replications : 10000;

  auto sources = config.partitions;
  if (sources.empty() && !config.sharpness) {
    sources.push_back({"grid", 1, 2, 1, 1, 0, {}});
    sources.push_back({"single", 2, 1, 1, 1, 0, {}});
    sources.push_back({"random_box", 2, 1, 4, 2, 11, {}});
    sources.push_back({"fine_grid", 2, 4, 4, 1, 3, {}});
  }

  for (const auto& source : sources) {
    const Partition partition = source.build();
    const std::size_t n = partition.size();
    const std::size_t d = partition.dim();
    const double exact = expected_l2sq_partition(partition);
    const double random = expected_l2sq_random(n, d);
    const std::string label = source.label();

    CellReport jit;
    jit.id = label + "_partition";
    jit.series = "partition_jittered";
    jit.params = {{"n", static_cast<double>(n)}, {"d", static_cast<double>(d)},
                  {"replications", static_cast<double>(reps)}};
    jit.records = replicate(config, jit.id, reps, [&](std::uint64_t seed) {
      return Measurement{l2_star(gen_partition_jittered(partition, seed)), "l2_closed_form", true};
    });
    finish_cell(jit, config);
    jit.annotations = {{"expected_l2sq_partition", exact}, {"expected_l2sq_random", random}};

    CellReport rnd;
    rnd.id = label + "_random";
    rnd.series = "uniform";
    rnd.params = jit.params;
    rnd.records = replicate(config, rnd.id, reps, [&](std::uint64_t seed) {
      return Measurement{l2_star(gen_uniform(n, d, seed)), "l2_closed_form", true};
    });
    finish_cell(rnd, config);
    rnd.annotations = {{"expected_l2sq_random", random}};

    jit.checks.push_back(make_check(label + "_principle", Severity::Hard, exact <= random + 1e-12,
                                    "E L2^2 partition " + num(exact) + " <= random " + num(random)));
    jit.checks.push_back(make_check(label + "_mc_matches_closed_form", Severity::Statistical,
                                    std::abs(jit.stats.mean - exact) <= 4.0 * jit.stats.se,
                                    "MC " + num(jit.stats.mean) + " +/- " + num(jit.stats.se) + " vs " + num(exact)));
    rnd.checks.push_back(make_check(label + "_random_mc_matches_closed_form", Severity::Statistical,
                                    std::abs(rnd.stats.mean - random) <= 4.0 * rnd.stats.se,
                                    "MC " + num(rnd.stats.mean) + " +/- " + num(rnd.stats.se) + " vs " + num(random)));

    // pointwise identities at seeded probe points
    RngStream probe(replication_seed(config.seed, config.kind, label + "_probe", 0));
    double worst_cover = 0.0, worst_var = -1.0;
    for (int k = 0; k < 64; ++k) {
      std::vector<double> x(d);
      for (auto& v : x) v = probe.uniform();
      const Point px(x);
      double cover = 0.0;
      for (const auto& cell : partition.cells()) cover += cell_anchored_overlap(cell, px);
      worst_cover = std::max(worst_cover, std::abs(cover - volume_anchored(px)));
      const double vol = volume_anchored(px);
      const double excess = pointwise_count_variance(partition, px) -
                            static_cast<double>(n) * vol * (1.0 - vol);
      worst_var = std::max(worst_var, excess);
    }
    jit.checks.push_back(make_check(label + "_coverage_identity", Severity::Hard,
                                    worst_cover <= static_cast<double>(n) * 1e-12,
                                    "max |sum overlap - vol| = " + num(worst_cover)));
    jit.checks.push_back(make_check(label + "_pointwise_variance_dominated", Severity::Hard, worst_var <= 1e-12,
                                    "max var excess over binomial = " + num(worst_var)));
    report.cells.push_back(std::move(jit));
    report.cells.push_back(std::move(rnd));
  }

  if (config.sharpness) {
    const auto& s = *config.sharpness;
    const double random = expected_l2sq_random(s.n, s.d);
    std::vector<double> means;
    for (auto m_fine : s.m_fine) {
      CellReport c;
      c.id = "sharpness_mfine" + std::to_string(m_fine);
      c.series = "fine_grid_assignments";
      c.params = {{"n", static_cast<double>(s.n)}, {"d", static_cast<double>(s.d)},
                  {"m_fine", static_cast<double>(m_fine)},
                  {"replications", static_cast<double>(s.assignments)}};
      c.records = replicate(config, c.id, s.assignments, [&](std::uint64_t seed) {
        return Measurement{expected_l2sq_partition(randomized_fine_grid_partition(m_fine, s.n, s.d, seed)),
                           "closed_form", true};
      });
      finish_cell(c, config);
      c.annotations = {{"expected_l2sq_random", random}, {"ratio_to_random", c.stats.mean / random}};
      c.checks.push_back(make_check(c.id + "_principle", Severity::Hard, c.stats.max <= random + 1e-12,
                                    "max over assignments " + num(c.stats.max) + " <= " + num(random)));
      means.push_back(c.stats.mean);
      report.cells.push_back(std::move(c));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < means.size(); ++i) monotone &= means[i] >= means[i - 1];
    report.checks.push_back(make_check("sharpness_nondecreasing", Severity::Statistical, monotone,
                                       "mean E L2^2 along the m_fine ladder"));
    if (!means.empty()) {
      report.checks.push_back(make_check("sharpness_reaches_random", Severity::Statistical,
                                         means.back() >= s.min_ratio * random,
                                         num(means.back()) + " >= " + num(s.min_ratio) + " * " + num(random)));
    }
  }
  return report;
}

// Scaling -------------------------------------------------------------------------

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line needs >= 2 paired values");
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (k - 2.0) / sxx);
  }
  return fit;
}

ExperimentReport run_scaling(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::Scaling;
  report.config = config.to_json();
  const std::size_t d = config.dim;
  auto ladder = config.m_values;
  if (ladder.empty()) ladder = {4, 8, 16, 32};
  if (ladder.size() < 3) throw InvalidArgument("scaling needs at least 3 ladder points");
  const std::size_t reps = config.replications ? config.replications : 200;

  std::vector<double> log_n, log_mean;
  for (auto m : ladder) {
    const std::size_t n = checked_power(m, d);
    CellReport c;
    c.id = "d" + std::to_string(d) + "_m" + std::to_string(m);
    c.series = "jittered";
    c.params = {{"d", static_cast<double>(d)}, {"m", static_cast<double>(m)}, {"n", static_cast<double>(n)},
                {"replications", static_cast<double>(reps)}};
    c.records = replicate(config, c.id, reps, [&](std::uint64_t seed) {
      const auto r = measure_star(gen_jittered(m, d, seed), config);
      return Measurement{r.value, to_string(r.method), r.is_exact};
    });
    demote_mixed(c.records);
    finish_cell(c, config);
    annotate_rates(c, static_cast<double>(n), static_cast<double>(d));
    if (n >= 2) {
      const double lo = bounds::thm1_lower(static_cast<double>(n), static_cast<double>(d));
      const double hi = bounds::thm1_upper(static_cast<double>(n), static_cast<double>(d));
      c.checks.push_back(make_check(c.id + "_within_envelope", Severity::Info,
                                    lo <= c.stats.mean && c.stats.mean <= hi,
                                    num(lo) + " <= " + num(c.stats.mean) + " <= " + num(hi)));
    }
    log_n.push_back(std::log(static_cast<double>(n)));
    log_mean.push_back(std::log(c.stats.mean));
    report.cells.push_back(std::move(c));
  }

  const auto fit = fit_line(log_n, log_mean);
  const double target = d == 1 ? -1.0 : -(0.5 + 0.5 / static_cast<double>(d));
  CellReport summary;
  summary.id = "fit";
  summary.series = "ols_loglog";
  summary.params = {{"d", static_cast<double>(d)}};
  summary.annotations = {{"slope", fit.slope},
                         {"slope_se", fit.slope_se},
                         {"slope_ci95_lo", fit.slope - 1.96 * fit.slope_se},
                         {"slope_ci95_hi", fit.slope + 1.96 * fit.slope_se},
                         {"intercept", fit.intercept},
                         {"target_slope", target}};
  const auto band = config.slope_band.value_or(std::make_pair(target - 0.05, target + 0.05));
  summary.annotations.emplace_back("band_lo", band.first);
  summary.annotations.emplace_back("band_hi", band.second);
  summary.checks.push_back(make_check("slope_in_band", Severity::Statistical,
                                      band.first <= fit.slope && fit.slope <= band.second,
                                      "slope " + num(fit.slope) + " in [" + num(band.first) + ", " +
                                          num(band.second) + "]"));
  report.cells.push_back(std::move(summary));
  return report;
}

// One-dimensional discrepancy studies ---------------------------------------------------

namespace {

CellReport one_dim_cell(const ExperimentConfig& config, std::size_t n, std::size_t reps) {
  CellReport c;
  c.id = "n" + std::to_string(n);
  c.series = "X_n";
  c.params = {{"n", static_cast<double>(n)}, {"replications", static_cast<double>(reps)}};
  c.records = replicate(config, c.id, reps, [&](std::uint64_t seed) {
    return Measurement{star_1d_exact(gen_uniform(n, 1, seed)).value, "exact_1d", true};
  });
  c.stats = aggregate(c.records);
  return c;
}

}  // namespace

ExperimentReport run_dkw_tails(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::DkwTails;
  report.config = config.to_json();
  auto ns = config.n_values.empty() ? std::vector<std::size_t>{16, 64, 256} : config.n_values;
  auto eps = config.eps_values.empty() ? std::vector<double>{0.05, 0.1, 0.15, 0.2, 0.25, 0.3}
                                       : config.eps_values;
  const std::size_t reps = config.replications ? config.replications : 100000;
  for (auto n : ns) {
    CellReport base = one_dim_cell(config, n, reps);
    for (double e : eps) {
      std::size_t hits = 0;
      for (const auto& r : base.records) hits += r.value > e;
      const double r = static_cast<double>(reps);
      const double p = static_cast<double>(hits) / r;
      const double se = std::sqrt(p * (1.0 - p) / r);
      const double bound = bounds::dkw_tail(static_cast<double>(n), e);
      CellReport c;
      c.id = "n" + std::to_string(n) + "_eps" + num(e);
      c.series = "tail_frequency";
      c.params = {{"n", static_cast<double>(n)}, {"eps", e}, {"replications", r}};
      c.stats = Aggregate{reps, p, std::sqrt(p * (1.0 - p)), se, 0.0, hits ? 1.0 : 0.0};
      c.annotations = {{"empirical_tail", p}, {"binomial_se", se}, {"dkw_bound", bound}};
      c.checks.push_back(make_check(c.id + "_dominated", Severity::Statistical, p <= bound + 3.0 * se,
                                    "P(X_n > eps) ~ " + num(p) + " <= " + num(bound) + " + 3 * " + num(se)));
      report.cells.push_back(std::move(c));
    }
    if (!config.keep_records) base.records.clear();
    report.cells.push_back(std::move(base));
  }
  return report;
}

ExperimentReport run_moment_bound(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::MomentBound;
  report.config = config.to_json();
  auto ns = config.n_values.empty() ? std::vector<std::size_t>{16, 64} : config.n_values;
  auto ts = config.t_values.empty() ? std::vector<double>{1.0, 4.0, 8.0} : config.t_values;
  const std::size_t reps = config.replications ? config.replications : 50000;
  for (auto n : ns) {
    CellReport base = one_dim_cell(config, n, reps);
    for (double t : ts) {
      CellReport c;
      c.id = "n" + std::to_string(n) + "_t" + num(t);
      c.series = "exp_moment";
      c.params = {{"n", static_cast<double>(n)}, {"t", t}, {"replications", static_cast<double>(reps)}};
      std::vector<Record> values;
      values.reserve(base.records.size());
      double sum = 0.0, sum_sq = 0.0;
      for (const auto& r : base.records) {
        const double w = std::exp(t * r.value);
        sum += w;
        sum_sq += w * w;
        values.push_back(Record{r.index, r.seed, w, "exp_moment", true, 0.0});
      }
      const double bound = bounds::lemma31_moment_bound(t, static_cast<double>(n));
      const double ess = sum * sum / sum_sq;
      c.annotations = {{"moment_bound", bound}, {"effective_sample_size", ess}};
      if (ess < 0.01 * static_cast<double>(reps)) {
        c.checks.push_back(make_check(c.id + "_skipped", Severity::Info, true,
                                      "estimator variance too large (effective sample size " + num(ess) + ")"));
        report.cells.push_back(std::move(c));
        continue;
      }
      c.stats = aggregate(values);
      c.annotations.emplace_back("estimate", c.stats.mean);
      c.annotations.emplace_back("estimate_se", c.stats.se);
      c.checks.push_back(make_check(c.id + "_dominated", Severity::Statistical,
                                    c.stats.mean <= bound + 3.0 * c.stats.se,
                                    "E exp(t X_n) ~ " + num(c.stats.mean) + " <= " + num(bound) + " + 3 * " +
                                        num(c.stats.se)));
      report.cells.push_back(std::move(c));
    }
    if (!config.keep_records) base.records.clear();
    report.cells.push_back(std::move(base));
  }
  return report;
}

ExperimentReport run_kolmogorov(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::Kolmogorov;
  report.config = config.to_json();
  auto ns = config.n_values.empty() ? std::vector<std::size_t>{1, 16, 64, 256, 1024, 4096} : config.n_values;
  std::sort(ns.begin(), ns.end());
  const std::size_t reps = config.replications ? config.replications : 20000;
  const double limit = bounds::kolmogorov_limit_constant();
  std::vector<double> scaled;
  for (auto n : ns) {
    CellReport c = one_dim_cell(config, n, reps);
    const double root = std::sqrt(static_cast<double>(n));
    const double estimate = root * c.stats.mean;
    const double se = root * c.stats.se;
    c.annotations = {{"sqrt_n_mean", estimate}, {"sqrt_n_se", se}, {"limit_constant", limit}};
    if (n == 1) {
      c.checks.push_back(make_check("n1_anchor", Severity::Statistical, std::abs(estimate - 0.75) <= 4.0 * se,
                                    "E max(U, 1-U) ~ " + num(estimate) + " vs 0.75 +/- 4 * " + num(se)));
    }
    scaled.push_back(estimate);
    if (!config.keep_records) c.records.clear();
    report.cells.push_back(std::move(c));
  }
  bool increasing = true;
  for (std::size_t i = 1; i < scaled.size(); ++i) increasing &= scaled[i] >= scaled[i - 1];
  report.checks.push_back(make_check("approaches_limit_monotonically", Severity::Info, increasing,
                                     "sqrt(n) E X_n along the ladder"));
  if (!scaled.empty()) {
    report.checks.push_back(make_check("final_within_tolerance", Severity::Statistical,
                                       std::abs(scaled.back() - limit) <= config.kolmogorov_tolerance,
                                       num(scaled.back()) + " vs " + num(limit) + " +/- " +
                                           num(config.kolmogorov_tolerance)));
  }
  return report;
}

// Hammersley comparison -------------------------------------------------------------------

ExperimentReport run_hammersley_compare(const ExperimentConfig& config) {
  ExperimentReport report;
  report.kind = Kind::HammersleyCompare;
  report.config = config.to_json();
  auto sizes = config.sizes.empty() ? std::vector<SizeCell>{{2, 64}, {2, 256}, {2, 1024}} : config.sizes;
  const std::size_t reps = config.replications ? config.replications : 100;
  for (const auto& s : sizes) {
    const std::string base = "d" + std::to_string(s.d) + "_n" + std::to_string(s.n);
    const double n = static_cast<double>(s.n);
    const double d = static_cast<double>(s.d);
    std::vector<std::pair<std::string, double>> notes;
    if (s.d >= 2 && s.n >= 2) notes.emplace_back("hammersley_leading_term", bounds::hammersley_leading_bound(n, d));
    if (s.n >= 2) notes.emplace_back("thm1_upper", bounds::thm1_upper(n, d));

    CellReport ham;
    ham.id = base + "_hammersley";
    ham.series = "hammersley";
    ham.params = {{"d", d}, {"n", n}};
    {
      const auto r = measure_star(gen_hammersley(s.n, s.d), config);
      ham.records.push_back(Record{0, 0, r.value, to_string(r.method), r.is_exact, 0.0});
    }
    finish_cell(ham, config);
    ham.annotations = notes;
    const double ham_value = ham.stats.mean;
    report.cells.push_back(std::move(ham));

    const std::size_t m = exact_root(s.n, s.d);
    if (m == 0) continue;
    CellReport grid;
    grid.id = base + "_grid";
    grid.series = "grid";
    grid.params = {{"d", d}, {"n", n}, {"m", static_cast<double>(m)}};
    {
      const auto r = measure_star(gen_grid(m, s.d), config);
      grid.records.push_back(Record{0, 0, r.value, to_string(r.method), r.is_exact, 0.0});
    }
    finish_cell(grid, config);
    grid.annotations = notes;
    grid.checks.push_back(make_check(base + "_hammersley_below_grid", Severity::Info, ham_value < grid.stats.mean,
                                     num(ham_value) + " < " + num(grid.stats.mean)));
    report.cells.push_back(std::move(grid));

    CellReport jit;
    jit.id = base + "_jittered";
    jit.series = "jittered";
    jit.params = {{"d", d}, {"n", n}, {"m", static_cast<double>(m)}, {"replications", static_cast<double>(reps)}};
    jit.records = replicate(config, jit.id, reps, [&](std::uint64_t seed) {
      const auto r = measure_star(gen_jittered(m, s.d, seed), config);
      return Measurement{r.value, to_string(r.method), r.is_exact};
    });
    demote_mixed(jit.records);
    finish_cell(jit, config);
    jit.annotations = notes;
    report.cells.push_back(std::move(jit));
  }
  return report;
}

ExperimentReport run(const ExperimentConfig& config) {
  switch (config.kind) {
    case Kind::Table1: return run_table1(config);
    case Kind::PartitionPrinciple: return run_partition_principle(config);
    case Kind::Scaling: return run_scaling(config);
    case Kind::DkwTails: return run_dkw_tails(config);
    case Kind::MomentBound: return run_moment_bound(config);
    case Kind::Kolmogorov: return run_kolmogorov(config);
    case Kind::HammersleyCompare: return run_hammersley_compare(config);
  }
  throw InvalidArgument("unhandled experiment kind");
}

}  // namespace jitter::experiments
