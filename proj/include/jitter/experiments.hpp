#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "jitter/discrepancy.hpp"
#include "jitter/partition.hpp"

namespace jitter::experiments {

enum class Kind { Table1, PartitionPrinciple, Scaling, DkwTails, MomentBound, Kolmogorov, HammersleyCompare };

const char* to_string(Kind kind);
Kind kind_from_string(const std::string& name);

enum class MethodPreference { ExactGrid, ExactBB, Heuristic, Auto };

const char* to_string(MethodPreference method);
MethodPreference method_from_string(const std::string& name);

// Exit codes shared by the CLI and the report.
inline constexpr int kExitOk = 0;
inline constexpr int kExitHardFailure = 2;
inline constexpr int kExitStatisticalFlag = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitUsage = 64;

class Infeasible : public Error {
 public:
  using Error::Error;
};

struct GridCell {
  std::size_t d = 2;
  std::size_t m = 5;
  std::size_t replications = 0;  ///< 0 selects the default for m
};

struct SizeCell {
  std::size_t d = 2;
  std::size_t n = 64;
};

// Where a partition for the partition-principle study comes from.
struct PartitionSource {
  std::string type = "grid";  ///< grid | single | random_box | fine_grid | file
  std::size_t d = 1;
  std::size_t m = 2;          ///< grid side, or m_fine for fine_grid
  std::size_t n = 1;          ///< cell count for random_box / fine_grid
  std::size_t pieces = 1;     ///< boxes per cell for random_box
  std::uint64_t seed = 0;
  std::string path;

  std::string label() const;
  Partition build() const;
};

struct SharpnessStudy {
  std::size_t n = 4;
  std::size_t d = 2;
  std::vector<std::size_t> m_fine{2, 4, 8, 16};
  std::size_t assignments = 20;
  double min_ratio = 0.95;  ///< required fraction of the i.i.d. value at the finest grid
};

struct ExperimentConfig {
  Kind kind = Kind::Table1;
  std::uint64_t seed = 20160101;
  std::size_t replications = 0;  ///< 0 selects a per-kind default
  MethodPreference method = MethodPreference::Auto;
  double grid_budget = kDefaultEnumerationBudget;
  double bb_seconds = 60.0;
  std::size_t heuristic_restarts = 0;
  bool allow_heuristic = true;
  std::size_t threads = 0;  ///< 0 selects hardware concurrency
  bool keep_records = true;

  // table1
  std::vector<GridCell> cells;
  bool include_random = true;
  // partition_principle
  std::vector<PartitionSource> partitions;
  std::optional<SharpnessStudy> sharpness;
  // scaling
  std::size_t dim = 2;
  std::vector<std::size_t> m_values;
  std::optional<std::pair<double, double>> slope_band;
  // dkw / moment / kolmogorov
  std::vector<std::size_t> n_values;
  std::vector<double> eps_values;
  std::vector<double> t_values;
  double kolmogorov_tolerance = 0.02;
  // hammersley
  std::vector<SizeCell> sizes;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// Reports ---------------------------------------------------------------------

struct Record {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  std::string method;
  bool is_exact = true;
  double wall_ms = 0.0;
};

struct Aggregate {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation
  double se = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Mean, sample SD, SE, min and max, summed in record order. Throws when the
/// records mix exact and non-exact values.
Aggregate aggregate(const std::vector<Record>& records);

enum class Severity { Hard, Statistical, Info };
const char* to_string(Severity severity);

struct Check {
  std::string name;
  Severity severity = Severity::Info;
  bool passed = true;
  std::string detail;
};

struct CellReport {
  std::string id;
  std::string series;
  std::vector<std::pair<std::string, double>> params;
  std::vector<Record> records;
  Aggregate stats;
  std::vector<std::pair<std::string, double>> annotations;
  std::vector<Check> checks;
  bool stretch = false;

  std::optional<double> annotation(const std::string& name) const;
};

struct ExperimentReport {
  Kind kind = Kind::Table1;
  nlohmann::json config;
  std::vector<CellReport> cells;
  std::vector<Check> checks;  ///< cross-cell checks

  /// 2 on any failed hard check, 3 when only statistical checks failed, else 0.
  int exit_code() const;
  const CellReport* find(const std::string& id) const;
  std::vector<const Check*> all_checks() const;

  nlohmann::json to_json() const;
  /// One row per cell: id, series, params, aggregates, annotations.
  std::string to_csv() const;
  /// Writes <kind>.csv and <kind>.json into `dir`.
  void write(const std::filesystem::path& dir) const;
};

// Reference means from the published jittered/random comparison, with the
// statistical tolerance our R-replication means must meet.
struct Table1Reference {
  std::size_t d;
  std::size_t m;
  double jittered;
  double random;
  double jittered_tolerance;  ///< 0 marks a stretch cell
  double random_tolerance;
};
const std::vector<Table1Reference>& table1_references();
std::optional<Table1Reference> table1_reference(std::size_t d, std::size_t m);

/// Per-replication seed: a stable hash of (master seed, kind, cell id, index).
std::uint64_t replication_seed(std::uint64_t master, Kind kind, const std::string& cell,
                               std::size_t index);

/// Star discrepancy of one instance under the configured method preference.
DiscrepancyResult measure_star(const PointSet& points, const ExperimentConfig& config);

ExperimentReport run_table1(const ExperimentConfig& config);
ExperimentReport run_partition_principle(const ExperimentConfig& config);
ExperimentReport run_scaling(const ExperimentConfig& config);
ExperimentReport run_dkw_tails(const ExperimentConfig& config);
ExperimentReport run_moment_bound(const ExperimentConfig& config);
ExperimentReport run_kolmogorov(const ExperimentConfig& config);
ExperimentReport run_hammersley_compare(const ExperimentConfig& config);

ExperimentReport run(const ExperimentConfig& config);

/// Ordinary least squares fit y = a + b x; returns slope, intercept and the
/// slope's standard error.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace jitter::experiments
