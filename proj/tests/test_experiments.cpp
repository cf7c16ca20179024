#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "jitter/experiments.hpp"
#include "jitter/generators.hpp"

using namespace jitter;
using namespace jitter::experiments;

TEST_CASE("config parsing") {
  const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(R"({
      "kind": "partition_principle", "seed": 5, "replications": 30, "method": "exact_bb",
      "partitions": [{"type": "grid", "d": 1, "m": 2}, {"type": "fine_grid", "d": 2, "m_fine": 4, "n": 4, "seed": 1}],
      "sharpness": {"m_fine": [2, 4]}, "slope_band": [-1, -0.5]})"));
  CHECK(cfg.kind == Kind::PartitionPrinciple);
  CHECK(cfg.seed == 5);
  CHECK(cfg.replications == 30);
  CHECK(cfg.method == MethodPreference::ExactBB);
  REQUIRE(cfg.partitions.size() == 2);
  CHECK(cfg.partitions[1].m == 4);
  CHECK(cfg.partitions[1].label() == "fine_m4_n4_d2_s1");
  REQUIRE(cfg.sharpness);
  CHECK(cfg.sharpness->m_fine == std::vector<std::size_t>{2, 4});
  CHECK(cfg.sharpness->assignments == 20);
  CHECK(cfg.slope_band->first == -1.0);

  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"kind": "nope"})")), InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"seed": "x"})")), InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), InvalidArgument);
  CHECK(kind_from_string("dkw") == Kind::DkwTails);
  CHECK(method_from_string("exact-grid") == MethodPreference::ExactGrid);
}

TEST_CASE("replication seeds are stable and distinct") {
  CHECK(replication_seed(1, Kind::Table1, "a", 0) == replication_seed(1, Kind::Table1, "a", 0));
  CHECK(replication_seed(1, Kind::Table1, "a", 0) != replication_seed(1, Kind::Table1, "a", 1));
  CHECK(replication_seed(1, Kind::Table1, "a", 0) != replication_seed(1, Kind::Table1, "b", 0));
  CHECK(replication_seed(1, Kind::Table1, "a", 0) != replication_seed(1, Kind::Scaling, "a", 0));
  CHECK(replication_seed(1, Kind::Table1, "a", 0) != replication_seed(2, Kind::Table1, "a", 0));
}

TEST_CASE("aggregation") {
  std::vector<Record> r{{0, 0, 1.0, "x", true, 0}, {1, 0, 2.0, "x", true, 0}, {2, 0, 6.0, "x", true, 0}};
  const auto a = aggregate(r);
  CHECK(a.count == 3);
  CHECK(a.mean == 3.0);
  CHECK(a.sd == doctest::Approx(std::sqrt(7.0)));
  CHECK(a.se == doctest::Approx(std::sqrt(7.0 / 3.0)));
  CHECK(a.min == 1.0);
  CHECK(a.max == 6.0);
  r[1].is_exact = false;
  CHECK_THROWS(aggregate(r));
}

TEST_CASE("method selection") {
  ExperimentConfig cfg;
  const auto small = gen_jittered(4, 2, 1);
  CHECK(measure_star(small, cfg).method == StarMethod::ExactGrid);
  CHECK(measure_star(gen_uniform(9, 1, 1), cfg).method == StarMethod::Exact1d);

  cfg.grid_budget = 10;
  const auto viaBB = measure_star(small, cfg);
  CHECK(viaBB.method == StarMethod::ExactBB);
  CHECK(viaBB.is_exact);

  cfg.method = MethodPreference::ExactGrid;
  CHECK_THROWS_AS(measure_star(small, cfg), Infeasible);

  // branch and bound cut short: auto falls back to a flagged lower bound
  cfg.method = MethodPreference::Auto;
  cfg.bb_seconds = 0.0;
  const auto big = gen_uniform(3000, 4, 2);
  const auto r = measure_star(big, cfg);
  CHECK(r.method == StarMethod::Heuristic);
  CHECK_FALSE(r.is_exact);
  cfg.allow_heuristic = false;
  CHECK_THROWS_AS(measure_star(big, cfg), Infeasible);
}

TEST_CASE("line fit") {
  const auto fit = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_se == doctest::Approx(0.0));
  const auto noisy = fit_line({0, 1, 2}, {0, 2, 1});
  CHECK(noisy.slope == doctest::Approx(0.5));
  CHECK(noisy.slope_se > 0.0);
  CHECK_THROWS(fit_line({1}, {1}));
}

namespace {

ExperimentConfig small_table1() {
  ExperimentConfig cfg;
  cfg.kind = Kind::Table1;
  cfg.seed = 11;
  cfg.cells = {{2, 3, 25}, {3, 10, 2}};
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("table1 report structure") {
  const auto report = run_table1(small_table1());
  REQUIRE(report.cells.size() == 4);
  const auto* jit = report.find("d2_m3_jittered");
  REQUIRE(jit != nullptr);
  CHECK(jit->records.size() == 25);
  CHECK(jit->stats.min <= jit->stats.mean);
  CHECK(jit->stats.mean <= jit->stats.max);
  CHECK(jit->annotation("thm1_upper").has_value());
  CHECK(jit->annotation("conjectural_rate").has_value());
  // aggregates recompute from the records
  double sum = 0.0;
  for (const auto& r : jit->records) {
    sum += r.value;
    CHECK(r.method == "exact_grid");
    CHECK(r.is_exact);
    CHECK(r.seed == replication_seed(11, Kind::Table1, "d2_m3_jittered", r.index));
  }
  CHECK(std::abs(sum / 25.0 - jit->stats.mean) <= 1e-12);

  const auto* stretch = report.find("d3_m10_jittered");
  REQUIRE(stretch != nullptr);
  CHECK(stretch->stretch);
  CHECK(stretch->annotation("reference") == 0.0279);
  for (const auto* c : report.all_checks()) CHECK(c->severity != Severity::Hard);
}

TEST_CASE("reports are identical regardless of thread count") {
  auto cfg = small_table1();
  cfg.cells = {{2, 4, 40}};
  const auto serial = run_table1(cfg);
  cfg.threads = 4;
  const auto parallel = run_table1(cfg);
  auto strip = [](nlohmann::json j) {
    for (auto& c : j["cells"])
      for (auto& r : c["records"]) r.erase("wall_time_ms");
    j["config"].erase("threads");
    return j.dump();
  };
  CHECK(strip(serial.to_json()) == strip(parallel.to_json()));
}

TEST_CASE("report output files") {
  ExperimentConfig cfg;
  cfg.kind = Kind::PartitionPrinciple;
  cfg.replications = 200;
  cfg.partitions = {{"grid", 1, 2, 1, 1, 0, {}}, {"single", 2, 1, 1, 1, 0, {}}};
  const auto report = run_partition_principle(cfg);
  CHECK(report.exit_code() == kExitOk);
  const auto* half = report.find("grid_m2_d1_partition");
  REQUIRE(half != nullptr);
  CHECK(*half->annotation("expected_l2sq_partition") == doctest::Approx(1.0 / 24.0));
  CHECK(*half->annotation("expected_l2sq_random") == doctest::Approx(1.0 / 12.0));

  const auto dir = std::filesystem::temp_directory_path() / "jitter_report_test";
  std::filesystem::remove_all(dir);
  report.write(dir);
  std::ifstream csv(dir / "partition.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("id,series", 0) == 0);
  CHECK(header.find("mean") != std::string::npos);
  std::ifstream js(dir / "partition.json");
  const auto doc = nlohmann::json::parse(js);
  CHECK(doc["kind"] == "partition");
  CHECK(doc["cells"].size() == report.cells.size());
  CHECK(doc["config"]["replications"] == 200);
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes follow the worst failed check") {
  ExperimentReport r;
  r.cells.push_back(CellReport{});
  r.cells[0].checks.push_back({"info", Severity::Info, false, ""});
  CHECK(r.exit_code() == kExitOk);
  r.checks.push_back({"stat", Severity::Statistical, false, ""});
  CHECK(r.exit_code() == kExitStatisticalFlag);
  r.cells[0].checks.push_back({"hard", Severity::Hard, false, ""});
  CHECK(r.exit_code() == kExitHardFailure);
}

TEST_CASE("small runs of every experiment kind") {
  ExperimentConfig cfg;
  cfg.replications = 300;

  cfg.kind = Kind::Scaling;
  cfg.dim = 1;
  cfg.m_values = {8, 16, 32};
  const auto s = run(cfg);
  const auto* fit = s.find("fit");
  REQUIRE(fit != nullptr);
  CHECK(*fit->annotation("slope") < -0.8);
  cfg.m_values = {8, 16};
  CHECK_THROWS(run(cfg));

  cfg.kind = Kind::DkwTails;
  cfg.n_values = {16};
  cfg.eps_values = {0.0, 0.2};
  const auto dkw = run(cfg);
  CHECK(dkw.find("n16_eps0")->stats.mean == 1.0);
  CHECK(dkw.exit_code() == kExitOk);

  cfg.kind = Kind::MomentBound;
  cfg.t_values = {1e-6, 2, 400};
  const auto mom = run(cfg);
  CHECK(mom.find("n16_t1e-06")->stats.mean == doctest::Approx(1.0).epsilon(1e-5));
  const auto* skipped = mom.find("n16_t400");
  REQUIRE(skipped != nullptr);
  CHECK(skipped->checks.front().name == "n16_t400_skipped");

  cfg.kind = Kind::Kolmogorov;
  cfg.n_values = {1, 64};
  const auto kol = run(cfg);
  CHECK(kol.find("n1") != nullptr);

  cfg.kind = Kind::HammersleyCompare;
  cfg.replications = 5;
  cfg.sizes = {{2, 64}, {2, 100}, {3, 30}};
  const auto ham = run(cfg);
  CHECK(ham.find("d2_n64_grid") != nullptr);
  CHECK(ham.find("d2_n100_jittered") != nullptr);
  CHECK(ham.find("d3_n30_grid") == nullptr);
  CHECK(ham.find("d2_n64_grid")->stats.mean > ham.find("d2_n64_hammersley")->stats.mean);
}
