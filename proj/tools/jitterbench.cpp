#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "jitter/bounds.hpp"
#include "jitter/discrepancy.hpp"
#include "jitter/experiments.hpp"
#include "jitter/generators.hpp"
#include "jitter/partition.hpp"
#include "jitter/pointset_io.hpp"

namespace ex = jitter::experiments;

namespace {

std::string six(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

nlohmann::json witness_json(const jitter::AnchoredBox& box) {
  auto c = box.upper.coords();
  return std::vector<double>(c.begin(), c.end());
}

int cmd_gen(const std::string& kind, std::size_t dim, std::optional<std::size_t> m,
            std::optional<std::size_t> n, const std::string& partition_file, std::uint64_t seed,
            const std::string& out) {
  auto need = [](const auto& opt, const char* what) {
    if (!opt) throw jitter::InvalidArgument(std::string("--") + what + " is required for this kind");
    return *opt;
  };
  std::optional<jitter::PointSet> points;
  if (kind == "uniform") {
    points = jitter::gen_uniform(need(n, "n"), dim, seed);
  } else if (kind == "grid") {
    points = jitter::gen_grid(need(m, "m"), dim);
  } else if (kind == "jittered") {
    points = jitter::gen_jittered(need(m, "m"), dim, seed);
  } else if (kind == "partition") {
    if (partition_file.empty()) throw jitter::InvalidArgument("--partition is required for kind partition");
    points = jitter::gen_partition_jittered(jitter::load_partition(partition_file), seed);
  } else if (kind == "hammersley") {
    points = jitter::gen_hammersley(need(n, "n"), dim);
  } else {
    throw jitter::InvalidArgument("unknown kind '" + kind + "'");
  }
  if (out.empty() || out == "-") {
    jitter::write_pointset(std::cout, *points);
  } else {
    jitter::save_pointset(out, *points);
  }
  return ex::kExitOk;
}

int cmd_disc(const std::string& in, const std::string& method, std::size_t restarts, std::uint64_t seed,
             bool as_json) {
  const auto points = jitter::load_pointset(in);
  const auto start = std::chrono::steady_clock::now();
  jitter::DiscrepancyResult r;
  if (method == "heuristic") {
    r = jitter::star_heuristic_lower(points, {restarts, 0, seed});
  } else {
    ex::ExperimentConfig cfg;
    cfg.method = ex::method_from_string(method);
    cfg.heuristic_restarts = restarts;
    r = ex::measure_star(points, cfg);
  }
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  if (as_json) {
    nlohmann::json j{{"value", r.value},
                     {"witness", witness_json(r.witness)},
                     {"method", jitter::to_string(r.method)},
                     {"is_exact", r.is_exact},
                     {"n", points.size()},
                     {"d", points.dim()},
                     {"wall_time_ms", elapsed.count()}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << six(r.value) << ' ' << jitter::to_string(r.method) << (r.is_exact ? "" : " (lower bound)")
              << '\n';
  }
  return ex::kExitOk;
}

int cmd_l2(const std::string& in, bool as_json) {
  const auto points = jitter::load_pointset(in);
  const double v = jitter::l2_star(points);
  if (as_json) {
    std::cout << nlohmann::json{{"l2sq", v}, {"l2", std::sqrt(v)}, {"n", points.size()}, {"d", points.dim()}}.dump(2)
              << '\n';
  } else {
    std::cout << six(v) << '\n';
  }
  return ex::kExitOk;
}

int cmd_expect(const std::string& partition_file, bool random, std::optional<std::size_t> n,
               std::optional<std::size_t> dim) {
  if (random) {
    if (!n || !dim) throw jitter::InvalidArgument("--random needs --n and --dim");
    std::cout << six(jitter::expected_l2sq_random(*n, *dim)) << '\n';
    return ex::kExitOk;
  }
  if (partition_file.empty()) throw jitter::InvalidArgument("give --partition FILE or --random");
  const auto p = jitter::load_partition(partition_file);
  std::cout << "partition," << six(jitter::expected_l2sq_partition(p)) << '\n'
            << "random," << six(jitter::expected_l2sq_random(p.size(), p.dim())) << '\n';
  return ex::kExitOk;
}

int cmd_bounds(double n, double dim) {
  std::cout << "name,value\n";
  for (const auto& row : jitter::bounds::evaluate_all(n, dim)) {
    std::cout << row.name << (row.conjectural ? " (conjectural)" : "") << ',' << six(row.value) << '\n';
  }
  return ex::kExitOk;
}

int cmd_experiment(const std::string& kind, const std::string& config_file, const std::string& out_dir) {
  ex::ExperimentConfig cfg;
  if (!config_file.empty()) cfg = ex::ExperimentConfig::load(config_file);
  cfg.kind = ex::kind_from_string(kind);
  const auto report = ex::run(cfg);
  report.write(out_dir);
  for (const auto* check : report.all_checks()) {
    std::cout << (check->passed ? "ok   " : "FAIL ") << '[' << ex::to_string(check->severity) << "] "
              << check->name << ": " << check->detail << '\n';
  }
  std::cout << "wrote " << out_dir << '/' << ex::to_string(report.kind) << ".{csv,json}\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jittered sampling and discrepancy workbench"};
  app.require_subcommand(1);

  std::string kind, partition_file, out, in, method = "auto", config_file, out_dir = ".";
  std::size_t dim = 2, restarts = 0;
  std::optional<std::size_t> m, n, opt_dim;
  std::uint64_t seed = 0;
  bool as_json = false, random = false;
  double bn = 0, bd = 0;

  auto* gen = app.add_subcommand("gen", "Generate a point set");
  gen->add_option("--kind", kind, "uniform | grid | jittered | partition | hammersley")->required();
  gen->add_option("--dim", dim);
  gen->add_option("--m", m, "grid side");
  gen->add_option("--n", n, "number of points");
  gen->add_option("--partition", partition_file, "partition JSON file");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out, "output file (default stdout)");

  auto* disc = app.add_subcommand("disc", "Star discrepancy of a point set");
  disc->add_option("--in", in)->required();
  disc->add_option("--method", method)->check(CLI::IsMember({"exact-grid", "exact-bb", "heuristic", "auto",
                                                             "exact_grid", "exact_bb"}));
  disc->add_option("--restarts", restarts);
  disc->add_option("--seed", seed);
  disc->add_flag("--json", as_json);

  auto* l2 = app.add_subcommand("l2", "Squared L2 star discrepancy of a point set");
  l2->add_option("--in", in)->required();
  l2->add_flag("--json", as_json);

  auto* expect = app.add_subcommand("expect-l2", "Expected squared L2 discrepancy");
  expect->add_option("--partition", partition_file);
  expect->add_flag("--random", random);
  expect->add_option("--n", n);
  expect->add_option("--dim", opt_dim);

  auto* bnds = app.add_subcommand("bounds", "Evaluate every bound at (N, d)");
  bnds->add_option("--n", bn)->required();
  bnds->add_option("--dim", bd)->required();

  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  exp->add_option("kind", kind, "table1 | partition | scaling | dkw | moment | kolmogorov | hammersley")->required();
  exp->add_option("--config", config_file);
  exp->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(kind, dim, m, n, partition_file, seed, out);
    if (*disc) return cmd_disc(in, method, restarts, seed, as_json);
    if (*l2) return cmd_l2(in, as_json);
    if (*expect) return cmd_expect(partition_file, random, n, opt_dim);
    if (*bnds) return cmd_bounds(bn, bd);
    if (*exp) return cmd_experiment(kind, config_file, out_dir);
  } catch (const ex::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return ex::kExitInfeasible;
  } catch (const jitter::BudgetExceeded& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return ex::kExitInfeasible;
  } catch (const jitter::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kExitHardFailure;
  }
  return ex::kExitUsage;
}
