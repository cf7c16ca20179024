#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "jitter/experiments.hpp"

namespace jitter::experiments {

Aggregate aggregate(const std::vector<Record>& records) {
  Aggregate a;
  if (records.empty()) return a;
  const bool exact = records.front().is_exact;
  for (const auto& r : records) {
    if (r.is_exact != exact) {
      throw Error("cannot aggregate a cell mixing exact and non-exact discrepancy values");
    }
  }
  a.count = records.size();
  a.min = records.front().value;
  a.max = records.front().value;
  double sum = 0.0;
  for (const auto& r : records) {
    sum += r.value;
    a.min = std::min(a.min, r.value);
    a.max = std::max(a.max, r.value);
  }
  a.mean = sum / static_cast<double>(a.count);
  if (a.count > 1) {
    double ss = 0.0;
    for (const auto& r : records) ss += (r.value - a.mean) * (r.value - a.mean);
    a.sd = std::sqrt(ss / static_cast<double>(a.count - 1));
    a.se = a.sd / std::sqrt(static_cast<double>(a.count));
  }
  return a;
}

const char* to_string(Severity severity) {
  switch (severity) {
    case Severity::Hard: return "hard";
    case Severity::Statistical: return "statistical";
    case Severity::Info: return "info";
  }
  return "?";
}

std::optional<double> CellReport::annotation(const std::string& name) const {
  for (const auto& [k, v] : annotations) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::vector<const Check*> ExperimentReport::all_checks() const {
  std::vector<const Check*> out;
  for (const auto& c : cells) {
    for (const auto& k : c.checks) out.push_back(&k);
  }
  for (const auto& k : checks) out.push_back(&k);
  return out;
}

int ExperimentReport::exit_code() const {
  bool hard = false, stat = false;
  for (const auto* c : all_checks()) {
    if (c->passed) continue;
    hard |= c->severity == Severity::Hard;
    stat |= c->severity == Severity::Statistical;
  }
  if (hard) return kExitHardFailure;
  if (stat) return kExitStatisticalFlag;
  return kExitOk;
}

const CellReport* ExperimentReport::find(const std::string& id) const {
  for (const auto& c : cells) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

nlohmann::json check_json(const Check& c) {
  return {{"name", c.name}, {"severity", to_string(c.severity)}, {"passed", c.passed},
          {"detail", c.detail}};
}

nlohmann::json pairs_json(const std::vector<std::pair<std::string, double>>& pairs) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : pairs) j[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
  return j;
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void append_unique(std::vector<std::string>& keys, const std::string& k) {
  if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json doc;
  doc["kind"] = to_string(kind);
  doc["config"] = config;
  doc["exit_code"] = exit_code();
  nlohmann::json jcells = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["series"] = c.series;
    jc["stretch"] = c.stretch;
    jc["params"] = pairs_json(c.params);
    jc["aggregate"] = {{"count", c.stats.count}, {"mean", c.stats.mean}, {"sd", c.stats.sd},
                       {"se", c.stats.se},       {"min", c.stats.min},   {"max", c.stats.max}};
    jc["annotations"] = pairs_json(c.annotations);
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& r : c.records) {
      jr.push_back({{"index", r.index}, {"seed", r.seed}, {"value", r.value}, {"method", r.method},
                    {"is_exact", r.is_exact}, {"wall_time_ms", r.wall_ms}});
    }
    jc["records"] = std::move(jr);
    nlohmann::json jk = nlohmann::json::array();
    for (const auto& k : c.checks) jk.push_back(check_json(k));
    jc["checks"] = std::move(jk);
    jcells.push_back(std::move(jc));
  }
  doc["cells"] = std::move(jcells);
  nlohmann::json jk = nlohmann::json::array();
  for (const auto& k : checks) jk.push_back(check_json(k));
  doc["checks"] = std::move(jk);
  return doc;
}

std::string ExperimentReport::to_csv() const {
  std::vector<std::string> param_keys, annotation_keys;
  for (const auto& c : cells) {
    for (const auto& [k, v] : c.params) append_unique(param_keys, k);
    for (const auto& [k, v] : c.annotations) append_unique(annotation_keys, k);
  }
  std::ostringstream out;
  out << "id,series";
  for (const auto& k : param_keys) out << ',' << k;
  out << ",count,method,is_exact,mean,sd,se,min,max,stretch";
  for (const auto& k : annotation_keys) out << ',' << k;
  out << '\n';
  for (const auto& c : cells) {
    out << c.id << ',' << c.series;
    auto lookup = [](const auto& pairs, const std::string& key) {
      for (const auto& [k, v] : pairs) {
        if (k == key) return csv_number(v);
      }
      return std::string();
    };
    for (const auto& k : param_keys) out << ',' << lookup(c.params, k);
    const std::string method = c.records.empty() ? "" : c.records.front().method;
    const bool exact = c.records.empty() || c.records.front().is_exact;
    out << ',' << c.stats.count << ',' << method << ',' << (exact ? "true" : "false") << ','
        << csv_number(c.stats.mean) << ',' << csv_number(c.stats.sd) << ','
        << csv_number(c.stats.se) << ',' << csv_number(c.stats.min) << ','
        << csv_number(c.stats.max) << ',' << (c.stretch ? "true" : "false");
    for (const auto& k : annotation_keys) out << ',' << lookup(c.annotations, k);
    out << '\n';
  }
  return out.str();
}

void ExperimentReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const std::string stem = to_string(kind);
  {
    std::ofstream csv(dir / (stem + ".csv"));
    if (!csv) throw Error("cannot write " + (dir / (stem + ".csv")).string());
    csv << to_csv();
  }
  std::ofstream js(dir / (stem + ".json"));
  if (!js) throw Error("cannot write " + (dir / (stem + ".json")).string());
  js << to_json().dump(1) << '\n';
}

}  // namespace jitter::experiments
