#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bulktri/stream.hpp"

namespace bulktri {

namespace {

using nlohmann::json;

json config_json(const RunConfig& c) {
  json j = {
      {"input", c.input_path},
      {"estimators", c.estimators},
      {"batch_size", c.batch_size},
      {"seed", c.seed},
      {"trials", c.trials},
      {"workers", c.workers},
      {"delta", c.delta},
      {"exact_check", c.exact_check},
  };
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
  j["tau_lower_bound"] = c.tau_lower_bound ? json(*c.tau_lower_bound) : json(nullptr);
  j["groups"] = c.groups ? json(*c.groups) : json(nullptr);
  return j;
}

const char* sweep_name(SweepKind k) {
  return k == SweepKind::batch_size ? "batch_size" : "workers";
}

}  // namespace

std::string format_json(const EstimateReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json jt = {
        {"seed", t.seed},
        {"ok", t.ok},
        {"estimate", t.estimate},
        {"m_seen", t.m_seen},
        {"processing_seconds", t.processing_seconds},
        {"io_seconds", t.io_seconds},
        {"wall_seconds", t.wall_seconds},
    };
    if (!t.ok) jt["error"] = t.error;
    trials.push_back(std::move(jt));
  }
  json j = {
      {"schema", "bulktri.count.v1"},
      {"config", config_json(r.config)},
      {"estimators_used", r.estimators_used},
      {"groups_used", r.groups_used},
      {"workers_used", r.workers_used},
      {"final_estimate", r.final_estimate},
      {"trials", std::move(trials)},
      {"m_seen", r.m_seen},
      {"processing_seconds", r.processing_seconds},
      {"io_seconds", r.io_seconds},
      {"throughput_edges_per_sec", r.throughput_edges_per_sec},
      {"ok", r.all_ok()},
  };
  j["exact_triangles"] = r.exact_triangles ? json(*r.exact_triangles) : json(nullptr);
  j["mean_deviation_percent"] =
      r.mean_deviation_percent ? json(*r.mean_deviation_percent) : json(nullptr);
  return j.dump(2);
}

std::string format_text(const EstimateReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "input:        " << r.config.input_path << '\n'
     << "estimators:   " << r.estimators_used << " (" << r.groups_used << " groups)\n"
     << "batch size:   " << r.config.batch_size << '\n'
     << "workers:      " << r.workers_used << '\n'
     << "edges:        " << r.m_seen << '\n'
     << "estimate:     " << r.final_estimate << '\n';
  if (r.exact_triangles) os << "exact:        " << *r.exact_triangles << '\n';
  if (r.mean_deviation_percent)
    os << "mean dev:     " << *r.mean_deviation_percent << "%\n";
  os << "processing:   " << std::setprecision(4) << r.processing_seconds << " s\n"
     << "io wait:      " << r.io_seconds << " s\n"
     << "throughput:   " << std::setprecision(0) << r.throughput_edges_per_sec
     << " edges/s\n";
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const auto& t = r.trials[i];
    os << "trial " << i << ": ";
    if (t.ok)
      os << std::setprecision(2) << t.estimate << '\n';
    else
      os << "FAILED: " << t.error << '\n';
  }
  return os.str();
}

std::string format_text(std::span<const BenchRow> rows, SweepKind kind) {
  std::ostringstream os;
  os << std::left << std::setw(12) << sweep_name(kind) << std::setw(14) << "seconds"
     << std::setw(18) << "edges/s" << "speedup\n";
  for (const auto& row : rows) {
    os << std::setw(12) << row.value << std::setw(14) << std::fixed
       << std::setprecision(4) << row.processing_seconds << std::setw(18)
       << std::setprecision(0) << row.throughput_edges_per_sec
       << std::setprecision(3) << row.speedup << '\n';
  }
  return os.str();
}

std::string format_json(std::span<const BenchRow> rows, const BenchConfig& cfg) {
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back({{"value", row.value},
                   {"m_seen", row.m_seen},
                   {"processing_seconds", row.processing_seconds},
                   {"throughput_edges_per_sec", row.throughput_edges_per_sec},
                   {"speedup", row.speedup},
                   {"estimate", row.estimate}});
  }
  json j = {{"schema", "bulktri.bench.v1"},
            {"sweep", sweep_name(cfg.sweep)},
            {"estimators", cfg.estimators},
            {"batch_size", cfg.batch_size},
            {"seed", cfg.seed},
            {"rows", std::move(out)}};
  return j.dump(2);
}

}  // namespace bulktri
