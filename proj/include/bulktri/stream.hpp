#pragma once

// Edge-list ingestion, trial runner and benchmark sweeps.

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bulktri/estimator.hpp"

namespace bulktri {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads "u v" lines ('#' lines and blank lines skipped) from a plain-text
// edge list, one batch at a time.
class EdgeListReader {
 public:
  explicit EdgeListReader(const std::string& path);

  // Up to `count` edges; empty once the file is exhausted.
  std::vector<Edge> next_batch(std::size_t count);

  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string buf_;
  std::size_t line_ = 0;
};

std::vector<std::vector<Edge>> parse_edge_list(const std::string& path,
                                               std::size_t batch_size);
std::vector<Edge> load_edge_list(const std::string& path);

void write_edge_list(const std::string& path, std::span<const Edge> edges,
                     const std::string& header = {});

enum class OutputFormat { text, json };

struct RunConfig {
  std::string input_path;
  std::size_t estimators = 100000;
  std::size_t batch_size = 16384;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  int workers = 0;  // 0: all available
  std::optional<double> epsilon;
  double delta = 0.1;
  std::optional<std::uint64_t> tau_lower_bound;
  std::optional<std::size_t> groups;
  bool exact_check = false;
  OutputFormat format = OutputFormat::text;
};

// Throws std::invalid_argument when r, s or trials is zero.
void validate(const RunConfig& cfg);

struct TrialResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double estimate = 0.0;
  std::uint64_t m_seen = 0;
  double processing_seconds = 0.0;
  double io_seconds = 0.0;
  double wall_seconds = 0.0;
};

struct EstimateReport {
  RunConfig config;
  std::size_t estimators_used = 0;
  std::size_t groups_used = 0;
  int workers_used = 1;
  double final_estimate = 0.0;  // mean over successful trials
  std::vector<TrialResult> trials;
  std::optional<std::uint64_t> exact_triangles;
  std::optional<double> mean_deviation_percent;
  std::uint64_t m_seen = 0;
  double processing_seconds = 0.0;
  double io_seconds = 0.0;
  double throughput_edges_per_sec = 0.0;

  bool all_ok() const;
};

EstimateReport run_count(const RunConfig& cfg);

enum class SweepKind { batch_size, workers };

struct BenchConfig {
  std::size_t estimators = 100000;
  std::size_t batch_size = 16384;
  std::uint64_t seed = 1;
  int workers = 0;
  SweepKind sweep = SweepKind::batch_size;
  std::vector<std::uint64_t> values;
};

struct BenchRow {
  std::uint64_t value = 0;
  std::uint64_t m_seen = 0;
  double processing_seconds = 0.0;
  double throughput_edges_per_sec = 0.0;
  double speedup = 1.0;  // first row's time over this row's time
  double estimate = 0.0;
};

std::vector<BenchRow> run_benchmark(std::span<const Edge> stream,
                                    const BenchConfig& cfg);

// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

std::string format_text(const EstimateReport& report);
std::string format_json(const EstimateReport& report);
std::string format_text(std::span<const BenchRow> rows, SweepKind kind);
std::string format_json(std::span<const BenchRow> rows, const BenchConfig& cfg);

}  // namespace bulktri
