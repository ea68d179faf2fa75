#include "bulktri/stream.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <unordered_map>

#include "bulktri/aggregate.hpp"
#include "bulktri/engine.hpp"
#include "bulktri/oracle.hpp"
#include "bulktri/random.hpp"

namespace bulktri {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Next whitespace-delimited token starting at `pos`, or empty.
std::string_view token(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  const std::size_t start = pos;
  while (pos < line.size() && !is_space(line[pos])) ++pos;
  return line.substr(start, pos - start);
}

Executor executor_for(int workers) {
  return workers <= 0 ? Executor::hardware() : Executor::with_workers(workers);
}

}  // namespace

ParseError::ParseError(const std::string& path, std::size_t line,
                       const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

EdgeListReader::EdgeListReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw std::runtime_error("cannot open edge list " + path);
}

std::vector<Edge> EdgeListReader::next_batch(std::size_t count) {
  std::vector<Edge> out;
  out.reserve(std::min<std::size_t>(count, 1 << 20));
  while (out.size() < count && std::getline(in_, buf_)) {
    ++line_;
    std::string_view line(buf_);
    std::size_t pos = 0;
    const auto first = token(line, pos);
    if (first.empty() || first.front() == '#') continue;
    const auto second = token(line, pos);
    const auto extra = token(line, pos);
    if (second.empty() || !extra.empty())
      throw ParseError(path_, line_, "expected two vertex ids");
    VertexId a = 0;
    VertexId b = 0;
    auto parse = [&](std::string_view t, VertexId& x) {
      const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
      if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ParseError(path_, line_, "bad vertex id '" + std::string(t) + "'");
    };
    parse(first, a);
    parse(second, b);
    if (a == b)
      throw ParseError(path_, line_, "self-loop on vertex " + std::to_string(a));
    out.push_back(Edge::of(a, b));
  }
  if (in_.bad()) throw std::runtime_error("read error on " + path_);
  return out;
}

std::vector<std::vector<Edge>> parse_edge_list(const std::string& path,
                                               std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  EdgeListReader reader(path);
  std::vector<std::vector<Edge>> batches;
  for (auto b = reader.next_batch(batch_size); !b.empty();
       b = reader.next_batch(batch_size))
    batches.push_back(std::move(b));
  return batches;
}

std::vector<Edge> load_edge_list(const std::string& path) {
  EdgeListReader reader(path);
  return reader.next_batch(static_cast<std::size_t>(-1));
}

void write_edge_list(const std::string& path, std::span<const Edge> edges,
                     const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!header.empty()) out << "# " << header << '\n';
  for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
  if (!out) throw std::runtime_error("write error on " + path);
}

void validate(const RunConfig& cfg) {
  if (cfg.estimators == 0) throw std::invalid_argument("estimators must be >= 1");
  if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
}

bool EstimateReport::all_ok() const {
  return std::all_of(trials.begin(), trials.end(),
                     [](const TrialResult& t) { return t.ok; });
}

EstimateReport run_count(const RunConfig& cfg) {
  validate(cfg);
  EstimateReport report;
  report.config = cfg;
  const Executor ex = executor_for(cfg.workers);
  report.workers_used = ex.workers;

  std::size_t r = cfg.estimators;
  if (cfg.epsilon && cfg.tau_lower_bound) {
    // sizing pre-pass for m and the maximum degree
    EdgeListReader reader(cfg.input_path);
    std::unordered_map<VertexId, std::uint64_t> deg;
    std::uint64_t m = 0;
    std::uint64_t max_deg = 0;
    for (auto b = reader.next_batch(1 << 16); !b.empty(); b = reader.next_batch(1 << 16)) {
      m += b.size();
      for (const Edge& e : b) {
        max_deg = std::max({max_deg, ++deg[e.u], ++deg[e.v]});
      }
    }
    r = static_cast<std::size_t>(
        required_estimators(*cfg.epsilon, cfg.delta, m, max_deg, *cfg.tau_lower_bound));
  }
  report.estimators_used = r;
  report.groups_used = cfg.groups ? *cfg.groups : default_group_count(r, cfg.delta);
  if (report.groups_used == 0 || report.groups_used > r)
    throw std::invalid_argument("group count must lie in [1, estimators]");

  if (cfg.exact_check)
    report.exact_triangles = exact_triangle_count(load_edge_list(cfg.input_path));

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    TrialResult trial;
    trial.seed = derive_seed(cfg.seed, t);
    const auto wall0 = Clock::now();
    try {
      Engine engine(r, trial.seed, ex);
      EdgeListReader reader(cfg.input_path);
      // two-slot handoff: the next batch is parsed while this one is ingested
      auto pending = std::async(std::launch::async,
                                [&] { return reader.next_batch(cfg.batch_size); });
      for (;;) {
        const auto io0 = Clock::now();
        std::vector<Edge> batch = pending.get();
        trial.io_seconds += seconds_since(io0);
        if (batch.empty()) break;
        pending = std::async(std::launch::async,
                             [&] { return reader.next_batch(cfg.batch_size); });
        const auto p0 = Clock::now();
        try {
          engine.ingest_batch(batch);
        } catch (...) {
          pending.wait();
          throw;
        }
        trial.processing_seconds += seconds_since(p0);
      }
      trial.m_seen = engine.state().m_seen;
      AggregateConfig agg;
      agg.groups = report.groups_used;
      agg.delta = cfg.delta;
      trial.estimate = aggregate_estimate(ex, engine.estimators(), trial.m_seen, agg);
      trial.ok = true;
    } catch (const std::exception& err) {
      trial.ok = false;
      trial.error = err.what();
    }
    trial.wall_seconds = seconds_since(wall0);
    report.trials.push_back(trial);
  }

  double sum = 0.0;
  double dev = 0.0;
  std::size_t ok = 0;
  for (const auto& t : report.trials) {
    report.processing_seconds += t.processing_seconds;
    report.io_seconds += t.io_seconds;
    if (!t.ok) continue;
    ++ok;
    sum += t.estimate;
    report.m_seen = t.m_seen;
    if (report.exact_triangles && *report.exact_triangles > 0) {
      const double tau = static_cast<double>(*report.exact_triangles);
      dev += std::abs(t.estimate - tau) / tau * 100.0;
    }
  }
  if (ok) {
    report.final_estimate = sum / static_cast<double>(ok);
    if (report.exact_triangles && *report.exact_triangles > 0)
      report.mean_deviation_percent = dev / static_cast<double>(ok);
  }
  if (report.processing_seconds > 0.0)
    report.throughput_edges_per_sec =
        static_cast<double>(report.m_seen) * static_cast<double>(ok) /
        report.processing_seconds;
  return report;
}

std::vector<BenchRow> run_benchmark(std::span<const Edge> stream,
                                    const BenchConfig& cfg) {
  if (cfg.values.empty()) throw std::invalid_argument("benchmark sweep is empty");
  std::vector<BenchRow> rows;
  for (const std::uint64_t value : cfg.values) {
    if (value == 0) throw std::invalid_argument("sweep values must be positive");
    const std::size_t s =
        cfg.sweep == SweepKind::batch_size ? value : cfg.batch_size;
    const Executor ex = cfg.sweep == SweepKind::workers
                            ? Executor::with_workers(static_cast<int>(value))
                            : executor_for(cfg.workers);
    Engine engine(cfg.estimators, cfg.seed, ex);
    const auto t0 = Clock::now();
    for (std::size_t lo = 0; lo < stream.size(); lo += s)
      engine.ingest_batch(stream.subspan(lo, std::min(s, stream.size() - lo)));
    BenchRow row;
    row.processing_seconds = seconds_since(t0);
    row.value = value;
    row.m_seen = engine.state().m_seen;
    row.throughput_edges_per_sec =
        row.processing_seconds > 0.0
            ? static_cast<double>(row.m_seen) / row.processing_seconds
            : 0.0;
    AggregateConfig agg;
    agg.groups = default_group_count(cfg.estimators, agg.delta);
    row.estimate = aggregate_estimate(ex, engine.estimators(), row.m_seen, agg);
    rows.push_back(row);
  }
  for (auto& row : rows)
    row.speedup = row.processing_seconds > 0.0
                      ? rows.front().processing_seconds / row.processing_seconds
                      : 1.0;
  return rows;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length samples of size >= 2");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace bulktri
