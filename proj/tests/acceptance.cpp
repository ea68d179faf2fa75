// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any non-informational criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "bulktri/aggregate.hpp"
#include "bulktri/stream.hpp"
#include "bulktri/synthetic.hpp"
#include "support.hpp"

using namespace bulktri;
using namespace bulktri::testing;

namespace {

using Clock = std::chrono::steady_clock;

// Tolerances and limits.
constexpr double kUnbiasedSe = 3.0;
constexpr double kPvalueFloor = 0.001;
constexpr double kFailureSlackSigmas = 3.0;
constexpr double kWorkerSpeedupRatio = 0.5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const char* title, double limit_s, bool informational,
            const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = out.pass && in_time;
  if (!pass && !informational) ++g_failures;
  std::printf("[%s] %2d %s%s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", id, title,
              informational ? " [informational]" : "", out.detail.c_str(), secs,
              in_time ? "" : ", over time limit");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::uint64_t q1(const RankedArcs& ranked, VertexId u, BatchPos pos) {
  const RankQuery q{u, pos};
  return query_rank_outgoing(Executor::sequential(), ranked,
                             std::span<const RankQuery>(&q, 1))
      .front();
}

// Engine over `stream` in batches of `s` (0: one batch), then the
// median-of-means estimate with the default group count for delta = 0.1.
double final_estimate(std::span<const Edge> stream, std::size_t r, std::uint64_t seed,
                      std::size_t s) {
  const auto engine = run_stream(stream, r, seed, s, Executor::sequential());
  AggregateConfig cfg;
  cfg.groups = default_group_count(r, cfg.delta);
  return aggregate_estimate(Executor::sequential(), engine.estimators(),
                            engine.state().m_seen, cfg);
}

// ---------------------------------------------------------------------------

Outcome rank_tables() {
  const auto ranked = rank_all(Executor::sequential(), example_batch());
  const std::vector<Arc> expected{
      {B, D, 4, 0}, {B, C, 1, 1}, {C, D, 2, 0}, {C, B, 1, 1}, {D, F, 5, 0},
      {D, B, 4, 1}, {D, C, 2, 2}, {E, F, 3, 0}, {F, D, 5, 0}, {F, E, 3, 1}};
  const auto arcs = ranked.by_src_pos_desc();
  std::size_t table_ok = 0;
  for (std::size_t i = 0; i < expected.size() && i < arcs.size(); ++i)
    table_ok += arcs[i] == expected[i];
  const bool table = arcs.size() == expected.size() && table_ok == expected.size();

  // C->A: A is not in the batch, so the query uses the stale position.
  const std::vector<std::uint64_t> got{q1(ranked, C, stale_pos), q1(ranked, C, 2),
                                       q1(ranked, D, 2), q1(ranked, D, 5),
                                       q1(ranked, B, 1), q1(ranked, B, 4)};
  const std::vector<std::uint64_t> want{2, 0, 2, 0, 1, 0};
  std::size_t q_ok = 0;
  for (std::size_t i = 0; i < want.size(); ++i) q_ok += got[i] == want[i];
  return {table && q_ok == want.size(),
          fmt("%zu/10 arc records, %zu/6 rank queries", table_ok, q_ok)};
}

Outcome substream_tables() {
  const auto ranked = rank_all(Executor::sequential(), example_batch());
  auto names = [&](Edge f1, VertexId u, VertexId v) {
    const auto ex = example_batch();
    BatchPos p = stale_pos;
    for (std::size_t i = 0; i < ex.size(); ++i)
      if (ex[i] == f1) p = static_cast<BatchPos>(i + 1);
    const std::uint64_t ld = q1(ranked, u, p);
    const std::uint64_t rd = q1(ranked, v, p);
    std::vector<Edge> out;
    for (std::uint64_t phi = 0; phi < ld + rd; ++phi)
      out.push_back(substream_edge(ranked, f1, u, ld, phi).edge);
    return out;
  };
  const auto dc = names(Edge::of(D, C), D, C);
  const auto ce = names(Edge::of(C, E), C, E);
  const bool ok = dc == std::vector<Edge>{Edge::of(D, F), Edge::of(B, D)} &&
                  ce == std::vector<Edge>{Edge::of(C, D), Edge::of(C, B), Edge::of(E, F)};
  return {ok, fmt("DC -> %zu edges, CE -> %zu edges", dc.size(), ce.size())};
}

std::vector<std::vector<Edge>> small_graphs() {
  std::vector<std::vector<Edge>> out;
  const std::vector<std::pair<VertexId, double>> shapes{
      {8, 0.6}, {12, 0.5}, {16, 0.4}, {20, 0.3}, {25, 0.25},
      {30, 0.2}, {40, 0.15}, {50, 0.1}, {50, 0.2}};
  std::uint64_t seed = 500;
  for (auto [n, p] : shapes) out.push_back(generate_gnp(n, p, seed++));
  out.push_back(generate_powerlaw(50, 2.2, 2, seed));
  return out;
}

Outcome nbsi_sweep() {
  const auto graphs = small_graphs();
  std::size_t checks = 0, failures = 0;
  std::string first;
  for (const auto& stream : graphs) {
    const OrderedGraph g(stream);
    for (std::size_t s : {std::size_t{1}, std::size_t{7}, std::size_t{64}, stream.size()}) {
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Engine engine(16, seed, Executor::sequential());
        for (std::size_t lo = 0; lo < stream.size(); lo += s) {
          const std::size_t len = std::min(s, stream.size() - lo);
          engine.ingest_batch(std::span<const Edge>(stream).subspan(lo, len));
          for (const auto& e : engine.estimators()) {
            ++checks;
            const auto c = validate_nbsi(e, g, lo + len);
            if (!c.ok) {
              ++failures;
              if (first.empty()) first = c.diagnostic;
            }
          }
        }
      }
    }
  }
  return {failures == 0,
          fmt("%zu estimator checks over 10 graphs x 4 batch sizes x 100 seeds, %zu failures%s%s",
              checks, failures, first.empty() ? "" : "; first: ", first.c_str())};
}

Outcome discovery_distribution() {
  const auto stream = generate_gnp(20, 0.3, 71);
  const OrderedGraph g(stream);
  const auto triangles = enumerate_triangles(stream);
  const std::size_t r = 200000;
  const auto engine = run_stream(stream, r, 4242, 7, Executor::sequential());
  const double m = static_cast<double>(stream.size());

  std::map<Triangle, std::size_t> slot;
  for (std::size_t i = 0; i < triangles.size(); ++i) slot[triangles[i]] = i;
  std::vector<double> obs(triangles.size() + 1, 0.0), exp(triangles.size() + 1, 0.0);
  for (const auto& e : engine.estimators()) {
    if (e.f3.empty()) {
      obs.back() += 1.0;
      continue;
    }
    Triangle t{e.f1.u, e.f1.v, e.f2.u == e.f1.u || e.f2.u == e.f1.v ? e.f2.v : e.f2.u};
    std::sort(t.begin(), t.end());
    obs[slot.at(t)] += 1.0;
  }
  double hit = 0.0;
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const double p = 1.0 / (m * static_cast<double>(triangle_c(g, triangles[i])));
    exp[i] = p * static_cast<double>(r);
    hit += p;
  }
  exp.back() = (1.0 - hit) * static_cast<double>(r);
  const double pv = chi_square_pvalue(obs, exp);
  return {pv > kPvalueFloor,
          fmt("%zu triangles, m=%zu, r=%zu, chi-square p=%.4f", triangles.size(),
              stream.size(), r, pv)};
}

Outcome unbiasedness() {
  const std::size_t r = 200000;
  std::string detail;
  bool ok = true;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto stream = generate_gnp(30 + 5 * k, 0.25, 900 + k);
    const double tau = static_cast<double>(exact_triangle_count(stream));
    const auto engine = run_stream(stream, r, 77 + k, 16, Executor::sequential());
    double sum = 0.0, sq = 0.0;
    for (const auto& e : engine.estimators()) {
      const double x = coarse_estimate(e, engine.state().m_seen);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / r;
    const double se = std::sqrt((sq / r - mean * mean) / (r - 1));
    const double z = (mean - tau) / se;
    ok = ok && std::abs(z) <= kUnbiasedSe;
    detail += fmt("%stau=%.0f mean=%.2f z=%+.2f", k ? "; " : "", tau, mean, z);
  }
  return {ok, detail};
}

Outcome epsilon_delta() {
  const double eps = 0.5, delta = 0.1;
  const auto stream = generate_gnp(20, 0.4, 33);
  const OrderedGraph g(stream);
  const auto tau = exact_triangle_count(stream);
  const std::size_t r = required_estimators(eps, delta, stream.size(), g.max_degree(), tau);
  const std::size_t runs = 200;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    const double est = final_estimate(stream, r, derive_seed(6, i), 8);
    if (std::abs(est - static_cast<double>(tau)) > eps * static_cast<double>(tau)) ++bad;
  }
  const double frac = static_cast<double>(bad) / runs;
  const double limit = delta + kFailureSlackSigmas * std::sqrt(delta * (1 - delta) / runs);
  return {frac <= limit, fmt("tau=%llu r=%zu: %zu/%zu runs off by > eps (%.3f <= %.3f)",
                             static_cast<unsigned long long>(tau), r, bad, runs, frac, limit)};
}

Outcome batch_invariance() {
  const auto stream = generate_gnp(40, 0.2, 12);
  const std::size_t r = 2000, runs = 200;
  const std::vector<std::size_t> sizes{1, 7, 64, 0};
  std::vector<std::vector<double>> dist(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k)
    for (std::size_t i = 0; i < runs; ++i)
      dist[k].push_back(final_estimate(stream, r, derive_seed(1000 + k, i), sizes[k]));
  double min_p = 1.0;
  for (std::size_t a = 0; a < sizes.size(); ++a)
    for (std::size_t b = a + 1; b < sizes.size(); ++b)
      min_p = std::min(min_p, ks_two_sample_pvalue(dist[a], dist[b]));
  return {min_p > kPvalueFloor,
          fmt("batch sizes {1,7,64,whole}, %zu runs each, min pairwise KS p=%.4f", runs, min_p)};
}

// ---------------------------------------------------------------------------
// Primitive oracles

struct Tally {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // ok, total
  void add(const std::string& name, bool ok) {
    auto& c = counts[name];
    c.first += ok;
    ++c.second;
  }
};

Outcome primitive_oracles() {
  std::mt19937_64 rng(8);
  const auto ex = tiny_grain(4);
  Tally t;
  auto len = [&] { return static_cast<std::size_t>(rng() % 3000); };
  auto vec = [&](std::size_t n, std::uint64_t range) {
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng() % range;
    return v;
  };
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = len();
    const std::uint64_t range = 1 + rng() % 500;

    // sort (stability on pairs compared by first only)
    std::vector<std::pair<std::uint64_t, std::size_t>> pairs(n);
    for (std::size_t i = 0; i < n; ++i) pairs[i] = {rng() % range, i};
    auto by_first = [](const auto& x, const auto& y) { return x.first < y.first; };
    auto want_sorted = pairs;
    std::stable_sort(want_sorted.begin(), want_sorted.end(), by_first);
    t.add("sort", par::sort(ex, std::span<const std::pair<std::uint64_t, std::size_t>>(pairs),
                            by_first) == want_sorted);

    // merge
    auto a = vec(len(), range), b = vec(len(), range);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::uint64_t> want_merge;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(want_merge));
    t.add("merge", par::merge(ex, std::span<const std::uint64_t>(a),
                              std::span<const std::uint64_t>(b)) == want_merge);

    // concat
    auto want_cat = a;
    want_cat.insert(want_cat.end(), b.begin(), b.end());
    t.add("concat", par::concat(ex, std::span<const std::uint64_t>(a),
                                std::span<const std::uint64_t>(b)) == want_cat);

    // map / combine
    const auto v = vec(n, range), w = vec(n, range);
    std::vector<std::uint64_t> want_map(n), want_comb(n);
    for (std::size_t i = 0; i < n; ++i) {
      want_map[i] = v[i] * 3 + 1;
      want_comb[i] = v[i] ^ (w[i] << 1);
    }
    t.add("map", par::map(ex, std::span<const std::uint64_t>(v),
                          [](std::uint64_t x) { return x * 3 + 1; }) == want_map);
    t.add("combine", par::combine(ex, std::span<const std::uint64_t>(v),
                                  std::span<const std::uint64_t>(w),
                                  [](std::uint64_t x, std::uint64_t y) {
                                    return x ^ (y << 1);
                                  }) == want_comb);

    // scan (exclusive, non-commutative affine composition)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> aff(n);
    for (auto& f : aff) f = {1 + rng() % 7, rng() % 11};
    auto compose = [](const std::pair<std::uint64_t, std::uint64_t>& f,
                      const std::pair<std::uint64_t, std::uint64_t>& g) {
      return std::pair<std::uint64_t, std::uint64_t>{f.first * g.first,
                                                     f.second * g.first + g.second};
    };
    std::vector<std::pair<std::uint64_t, std::uint64_t>> want_scan(n);
    std::pair<std::uint64_t, std::uint64_t> acc{1, 0};
    for (std::size_t i = 0; i < n; ++i) {
      want_scan[i] = acc;
      acc = compose(acc, aff[i]);
    }
    t.add("scan", par::scan(ex, std::span<const std::pair<std::uint64_t, std::uint64_t>>(aff),
                            compose, std::pair<std::uint64_t, std::uint64_t>{1, 0}) ==
                      want_scan);

    // extract
    std::vector<par::Index> idx(len());
    for (auto& i : idx) i = (n == 0 || rng() % 5 == 0) ? par::null_index : 1 + rng() % n;
    const auto got = par::extract(ex, std::span<const std::uint64_t>(v),
                                  std::span<const par::Index>(idx));
    bool ext_ok = got.size() == idx.size();
    for (std::size_t i = 0; ext_ok && i < idx.size(); ++i)
      ext_ok = idx[i] == par::null_index ? !got[i].has_value()
                                         : (got[i] && *got[i] == v[idx[i] - 1]);
    t.add("extract", ext_ok);

    // scan with resets against the sequential loop
    std::vector<par::Tick> ticks(n);
    for (auto& x : ticks) x = rng() % 4 == 0 ? par::Tick::reset : par::Tick::one;
    t.add("scan_with_resets",
          par::scan_with_resets(ex, ticks) == reset_loop(ticks));

    // pack
    std::vector<std::size_t> want_pack;
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] % 3 == 0) want_pack.push_back(i);
    t.add("pack_index", par::pack_index(ex, n, [&](std::size_t i) { return v[i] % 3 == 0; }) ==
                            want_pack);

    // pred-EQ and exact multisearch against binary search
    auto keys = vec(len(), range * 4);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    auto queries = vec(len(), range * 4 + 10);
    const bool presorted = rng() % 4 == 0;
    if (presorted) std::sort(queries.begin(), queries.end());
    const auto pe = par::pred_eq_search(ex, std::span<const std::uint64_t>(keys),
                                        std::span<const std::uint64_t>(queries),
                                        std::less<>{}, presorted);
    const auto xs = par::exact_search(ex, std::span<const std::uint64_t>(keys),
                                      std::span<const std::uint64_t>(queries),
                                      std::less<>{}, presorted);
    bool pe_ok = true, xs_ok = true;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto it = std::upper_bound(keys.begin(), keys.end(), queries[i]);
      const std::size_t want = it == keys.begin()
                                   ? par::not_found
                                   : static_cast<std::size_t>(it - keys.begin()) - 1;
      pe_ok = pe_ok && pe[i] == want;
      const auto lb = std::lower_bound(keys.begin(), keys.end(), queries[i]);
      const std::size_t want_x = (lb != keys.end() && *lb == queries[i])
                                     ? static_cast<std::size_t>(lb - keys.begin())
                                     : par::not_found;
      xs_ok = xs_ok && xs[i] == want_x;
    }
    t.add("pred_eq_search", pe_ok);
    t.add("exact_search", xs_ok);

    // key-value multisearch over an unsorted sequence
    par::KeyValueSeq<std::uint64_t, std::uint64_t> kv;
    for (std::uint64_t k : keys) kv.items.emplace_back(k, k * 7);
    std::shuffle(kv.items.begin(), kv.items.end(), rng);
    const auto kx = par::exact_multisearch(ex, kv, std::span<const std::uint64_t>(queries));
    const auto kp = par::pred_eq_multisearch(ex, kv, std::span<const std::uint64_t>(queries));
    bool kx_ok = true, kp_ok = true;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto want_x = xs[i] == par::not_found
                              ? std::optional<std::pair<std::uint64_t, std::uint64_t>>{}
                              : std::make_pair(keys[xs[i]], keys[xs[i]] * 7);
      const auto want_p = pe[i] == par::not_found
                              ? std::optional<std::pair<std::uint64_t, std::uint64_t>>{}
                              : std::make_pair(keys[pe[i]], keys[pe[i]] * 7);
      kx_ok = kx_ok && kx[i] == want_x;
      kp_ok = kp_ok && kp[i] == want_p;
    }
    t.add("exact_multisearch", kx_ok);
    t.add("pred_eq_multisearch", kp_ok);
  }

  bool ok = true;
  std::string detail;
  for (const auto& [name, c] : t.counts) {
    ok = ok && c.first == c.second && c.second >= 1000;
    detail += fmt("%s%s %zu/%zu", detail.empty() ? "" : ", ", name.c_str(), c.first, c.second);
  }
  return {ok, detail};
}

Outcome determinism() {
  const auto stream = generate_gnp(400, 0.05, 19);
  const std::size_t r = 50000, s = 100;
  const int max_workers = std::max(Executor::hardware().workers, 4);
  const Executor one = Executor::with_workers(1);
  const Executor many = Executor{max_workers, 1024};
  const auto e1 = run_stream(stream, r, 31337, s, one);
  const auto e2 = run_stream(stream, r, 31337, s, many);
  const bool states = std::equal(e1.estimators().begin(), e1.estimators().end(),
                                 e2.estimators().begin(), e2.estimators().end());
  AggregateConfig cfg;
  cfg.groups = default_group_count(r, cfg.delta);
  const double a1 = aggregate_estimate(one, e1.estimators(), e1.state().m_seen, cfg);
  const double a2 = aggregate_estimate(many, e2.estimators(), e2.state().m_seen, cfg);
  const bool est = std::memcmp(&a1, &a2, sizeof a1) == 0;
  return {states && est, fmt("1 vs %d workers: states %s, estimate %.6f vs %.6f", max_workers,
                             states ? "identical" : "differ", a1, a2)};
}

std::vector<Edge> scaling_stream() {
  // about 1.0e7 edges, average degree about 13
  return generate_gnp(1500000, 0.0000089, 2026);
}

Outcome scaling_batch(std::span<const Edge> stream) {
  BenchConfig cfg;
  cfg.estimators = 1000000;
  cfg.seed = 5;
  cfg.workers = 0;
  cfg.sweep = SweepKind::batch_size;
  cfg.values = {1000, 10000, 100000, 1000000};
  const auto rows = run_benchmark(stream, cfg);
  bool ok = true;
  std::string detail = fmt("m=%zu r=%zu;", stream.size(), cfg.estimators);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) ok = ok && rows[i].throughput_edges_per_sec >= rows[i - 1].throughput_edges_per_sec;
    detail += fmt(" s=%llu: %.0f edges/s", static_cast<unsigned long long>(rows[i].value),
                  rows[i].throughput_edges_per_sec);
  }
  return {ok, detail};
}

Outcome scaling_workers(std::span<const Edge> stream) {
  BenchConfig cfg;
  cfg.estimators = 1000000;
  cfg.batch_size = 100000;
  cfg.seed = 5;
  cfg.sweep = SweepKind::workers;
  cfg.values = {1, 4};
  const auto rows = run_benchmark(stream, cfg);
  const double ratio = rows[1].processing_seconds / rows[0].processing_seconds;
  return {ratio < kWorkerSpeedupRatio,
          fmt("1 worker %.2fs, 4 workers %.2fs, ratio %.3f (hardware threads: %d)",
              rows[0].processing_seconds, rows[1].processing_seconds, ratio,
              Executor::hardware().workers)};
}

Outcome accuracy_vs_r() {
  const auto stream = generate_gnp(2000, 0.01, 404);
  const auto path = (std::filesystem::temp_directory_path() / "bulktri_accuracy.txt").string();
  write_edge_list(path, stream);
  auto md = [&](std::size_t r) {
    RunConfig cfg;
    cfg.input_path = path;
    cfg.estimators = r;
    cfg.batch_size = 1000;
    cfg.trials = 20;
    cfg.seed = 99;
    cfg.exact_check = true;
    const auto rep = run_count(cfg);
    if (!rep.all_ok() || !rep.mean_deviation_percent)
      throw std::runtime_error("trial failed");
    return *rep.mean_deviation_percent;
  };
  const double small = md(2000);
  const double large = md(200000);
  return {large < small, fmt("tau=%llu: MD %.2f%% at r=2e3, %.2f%% at r=2e5",
                             static_cast<unsigned long long>(exact_triangle_count(stream)),
                             small, large)};
}

}  // namespace

int main() {
  report(1, "rank tables on the example batch", 1.0, false, rank_tables);
  report(2, "substream naming on the example batch", 1.0, false, substream_tables);
  report(3, "invariant clauses after every batch", 120.0, false, nbsi_sweep);
  report(4, "triangle discovery distribution", 60.0, false, discovery_distribution);
  report(5, "unbiased mean coarse estimate", 60.0, false, unbiasedness);
  report(6, "(eps, delta) guarantee", 300.0, false, epsilon_delta);
  report(7, "batch-size invariance", 300.0, false, batch_invariance);
  report(8, "primitive oracles", 0.0, false, primitive_oracles);
  report(9, "determinism under parallelism", 0.0, false, determinism);

  const auto t0 = Clock::now();
  const auto stream = scaling_stream();
  const double gen_s = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("     (scaling stream: %zu edges generated in %.1fs)\n", stream.size(), gen_s);
  report(10, "scaling: throughput non-decreasing in batch size", 900.0, true,
         [&] { return scaling_batch(stream); });
  report(10, "scaling: 4 workers under half the 1-worker time", 900.0, true,
         [&] { return scaling_workers(stream); });

  report(11, "accuracy improves with r", 0.0, false, accuracy_vs_r);

  std::printf("%s: %d required criteria failed\n", g_failures ? "FAILED" : "OK", g_failures);
  return g_failures ? 1 : 0;
}
