#pragma once

// Shared test helpers: statistical tests, small named graphs and sequential
// reference implementations used as oracles for the parallel primitives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "bulktri/engine.hpp"
#include "bulktri/estimator.hpp"
#include "bulktri/oracle.hpp"
#include "bulktri/primitives.hpp"

namespace bulktri::testing {

// Vertex names used by the worked example batch.
inline constexpr VertexId A = 1, B = 2, C = 3, D = 4, E = 5, F = 6;

// The five-edge example batch, in arrival order.
inline std::vector<Edge> example_batch() {
  return {Edge::of(B, C), Edge::of(C, D), Edge::of(E, F), Edge::of(B, D),
          Edge::of(D, F)};
}

inline std::vector<Edge> k3_stream() {
  return {Edge::of(1, 2), Edge::of(2, 3), Edge::of(1, 3)};
}

// Executor that takes the parallel code paths even on tiny inputs.
inline Executor tiny_grain(int workers = 4) { return Executor{workers, 16}; }

inline double chi_square_pvalue(std::span<const double> observed,
                                std::span<const double> expected,
                                int extra_dof_lost = 0) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const double dof = static_cast<double>(observed.size()) - 1.0 - extra_dof_lost;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Asymptotic two-sample Kolmogorov-Smirnov p-value.
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Expected value of the coarse estimate over every sampling outcome that the
// invariant allows: f1 uniform over the stream, f2 uniform over the later
// neighborhood of f1. Computed from the definition, not from the engine.
inline double enumerate_expected_coarse(std::span<const Edge> stream) {
  const double m = static_cast<double>(stream.size());
  double expectation = 0.0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    std::vector<std::size_t> later;
    for (std::size_t j = i + 1; j < stream.size(); ++j)
      if (stream[j].adjacent(stream[i])) later.push_back(j);
    for (std::size_t j : later) {
      const Edge close = closing_edge(stream[i], stream[j]);
      bool closes = false;
      for (std::size_t k = j + 1; k < stream.size(); ++k)
        if (stream[k] == close) closes = true;
      const double x = closes ? static_cast<double>(later.size()) * m : 0.0;
      expectation += x / m / static_cast<double>(later.size());
    }
  }
  return expectation;
}

// O(n^3) triangle count over the vertex set.
inline std::uint64_t cubic_triangle_count(std::span<const Edge> edges) {
  std::vector<VertexId> vs;
  for (const Edge& e : edges) {
    vs.push_back(e.u);
    vs.push_back(e.v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<Edge> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end());
  auto has = [&](VertexId a, VertexId b) {
    return std::binary_search(sorted.begin(), sorted.end(), Edge::of(a, b));
  };
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (!has(vs[i], vs[j])) continue;
      for (std::size_t k = j + 1; k < vs.size(); ++k)
        if (has(vs[i], vs[k]) && has(vs[j], vs[k])) ++t;
    }
  return t;
}

// rank(x -> y) straight from its definition: later batch edges on x when
// {x, y} is in the batch, the batch degree of x otherwise.
inline std::uint64_t naive_rank(std::span<const Edge> batch, VertexId x, VertexId y) {
  const Edge xy = Edge::of(x, y);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i] == xy) {
      std::uint64_t c = 0;
      for (std::size_t j = i + 1; j < batch.size(); ++j)
        if (batch[j].touches(x)) ++c;
      return c;
    }
  }
  std::uint64_t deg = 0;
  for (const Edge& e : batch)
    if (e.touches(x)) ++deg;
  return deg;
}

// Sequential loop for scan with resets.
inline std::vector<std::uint64_t> reset_loop(std::span<const par::Tick> a) {
  std::vector<std::uint64_t> out(a.size());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = sum;
    if (a[i] == par::Tick::reset)
      sum = 0;
    else
      sum += 1;
  }
  return out;
}

// Runs a stream through an engine in batches of `batch` edges (0 = whole
// stream) and returns it.
inline Engine run_stream(std::span<const Edge> stream, std::size_t r,
                         std::uint64_t seed, std::size_t batch,
                         Executor ex = Executor::sequential()) {
  Engine engine(r, seed, ex);
  const std::size_t s = batch == 0 ? std::max<std::size_t>(1, stream.size()) : batch;
  for (std::size_t lo = 0; lo < stream.size(); lo += s)
    engine.ingest_batch(stream.subspan(lo, std::min(s, stream.size() - lo)));
  return engine;
}

}  // namespace bulktri::testing
