#include "bulktri/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace bulktri {

namespace {

inline std::uint32_t vertex_hash(VertexId x) {
  return static_cast<std::uint32_t>((x * 0x9e3779b97f4a7c15ULL) >> 32);
}

inline std::uint64_t f1_key(const Edge& e) {
  return (std::uint64_t{vertex_hash(e.u)} << 32) | vertex_hash(e.v);
}

// Hashed bitmap over the vertices of a batch. May report false positives,
// never false negatives; estimators whose vertices miss it have no batch
// neighbors and skip the multisearch queries.
class VertexFilter {
 public:
  explicit VertexFilter(std::span<const Edge> batch) {
    const std::size_t want = std::clamp<std::size_t>(batch.size() * 1024, 64, std::size_t{1} << 27);
    const std::size_t bits = std::bit_ceil(want);
    shift_ = 32 - std::countr_zero(bits);
    words_.assign(bits / 64, 0);
    for (const Edge& e : batch) {
      set(vertex_hash(e.u));
      set(vertex_hash(e.v));
    }
  }

  bool maybe_hash(std::uint32_t h) const {
    const std::uint32_t b = shift_ == 32 ? 0 : h >> shift_;
    return (words_[b >> 6] >> (b & 63)) & 1;
  }
  bool maybe(VertexId x) const { return maybe_hash(vertex_hash(x)); }
  bool maybe_either(std::uint64_t key) const {
    return maybe_hash(static_cast<std::uint32_t>(key >> 32)) ||
           maybe_hash(static_cast<std::uint32_t>(key));
  }

 private:
  void set(std::uint32_t h) {
    const std::uint32_t b = shift_ == 32 ? 0 : h >> shift_;
    words_[b >> 6] |= std::uint64_t{1} << (b & 63);
  }

  std::vector<std::uint64_t> words_;
  int shift_ = 0;
};

void validate_batch(std::span<const Edge> batch) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Edge& e = batch[i];
    if (e.u == e.v)
      throw std::invalid_argument("batch position " + std::to_string(i + 1) +
                                  ": self-loop on vertex " + std::to_string(e.u));
    if (e.u > e.v)
      throw std::invalid_argument("batch position " + std::to_string(i + 1) +
                                  ": edge " + std::to_string(e.u) + "-" +
                                  std::to_string(e.v) + " not normalized");
  }
}

}  // namespace

Engine::Engine(std::size_t estimators, std::uint64_t seed, Executor ex)
    : estimators_(estimators), f1_keys_(estimators, 0), rng_(seed), ex_(ex) {
  if (estimators == 0)
    throw std::invalid_argument("engine needs at least one estimator");
}

void Engine::ingest_batch(std::span<const Edge> batch) {
  validate_batch(batch);
  const std::uint64_t batch_id = state_.batches_seen;
  if (batch.empty()) {
    ++state_.batches_seen;
    return;
  }
  // Both structures are built (and the batch fully validated) before any
  // estimator is touched.
  const ClosingIndex closing = build_closing_index(ex_, batch);
  const RankedArcs ranked = rank_all(ex_, batch);
  const VertexFilter filter(batch);

  const auto fresh_f1 = update_level1(batch, batch_id);

  // Only estimators with an f1 endpoint in the batch can gain neighbors or a
  // closing edge (the closing edge shares an endpoint with f1).
  const auto touched = par::pack_index(ex_, estimators_.size(), [&](std::size_t i) {
    return filter.maybe_either(f1_keys_[i]);
  });
  const auto fresh_f2 = update_level2(touched, ranked, batch_id);

  const auto closing_cands = par::pack_index(ex_, touched.size(), [&](std::size_t k) {
    const Estimator& e = estimators_[touched[k]];
    if (e.f2.empty() || !e.f3.empty()) return false;
    const Edge c = closing_edge(e.f1, e.f2);
    return filter.maybe(c.u) && filter.maybe(c.v);
  });
  const auto closing_ids = par::map(ex_, std::span<const std::size_t>(closing_cands),
                                    [&](std::size_t k) { return touched[k]; });
  update_closing(closing_ids, closing);

  parallel_for(ex_, fresh_f1.size(),
               [&](std::size_t k) { estimators_[fresh_f1[k]].f1_pos = stale_pos; });
  parallel_for(ex_, fresh_f2.size(),
               [&](std::size_t k) { estimators_[fresh_f2[k]].f2_pos = stale_pos; });

  state_.m_seen += batch.size();
  ++state_.batches_seen;
}

// Each estimator replaces f1 with probability s / (m + s), independently;
// replaced estimators are found by geometric skipping inside fixed blocks and
// then draw a uniform batch position.
std::vector<std::size_t> Engine::update_level1(std::span<const Edge> batch,
                                               std::uint64_t batch_id) {
  const std::uint64_t m = state_.m_seen;
  const std::uint64_t s = batch.size();
  const std::size_t r = estimators_.size();
  const std::size_t blocks = (r + level1_block - 1) / level1_block;
  const double p = static_cast<double>(s) / static_cast<double>(m + s);
  const double log_q = std::log1p(-p);

  std::vector<std::vector<std::size_t>> hits(blocks);
  parallel_tasks(ex_, blocks, [&](std::size_t b) {
    const std::size_t lo = b * level1_block;
    const std::size_t hi = std::min(r, lo + level1_block);
    auto& out = hits[b];
    if (m == 0) {
      for (std::size_t i = lo; i < hi; ++i) out.push_back(i);
      return;
    }
    std::uint64_t attempt = 0;
    std::size_t i = lo;
    while (true) {
      const double gap =
          std::floor(std::log(rng_.unit(b, batch_id, DrawTag::level1_skip, attempt++)) / log_q);
      if (gap >= static_cast<double>(hi - i)) break;
      i += static_cast<std::size_t>(gap);
      out.push_back(i++);
      if (i >= hi) break;
    }
  });

  std::vector<std::size_t> counts(blocks);
  for (std::size_t b = 0; b < blocks; ++b) counts[b] = hits[b].size();
  const auto offsets = par::scan(Executor::sequential(), std::span<const std::size_t>(counts),
                                 std::plus<>{}, std::size_t{0});
  std::vector<std::size_t> replaced(blocks ? offsets.back() + counts.back() : 0);
  parallel_tasks(ex_, blocks, [&](std::size_t b) {
    std::copy(hits[b].begin(), hits[b].end(), replaced.begin() + offsets[b]);
  });

  const auto idx = par::map(ex_, std::span<const std::size_t>(replaced), [&](std::size_t i) {
    return level1_replacement(m + rng_.uniform(i, batch_id, DrawTag::level1, s), m);
  });
  const auto picked = par::extract(ex_, batch, std::span<const par::Index>(idx));
  parallel_for(ex_, replaced.size(), [&](std::size_t k) {
    Estimator& e = estimators_[replaced[k]];
    e = Estimator{};
    e.f1 = *picked[k];
    e.f1_pos = static_cast<BatchPos>(idx[k]);
    f1_keys_[replaced[k]] = f1_key(e.f1);
  });
  return replaced;
}

std::vector<std::size_t> Engine::update_level2(
    std::span<const std::size_t> candidates,
    const RankedArcs& ranked, std::uint64_t batch_id) {
  const auto ld_q = par::map(ex_, candidates, [&](std::size_t i) {
    const Estimator& e = estimators_[i];
    return RankQuery{e.f1.u, e.f1_pos};
  });
  const auto rd_q = par::map(ex_, candidates, [&](std::size_t i) {
    const Estimator& e = estimators_[i];
    return RankQuery{e.f1.v, e.f1_pos};
  });
  const auto ld = query_rank_outgoing(ex_, ranked, ld_q);
  const auto rd = query_rank_outgoing(ex_, ranked, rd_q);

  // One draw x in [0, chi- + chi+) per estimator: x >= chi- replaces f2 and
  // x - chi- names the new level-2 edge.
  constexpr std::uint64_t keep = static_cast<std::uint64_t>(-1);
  std::vector<std::uint64_t> phi(candidates.size(), keep);
  parallel_for(ex_, candidates.size(), [&](std::size_t k) {
    const std::size_t i = candidates[k];
    const std::uint64_t minus = estimators_[i].chi;
    const std::uint64_t plus = ld[k] + rd[k];
    if (plus == 0) return;
    const std::uint64_t x = rng_.uniform(i, batch_id, DrawTag::level2, minus + plus);
    if (x >= minus) phi[k] = x - minus;
  });

  const auto replacing = par::pack_index(
      ex_, candidates.size(), [&](std::size_t k) { return phi[k] != keep; });
  const auto names = par::map(ex_, std::span<const std::size_t>(replacing),
                              [&](std::size_t k) {
                                const Estimator& e = estimators_[candidates[k]];
                                return substream_name(e.f1.u, e.f1.v, ld[k], phi[k]);
                              });
  const auto hits = lookup_by_rank(ex_, ranked, names);

  parallel_for(ex_, candidates.size(), [&](std::size_t k) {
    estimators_[candidates[k]].chi += ld[k] + rd[k];
  });
  std::vector<std::size_t> replaced(replacing.size());
  parallel_for(ex_, replacing.size(), [&](std::size_t j) {
    const std::size_t i = candidates[replacing[j]];
    Estimator& e = estimators_[i];
    e.f2 = hits[j].edge;
    e.f2_pos = hits[j].pos;
    e.f3 = Edge{};
    replaced[j] = i;
  });
  return replaced;
}

void Engine::update_closing(std::span<const std::size_t> candidates,
                            const ClosingIndex& index) {
  const auto open = par::pack_index(ex_, candidates.size(), [&](std::size_t k) {
    const Estimator& e = estimators_[candidates[k]];
    return !e.f2.empty() && e.f3.empty();
  });
  const auto wanted = par::map(ex_, std::span<const std::size_t>(open),
                               [&](std::size_t k) {
                                 const Estimator& e = estimators_[candidates[k]];
                                 return closing_edge(e.f1, e.f2);
                               });
  const auto found = lookup_closing(ex_, index, wanted);
  parallel_for(ex_, open.size(), [&](std::size_t j) {
    Estimator& e = estimators_[candidates[open[j]]];
    const BatchPos pos = found[j];
    if (pos == stale_pos) return;
    if (e.f2_pos == stale_pos || pos > e.f2_pos) e.f3 = wanted[j];
  });
}

}  // namespace bulktri
