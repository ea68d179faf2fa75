#include "bulktri/rank_index.hpp"

#include <limits>
#include <string>

#include "bulktri/primitives.hpp"

namespace bulktri {

namespace {

struct SrcPos {
  VertexId src;
  BatchPos pos;
};

// src ascending, pos descending
struct SrcPosLess {
  bool operator()(const SrcPos& a, const SrcPos& b) const {
    return a.src != b.src ? a.src < b.src : a.pos > b.pos;
  }
};

struct SrcRankLess {
  bool operator()(const RankLookup& a, const RankLookup& b) const {
    return a.src != b.src ? a.src < b.src : a.rank < b.rank;
  }
};

struct EdgeLess {
  bool operator()(const Edge& a, const Edge& b) const { return a < b; }
};

void check_batch_size(std::size_t s) {
  if (s > std::numeric_limits<BatchPos>::max() - 1)
    throw std::length_error("batch of " + std::to_string(s) +
                            " edges exceeds position range");
}

}  // namespace

RankedArcs rank_all(const Executor& ex, std::span<const Edge> batch) {
  check_batch_size(batch.size());
  std::vector<std::size_t> idx(batch.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::span<const std::size_t> ids(idx);

  auto forward = par::map(ex, ids, [&](std::size_t i) {
    return Arc{batch[i].u, batch[i].v, static_cast<BatchPos>(i + 1), 0};
  });
  auto backward = par::map(ex, ids, [&](std::size_t i) {
    return Arc{batch[i].v, batch[i].u, static_cast<BatchPos>(i + 1), 0};
  });
  auto arcs = par::concat(ex, std::span<const Arc>(forward),
                          std::span<const Arc>(backward));
  par::sort_in_place(ex, arcs, [](const Arc& a, const Arc& b) {
    return a.src != b.src ? a.src < b.src : a.pos > b.pos;
  });

  // The counter restarts after the last arc of every src group.
  std::vector<std::size_t> at(arcs.size());
  for (std::size_t i = 0; i < at.size(); ++i) at[i] = i;
  const auto ticks = par::map(ex, std::span<const std::size_t>(at), [&](std::size_t i) {
    const bool last = i + 1 == arcs.size() || arcs[i + 1].src != arcs[i].src;
    return last ? par::Tick::reset : par::Tick::one;
  });
  const auto ranks = par::scan_with_resets(ex, std::span<const par::Tick>(ticks));
  auto ranked = par::combine(ex, std::span<const Arc>(arcs),
                             std::span<const std::uint64_t>(ranks),
                             [](Arc a, std::uint64_t r) {
                               a.rank = static_cast<std::uint32_t>(r);
                               return a;
                             });
  return RankedArcs(std::move(ranked));
}

std::vector<std::uint64_t> query_rank_outgoing(const Executor& ex,
                                               const RankedArcs& ranked,
                                               std::span<const RankQuery> queries) {
  const auto arcs = ranked.by_src_pos_desc();
  const auto keys =
      par::map(ex, arcs, [](const Arc& a) { return SrcPos{a.src, a.pos}; });
  const auto qkeys = par::map(ex, queries, [](const RankQuery& q) {
    return SrcPos{q.u, q.pos};
  });
  const auto hit = par::pred_eq_search(ex, std::span<const SrcPos>(keys),
                                       std::span<const SrcPos>(qkeys),
                                       SrcPosLess{});

  std::vector<std::uint64_t> out(queries.size());
  std::vector<std::uint8_t> bad(queries.size(), 0);
  parallel_for(ex, queries.size(), [&](std::size_t i) {
    const RankQuery& q = queries[i];
    const bool same_src = hit[i] != par::not_found && arcs[hit[i]].src == q.u;
    if (q.pos == stale_pos) {
      out[i] = same_src ? std::uint64_t{arcs[hit[i]].rank} + 1 : 0;
    } else if (same_src && arcs[hit[i]].pos == q.pos) {
      out[i] = arcs[hit[i]].rank;
    } else {
      bad[i] = 1;
    }
  });
  for (std::size_t i = 0; i < bad.size(); ++i) {
    if (bad[i])
      throw InconsistentState("rank query: no arc with src " +
                              std::to_string(queries[i].u) + " at position " +
                              std::to_string(queries[i].pos));
  }
  return out;
}

std::vector<BatchEdge> lookup_by_rank(const Executor& ex,
                                      const RankedArcs& ranked,
                                      std::span<const RankLookup> queries) {
  const auto arcs = ranked.by_src_rank_asc();
  const auto keys =
      par::map(ex, arcs, [](const Arc& a) { return RankLookup{a.src, a.rank}; });
  const auto hit = par::exact_search(ex, std::span<const RankLookup>(keys),
                                     queries, SrcRankLess{});
  std::vector<BatchEdge> out(queries.size());
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i] == par::not_found)
      throw InconsistentState("rank lookup: no arc with src " +
                              std::to_string(queries[i].src) + " and rank " +
                              std::to_string(queries[i].rank));
  }
  parallel_for(ex, queries.size(), [&](std::size_t i) {
    const Arc& a = arcs[hit[i]];
    out[i] = BatchEdge{Edge::of(a.src, a.dst), a.pos};
  });
  return out;
}

RankLookup substream_name(VertexId u, VertexId v, std::uint64_t rank_uv,
                          std::uint64_t phi) {
  if (phi < rank_uv) return RankLookup{u, static_cast<std::uint32_t>(phi)};
  return RankLookup{v, static_cast<std::uint32_t>(phi - rank_uv)};
}

BatchEdge substream_edge(const RankedArcs& ranked, const Edge& f1, VertexId u,
                         std::uint64_t rank_uv, std::uint64_t phi) {
  if (!f1.touches(u) || f1.empty())
    throw std::invalid_argument("substream_edge: " + std::to_string(u) +
                                " is not an endpoint of " + to_string(f1));
  const VertexId v = u == f1.u ? f1.v : f1.u;
  const RankLookup q = substream_name(u, v, rank_uv, phi);
  return lookup_by_rank(Executor::sequential(), ranked,
                        std::span<const RankLookup>(&q, 1))
      .front();
}

ClosingIndex build_closing_index(const Executor& ex, std::span<const Edge> batch) {
  check_batch_size(batch.size());
  std::vector<std::size_t> idx(batch.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto records = par::map(ex, std::span<const std::size_t>(idx), [&](std::size_t i) {
    return ClosingRecord{batch[i].u, batch[i].v, static_cast<BatchPos>(i + 1)};
  });
  par::sort_in_place(ex, records, [](const ClosingRecord& a, const ClosingRecord& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].src == records[i - 1].src && records[i].dst == records[i - 1].dst)
      throw std::invalid_argument(
          "duplicate edge " + to_string(Edge{records[i].src, records[i].dst}) +
          " at batch positions " + std::to_string(records[i - 1].pos) + " and " +
          std::to_string(records[i].pos));
  }
  return ClosingIndex(std::move(records));
}

std::vector<BatchPos> lookup_closing(const Executor& ex, const ClosingIndex& ix,
                                     std::span<const Edge> queries) {
  const auto recs = ix.records();
  const auto keys = par::map(ex, recs, [](const ClosingRecord& r) {
    return Edge{r.src, r.dst};
  });
  const auto hit = par::exact_search(ex, std::span<const Edge>(keys), queries,
                                     EdgeLess{});
  std::vector<BatchPos> out(queries.size(), stale_pos);
  parallel_for(ex, queries.size(), [&](std::size_t i) {
    if (hit[i] != par::not_found) out[i] = recs[hit[i]].pos;
  });
  return out;
}

}  // namespace bulktri
