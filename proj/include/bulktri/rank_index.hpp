#pragma once

// Per-batch rank structure and closing-edge index.
//
// For a batch W = <w_1, ..., w_s> and an ordered pair x -> y, rank(x -> y) is
// the number of later batch edges incident on x when {x, y} = w_i, and the
// batch degree of x otherwise. Both structures are rebuilt for every batch
// and are immutable afterwards.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bulktri/estimator.hpp"
#include "bulktri/parallel.hpp"

namespace bulktri {

class InconsistentState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Arc {
  VertexId src = 0;
  VertexId dst = 0;
  BatchPos pos = 0;
  std::uint32_t rank = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// The 2|W| oriented arcs of a batch. A single array serves both views:
// sorted by (src asc, pos desc) it is also sorted by (src asc, rank asc).
class RankedArcs {
 public:
  RankedArcs() = default;
  explicit RankedArcs(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {}

  std::span<const Arc> by_src_pos_desc() const { return arcs_; }
  std::span<const Arc> by_src_rank_asc() const { return arcs_; }
  std::size_t size() const { return arcs_.size(); }

 private:
  std::vector<Arc> arcs_;
};

RankedArcs rank_all(const Executor& ex, std::span<const Edge> batch);

// Q1: (u, pos) with pos a batch position asks for rank(u -> v) of the batch
// edge at pos; pos == stale_pos asks for the batch degree of u.
struct RankQuery {
  VertexId u = 0;
  BatchPos pos = stale_pos;
};

std::vector<std::uint64_t> query_rank_outgoing(const Executor& ex,
                                               const RankedArcs& ranked,
                                               std::span<const RankQuery> queries);

// Q2: the arc with the given src and exactly the given rank.
struct RankLookup {
  VertexId src = 0;
  std::uint32_t rank = 0;
};

struct BatchEdge {
  Edge edge;
  BatchPos pos = stale_pos;

  friend bool operator==(const BatchEdge&, const BatchEdge&) = default;
};

std::vector<BatchEdge> lookup_by_rank(const Executor& ex,
                                      const RankedArcs& ranked,
                                      std::span<const RankLookup> queries);

// Names the later neighbors of f1 = {u, v} by phi in [0, rank(u->v) +
// rank(v->u)): phi < rank(u->v) is the arc from u with rank phi, otherwise
// the arc from v with rank phi - rank(u->v).
RankLookup substream_name(VertexId u, VertexId v, std::uint64_t rank_uv,
                          std::uint64_t phi);

BatchEdge substream_edge(const RankedArcs& ranked, const Edge& f1, VertexId u,
                         std::uint64_t rank_uv, std::uint64_t phi);

struct ClosingRecord {
  VertexId src = 0;
  VertexId dst = 0;
  BatchPos pos = 0;
};

class ClosingIndex {
 public:
  ClosingIndex() = default;
  explicit ClosingIndex(std::vector<ClosingRecord> records)
      : records_(std::move(records)) {}

  std::span<const ClosingRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<ClosingRecord> records_;
};

// Throws std::invalid_argument if the batch holds the same edge twice.
ClosingIndex build_closing_index(const Executor& ex, std::span<const Edge> batch);

// Batch position of each (normalized) query edge, stale_pos if absent.
std::vector<BatchPos> lookup_closing(const Executor& ex, const ClosingIndex& ix,
                                     std::span<const Edge> queries);

}  // namespace bulktri
