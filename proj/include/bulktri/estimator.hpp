#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>

namespace bulktri {

using VertexId = std::uint64_t;

// Batch-local 1-based position of an edge; 0 means "arrived in an earlier
// batch" (stale).
using BatchPos = std::uint32_t;
inline constexpr BatchPos stale_pos = 0;

// Undirected edge stored with u < v. A default-constructed Edge (0, 0) is the
// empty edge; it can never be a real edge because self-loops are rejected.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  // Normalizes the endpoint order; throws std::invalid_argument on a
  // self-loop.
  static Edge of(VertexId a, VertexId b);

  bool empty() const { return u == v; }
  bool touches(VertexId x) const { return x == u || x == v; }
  bool adjacent(const Edge& o) const {
    return touches(o.u) || touches(o.v);
  }

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

std::ostream& operator<<(std::ostream& os, const Edge& e);
std::string to_string(const Edge& e);

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    std::uint64_t h = e.u * 0x9e3779b97f4a7c15ULL ^ (e.v + 0x632be59bd9b4e019ULL);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Third edge of the wedge f1, f2 (which must share exactly one endpoint).
Edge closing_edge(const Edge& f1, const Edge& f2);

// One neighborhood-sampling estimator: level-1 edge, level-2 edge, closing
// edge and chi = number of edges adjacent to f1 that arrived after it.
struct Estimator {
  Edge f1;
  Edge f2;
  Edge f3;
  std::uint64_t chi = 0;
  BatchPos f1_pos = stale_pos;
  BatchPos f2_pos = stale_pos;

  friend bool operator==(const Estimator&, const Estimator&) = default;
};

struct StreamState {
  std::uint64_t m_seen = 0;
  std::uint64_t batches_seen = 0;

  friend bool operator==(const StreamState&, const StreamState&) = default;
};

inline Estimator new_estimator() { return Estimator{}; }

// 0 when no closing edge has been found, chi * m otherwise.
inline double coarse_estimate(const Estimator& e, std::uint64_t m) {
  if (e.f3.empty()) return 0.0;
  return static_cast<double>(e.chi) * static_cast<double>(m);
}

class OrderedGraph;

struct NbsiCheck {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

// Checks the deterministic clauses of the sampling invariant against a
// stream: chi equals the later-neighborhood size of f1, f2 is one of those
// neighbors, and f3 is exactly the closing edge when it arrives after f2.
NbsiCheck validate_nbsi(const Estimator& e, std::span<const Edge> stream);

// Same check against the first `prefix` edges of an indexed graph.
NbsiCheck validate_nbsi(const Estimator& e, const OrderedGraph& g,
                        std::size_t prefix);

}  // namespace bulktri
