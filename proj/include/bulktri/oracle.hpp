#pragma once

// Brute-force ground truth for tests and accuracy reports. Everything here
// holds the whole graph in memory; intended for graphs up to ~10^7 edges.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bulktri/estimator.hpp"

namespace bulktri {

using Triangle = std::array<VertexId, 3>;

// An edge sequence whose order defines the stream order. Rejects duplicate
// edges; edges are expected to be normalized (u < v).
class OrderedGraph {
 public:
  explicit OrderedGraph(std::vector<Edge> edges);

  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

  // 0-based stream position.
  std::optional<std::size_t> position(const Edge& e) const;

  // Incident edges with stream position in (position(f), prefix).
  std::size_t later_degree(std::size_t pos, std::size_t prefix) const;

  std::size_t degree(VertexId x) const;
  std::size_t max_degree() const;

 private:
  struct Incidence {
    std::size_t pos;
    VertexId other;
  };
  std::size_t count_after(VertexId x, std::size_t pos, std::size_t prefix) const;

  std::vector<Edge> edges_;
  std::unordered_map<Edge, std::size_t, EdgeHash> index_;
  std::unordered_map<VertexId, std::vector<Incidence>> incidence_;
};

std::uint64_t exact_triangle_count(std::span<const Edge> edges);
inline std::uint64_t exact_triangle_count(const OrderedGraph& g) {
  return exact_triangle_count(g.edges());
}

// Every triangle once, vertices ascending, triangles in lexicographic order.
std::vector<Triangle> enumerate_triangles(std::span<const Edge> edges);

// Edges sharing an endpoint with f that arrive strictly after it.
// Throws std::out_of_range if f is not in g.
std::vector<Edge> neighborhood_after(const OrderedGraph& g, const Edge& f);

// Size of the later neighborhood of the triangle's earliest edge.
// Throws std::invalid_argument if t is not a triangle of g.
std::size_t triangle_c(const OrderedGraph& g, const Triangle& t);

}  // namespace bulktri
