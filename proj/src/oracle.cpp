#include "bulktri/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace bulktri {

OrderedGraph::OrderedGraph(std::vector<Edge> edges) : edges_(std::move(edges)) {
  index_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.u >= e.v)
      throw std::invalid_argument("OrderedGraph: edge " + to_string(e) +
                                  " is not normalized");
    if (!index_.emplace(e, i).second)
      throw std::invalid_argument("OrderedGraph: duplicate edge " +
                                  to_string(e));
    incidence_[e.u].push_back({i, e.v});
    incidence_[e.v].push_back({i, e.u});
  }
}

std::optional<std::size_t> OrderedGraph::position(const Edge& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t OrderedGraph::count_after(VertexId x, std::size_t pos,
                                      std::size_t prefix) const {
  auto it = incidence_.find(x);
  if (it == incidence_.end()) return 0;
  const auto& inc = it->second;
  auto by_pos = [](const Incidence& a, std::size_t p) { return a.pos < p; };
  auto lo = std::lower_bound(inc.begin(), inc.end(), pos + 1, by_pos);
  auto hi = std::lower_bound(inc.begin(), inc.end(), prefix, by_pos);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

std::size_t OrderedGraph::later_degree(std::size_t pos, std::size_t prefix) const {
  const Edge& f = edges_.at(pos);
  return count_after(f.u, pos, prefix) + count_after(f.v, pos, prefix);
}

std::size_t OrderedGraph::degree(VertexId x) const {
  auto it = incidence_.find(x);
  return it == incidence_.end() ? 0 : it->second.size();
}

std::size_t OrderedGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto& [x, inc] : incidence_) best = std::max(best, inc.size());
  return best;
}

namespace {

// Adjacency oriented from lower to higher (degree, id) rank, sorted, so each
// triangle is found exactly once by intersecting out-lists.
std::vector<std::vector<std::uint32_t>> oriented_adjacency(
    std::span<const Edge> edges, std::vector<VertexId>& ids) {
  ids.clear();
  ids.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](VertexId x) {
    return static_cast<std::uint32_t>(
        std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<std::uint32_t> deg(ids.size(), 0);
  for (const Edge& e : edges) {
    ++deg[dense(e.u)];
    ++deg[dense(e.v)];
  }
  auto before = [&](std::uint32_t a, std::uint32_t b) {
    return deg[a] != deg[b] ? deg[a] < deg[b] : a < b;
  };
  std::vector<std::vector<std::uint32_t>> out(ids.size());
  for (const Edge& e : edges) {
    const std::uint32_t a = dense(e.u);
    const std::uint32_t b = dense(e.v);
    if (before(a, b))
      out[a].push_back(b);
    else
      out[b].push_back(a);
  }
  for (auto& l : out) std::sort(l.begin(), l.end());
  return out;
}

}  // namespace

std::uint64_t exact_triangle_count(std::span<const Edge> edges) {
  std::vector<VertexId> ids;
  const auto adj = oriented_adjacency(edges, ids);
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < adj.size(); ++a) {
    for (std::uint32_t b : adj[a]) {
      const auto& la = adj[a];
      const auto& lb = adj[b];
      auto i = la.begin();
      auto j = lb.begin();
      while (i != la.end() && j != lb.end()) {
        if (*i < *j) {
          ++i;
        } else if (*j < *i) {
          ++j;
        } else {
          ++total;
          ++i;
          ++j;
        }
      }
    }
  }
  return total;
}

std::vector<Triangle> enumerate_triangles(std::span<const Edge> edges) {
  std::vector<VertexId> ids;
  const auto adj = oriented_adjacency(edges, ids);
  std::vector<Triangle> out;
  for (std::size_t a = 0; a < adj.size(); ++a) {
    for (std::uint32_t b : adj[a]) {
      std::vector<std::uint32_t> common;
      std::set_intersection(adj[a].begin(), adj[a].end(), adj[b].begin(),
                            adj[b].end(), std::back_inserter(common));
      for (std::uint32_t c : common) {
        Triangle t{ids[a], ids[b], ids[c]};
        std::sort(t.begin(), t.end());
        out.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> neighborhood_after(const OrderedGraph& g, const Edge& f) {
  const auto pos = g.position(f);
  if (!pos)
    throw std::out_of_range("neighborhood_after: edge " + to_string(f) +
                            " not in graph");
  std::vector<Edge> out;
  const auto edges = g.edges();
  for (std::size_t i = *pos + 1; i < edges.size(); ++i)
    if (edges[i].adjacent(f)) out.push_back(edges[i]);
  return out;
}

std::size_t triangle_c(const OrderedGraph& g, const Triangle& t) {
  std::size_t first = static_cast<std::size_t>(-1);
  for (int i = 0; i < 3; ++i) {
    const Edge e = Edge::of(t[i], t[(i + 1) % 3]);
    const auto pos = g.position(e);
    if (!pos)
      throw std::invalid_argument("triangle_c: edge " + to_string(e) +
                                  " missing, not a triangle");
    first = std::min(first, *pos);
  }
  return g.later_degree(first, g.size());
}

}  // namespace bulktri
