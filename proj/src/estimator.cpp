#include "bulktri/estimator.hpp"

#include <stdexcept>
#include <vector>

#include "bulktri/oracle.hpp"

namespace bulktri {

Edge Edge::of(VertexId a, VertexId b) {
  if (a == b)
    throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

std::ostream& operator<<(std::ostream& os, const Edge& e) {
  if (e.empty()) return os << "{}";
  return os << '{' << e.u << ',' << e.v << '}';
}

std::string to_string(const Edge& e) {
  if (e.empty()) return "{}";
  return '{' + std::to_string(e.u) + ',' + std::to_string(e.v) + '}';
}

Edge closing_edge(const Edge& f1, const Edge& f2) {
  // shared endpoint is dropped from both
  const VertexId a = f2.touches(f1.u) ? f1.v : f1.u;
  const VertexId b = f1.touches(f2.u) ? f2.v : f2.u;
  return Edge::of(a, b);
}

namespace {

NbsiCheck fail(std::string msg) { return NbsiCheck{false, std::move(msg)}; }

}  // namespace

NbsiCheck validate_nbsi(const Estimator& e, const OrderedGraph& g,
                        std::size_t prefix) {
  if (e.f1.empty()) {
    if (prefix > 0) return fail("f1 empty on a non-empty stream");
    if (e.chi != 0) return fail("chi != 0 with empty f1");
    if (!e.f2.empty() || !e.f3.empty()) return fail("f2/f3 set with empty f1");
    return {};
  }
  const auto p1 = g.position(e.f1);
  if (!p1 || *p1 >= prefix)
    return fail("f1 " + to_string(e.f1) + " not in stream");

  const std::size_t later = g.later_degree(*p1, prefix);
  if (e.chi != later)
    return fail("chi = " + std::to_string(e.chi) + " but f1 " +
                to_string(e.f1) + " has " + std::to_string(later) +
                " later neighbors");

  if (e.f2.empty()) {
    if (later != 0) return fail("f2 empty but neighborhood of f1 non-empty");
    if (!e.f3.empty()) return fail("f3 set with empty f2");
    return {};
  }
  const auto p2 = g.position(e.f2);
  if (!p2 || *p2 >= prefix)
    return fail("f2 " + to_string(e.f2) + " not in stream");
  if (*p2 <= *p1 || !e.f2.adjacent(e.f1) || e.f2 == e.f1)
    return fail("f2 " + to_string(e.f2) + " not a later neighbor of f1 " +
                to_string(e.f1));

  const Edge close = closing_edge(e.f1, e.f2);
  const auto p3 = g.position(close);
  const bool closed = p3 && *p3 > *p2 && *p3 < prefix;
  if (closed && e.f3 != close)
    return fail("closing edge " + to_string(close) + " arrived after f2 but f3 = " +
                to_string(e.f3));
  if (!closed && !e.f3.empty())
    return fail("f3 = " + to_string(e.f3) + " but no closing edge after f2");
  return {};
}

NbsiCheck validate_nbsi(const Estimator& e, std::span<const Edge> stream) {
  OrderedGraph g(std::vector<Edge>(stream.begin(), stream.end()));
  return validate_nbsi(e, g, g.size());
}

}  // namespace bulktri
