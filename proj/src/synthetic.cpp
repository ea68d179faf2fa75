#include "bulktri/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace bulktri {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

std::vector<Edge> generate_gnp(std::uint64_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  if (n < 2 || p == 0.0) return edges;
  if (p == 1.0) {
    for (std::uint64_t v = 1; v < n; ++v)
      for (std::uint64_t w = 0; w < v; ++w) edges.push_back(Edge{w, v});
  } else {
    // geometric skipping over the lower triangle of the adjacency matrix
    const double log_q = std::log1p(-p);
    std::uint64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double r = rng.uniform01();
      w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
      while (w >= static_cast<std::int64_t>(v) && v < n) {
        w -= static_cast<std::int64_t>(v);
        ++v;
      }
      if (v < n) edges.push_back(Edge{static_cast<std::uint64_t>(w), v});
    }
  }
  rng.shuffle(edges);
  return edges;
}

std::vector<Edge> generate_powerlaw(std::uint64_t n, double exponent,
                                    std::uint64_t min_degree, std::uint64_t seed) {
  if (exponent <= 1.0) throw std::invalid_argument("powerlaw: exponent must exceed 1");
  if (min_degree == 0) throw std::invalid_argument("powerlaw: min degree must be positive");
  Rng rng(seed);
  if (n < 2) return {};
  const std::uint64_t max_degree = n - 1;
  std::vector<std::uint64_t> stubs;
  for (std::uint64_t x = 0; x < n; ++x) {
    // inverse-CDF sample of a continuous Pareto, floored
    const double u = rng.uniform01();
    const double k = std::floor(static_cast<double>(min_degree) *
                                std::pow(1.0 - u, -1.0 / (exponent - 1.0)));
    const std::uint64_t deg =
        k >= static_cast<double>(max_degree) ? max_degree : static_cast<std::uint64_t>(k);
    stubs.insert(stubs.end(), deg, x);
  }
  if (stubs.size() % 2) stubs.pop_back();
  rng.shuffle(stubs);

  std::vector<Edge> edges;
  edges.reserve(stubs.size() / 2);
  std::unordered_set<Edge, EdgeHash> seen;
  seen.reserve(stubs.size());
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    if (stubs[i] == stubs[i + 1]) continue;
    const Edge e = Edge::of(stubs[i], stubs[i + 1]);
    if (seen.insert(e).second) edges.push_back(e);
  }
  rng.shuffle(edges);
  return edges;
}

}  // namespace bulktri
