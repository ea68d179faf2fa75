#pragma once

#include <cstdint>
#include <vector>

#include "bulktri/estimator.hpp"

namespace bulktri {

// Erdos-Renyi G(n, p) on vertices 0..n-1, edges in a seeded random order.
std::vector<Edge> generate_gnp(std::uint64_t n, double p, std::uint64_t seed);

// Erased configuration model: degrees drawn from a discrete power law
// P(k) ~ k^-exponent on [min_degree, n - 1], stubs paired at random,
// self-loops and repeated pairs dropped. Edges in a seeded random order.
std::vector<Edge> generate_powerlaw(std::uint64_t n, double exponent,
                                    std::uint64_t min_degree, std::uint64_t seed);

}  // namespace bulktri
