#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bulktri/estimator.hpp"
#include "bulktri/parallel.hpp"

namespace bulktri {

class UndefinedEstimate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AggregateConfig {
  std::size_t groups = 1;
  double epsilon = 1.0;
  double delta = 0.1;
};

// min(r, max(1, ceil(8 ln(1/delta)))).
std::size_t default_group_count(std::size_t r, double delta);

// Mean of coarse estimates in each of `groups` contiguous index ranges
// (sizes differ by at most one).
std::vector<double> group_means(const Executor& ex,
                                std::span<const Estimator> estimators,
                                std::uint64_t m, std::size_t groups);

// Median (lower median for an even count) of the group means.
double aggregate_estimate(const Executor& ex, std::span<const Estimator> estimators,
                          std::uint64_t m, const AggregateConfig& cfg);

// Plain mean of all coarse estimates.
double mean_coarse_estimate(std::span<const Estimator> estimators, std::uint64_t m);

// ceil(96 / eps^2 * m * max_degree / tau * ln(1/delta)), at least 1.
std::uint64_t required_estimators(double epsilon, double delta, std::uint64_t m,
                                  std::uint64_t max_degree,
                                  std::uint64_t tau_lower_bound);

}  // namespace bulktri
