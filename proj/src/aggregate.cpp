#include "bulktri/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bulktri/primitives.hpp"

namespace bulktri {

std::size_t default_group_count(std::size_t r, double delta) {
  const double g = std::ceil(8.0 * std::log(1.0 / delta));
  const std::size_t groups = g < 1.0 ? 1 : static_cast<std::size_t>(g);
  return std::max<std::size_t>(1, std::min(r, groups));
}

std::vector<double> group_means(const Executor& ex,
                                std::span<const Estimator> estimators,
                                std::uint64_t m, std::size_t groups) {
  const std::size_t r = estimators.size();
  if (r == 0) throw UndefinedEstimate("aggregate of zero estimators");
  if (groups == 0 || groups > r)
    throw std::invalid_argument("group count " + std::to_string(groups) +
                                " outside [1, " + std::to_string(r) + "]");

  // Sum chi over closed estimators exactly; m is applied once per group.
  const auto closed_chi = par::map(ex, estimators, [](const Estimator& e) {
    return e.f3.empty() ? std::uint64_t{0} : e.chi;
  });
  const auto prefix = par::scan(ex, std::span<const std::uint64_t>(closed_chi),
                                std::plus<>{}, std::uint64_t{0});
  const std::uint64_t total = r ? prefix.back() + closed_chi.back() : 0;
  auto prefix_at = [&](std::size_t i) { return i == r ? total : prefix[i]; };

  std::vector<double> means(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * r / groups;
    const std::size_t hi = (g + 1) * r / groups;
    const std::uint64_t sum = prefix_at(hi) - prefix_at(lo);
    means[g] = static_cast<double>(sum) * static_cast<double>(m) /
               static_cast<double>(hi - lo);
  }
  return means;
}

double aggregate_estimate(const Executor& ex, std::span<const Estimator> estimators,
                          std::uint64_t m, const AggregateConfig& cfg) {
  auto means = group_means(ex, estimators, m, cfg.groups);
  par::sort_in_place(ex, means, std::less<>{});
  return means[(means.size() - 1) / 2];
}

double mean_coarse_estimate(std::span<const Estimator> estimators, std::uint64_t m) {
  if (estimators.empty()) throw UndefinedEstimate("mean of zero estimators");
  std::uint64_t sum = 0;
  for (const Estimator& e : estimators)
    if (!e.f3.empty()) sum += e.chi;
  return static_cast<double>(sum) * static_cast<double>(m) /
         static_cast<double>(estimators.size());
}

std::uint64_t required_estimators(double epsilon, double delta, std::uint64_t m,
                                  std::uint64_t max_degree,
                                  std::uint64_t tau_lower_bound) {
  if (tau_lower_bound == 0)
    throw std::domain_error("required_estimators: triangle lower bound is 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("delta must lie in (0, 1]");
  if (m == 0 || max_degree == 0)
    throw std::invalid_argument("m and max degree must be positive");

  const long double ratio = static_cast<long double>(m) *
                            static_cast<long double>(max_degree) /
                            static_cast<long double>(tau_lower_bound);
  const long double log_term = std::log(1.0L / static_cast<long double>(delta));
  const long double bound =
      96.0L / (static_cast<long double>(epsilon) * epsilon) * ratio * log_term;
  // Absorb rounding noise from ln(1/delta) before taking the ceiling.
  const long double r = std::ceil(bound * (1.0L - 1e-12L));
  return r < 1.0L ? 1 : static_cast<std::uint64_t>(r);
}

}  // namespace bulktri
