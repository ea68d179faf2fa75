#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bulktri/estimator.hpp"
#include "bulktri/parallel.hpp"
#include "bulktri/primitives.hpp"
#include "bulktri/random.hpp"
#include "bulktri/rank_index.hpp"

namespace bulktri {

// Level-1 reservoir decision for a draw d uniform in [0, m + s): replace f1
// with the batch edge at the returned 1-based position, or keep it (null).
inline par::Index level1_replacement(std::uint64_t d, std::uint64_t m) {
  return d >= m ? d - m + 1 : par::null_index;
}

// Estimators per level-1 sampling block. Fixed so that results do not depend
// on the executor.
inline constexpr std::size_t level1_block = 4096;

// r independent neighborhood-sampling estimators updated one batch at a
// time. After every ingest_batch each estimator satisfies the sampling
// invariant with respect to the concatenation of all batches seen so far.
//
// ingest_batch needs exclusive access; reads between batches are safe.
class Engine {
 public:
  Engine(std::size_t estimators, std::uint64_t seed,
         Executor ex = Executor::hardware());

  // Edges must be normalized (u < v) and distinct within the batch. Throws
  // std::invalid_argument before any state changes otherwise.
  void ingest_batch(std::span<const Edge> batch);

  std::span<const Estimator> estimators() const { return estimators_; }
  const StreamState& state() const { return state_; }
  std::uint64_t seed() const { return rng_.seed(); }

  const Executor& executor() const { return ex_; }
  void set_executor(Executor ex) { ex_ = ex; }

 private:
  // Returns the estimators whose f1 was replaced.
  std::vector<std::size_t> update_level1(std::span<const Edge> batch,
                                         std::uint64_t batch_id);
  // Returns the estimators whose f2 was replaced.
  std::vector<std::size_t> update_level2(std::span<const std::size_t> candidates,
                                         const RankedArcs& ranked,
                                         std::uint64_t batch_id);
  void update_closing(std::span<const std::size_t> candidates,
                      const ClosingIndex& index);

  std::vector<Estimator> estimators_;
  // Hashed f1 endpoints (two 32-bit halves) for the batch-vertex filter.
  std::vector<std::uint64_t> f1_keys_;
  StreamState state_;
  DecisionSource rng_;
  Executor ex_;
};

}  // namespace bulktri
