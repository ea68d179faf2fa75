#pragma once

#include <cstdint>

namespace bulktri {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class DrawTag : std::uint64_t { level1 = 1, level2 = 2, level1_skip = 3 };

// Counter-based randomness: every draw is a pure function of
// (seed, estimator, batch, tag, attempt), so the values an estimator sees do
// not depend on how work is scheduled.
class DecisionSource {
 public:
  explicit DecisionSource(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t raw(std::uint64_t estimator, std::uint64_t batch, DrawTag tag,
                    std::uint64_t attempt) const {
    std::uint64_t h = splitmix64(seed_ ^ splitmix64(estimator));
    h = splitmix64(h ^ (batch * 0xd1b54a32d192ed03ULL));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(tag) << 56) ^ attempt);
    return h;
  }

  // Uniform in (0, 1] with 53 random bits.
  double unit(std::uint64_t estimator, std::uint64_t batch, DrawTag tag,
              std::uint64_t attempt) const {
    return static_cast<double>((raw(estimator, batch, tag, attempt) >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform in [0, bound) by multiply-shift with rejection (no modulo bias).
  // bound must be positive.
  std::uint64_t uniform(std::uint64_t estimator, std::uint64_t batch,
                        DrawTag tag, std::uint64_t bound) const {
    std::uint64_t attempt = 0;
    unsigned __int128 prod =
        static_cast<unsigned __int128>(raw(estimator, batch, tag, attempt)) * bound;
    if (static_cast<std::uint64_t>(prod) < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (static_cast<std::uint64_t>(prod) < threshold) {
        ++attempt;
        prod = static_cast<unsigned __int128>(raw(estimator, batch, tag, attempt)) *
               bound;
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

 private:
  std::uint64_t seed_;
};

// Seed for trial `trial` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed ^ splitmix64(trial + 0x5851f42d4c957f2dULL));
}

}  // namespace bulktri
