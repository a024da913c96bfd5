#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "coulomb2d/types.hpp"

namespace coulomb2d {

namespace detail {
// Stafford mix13 finalizer (the splitmix64 avalanche step).
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based generator: every draw is a pure function of
// (seed, chain, sweep, particle, slot). Chains can run in parallel without
// shared state, and any single draw can be replayed in isolation.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t chain)
      : key_(detail::mix64(detail::mix64(seed) + 0x9E3779B97F4A7C15ULL * (chain + 1))) {}

  uint64_t word(uint64_t sweep, uint64_t particle, uint64_t slot) const {
    uint64_t h = key_;
    h = detail::mix64(h + 0xC2B2AE3D27D4EB4FULL * (sweep + 1));
    h = detail::mix64(h + 0x165667B19E3779F9ULL * (particle + 1));
    h = detail::mix64(h + 0x27D4EB2F165667C5ULL * (slot + 1));
    return h;
  }

  // uniform in [0, 1)
  double uniform(uint64_t sweep, uint64_t particle, uint64_t slot) const {
    return static_cast<double>(word(sweep, particle, slot) >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1], safe under log()
  double uniform_pos(uint64_t sweep, uint64_t particle, uint64_t slot) const {
    return static_cast<double>((word(sweep, particle, slot) >> 11) + 1) * 0x1.0p-53;
  }

  // standard normal pair via Box-Muller; consumes slots `slot` and `slot + 1`
  std::pair<double, double> gaussian_pair(uint64_t sweep, uint64_t particle,
                                          uint64_t slot) const {
    const double u1 = uniform_pos(sweep, particle, slot);
    const double u2 = uniform(sweep, particle, slot + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
};

}  // namespace coulomb2d
