#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "coulomb2d/potential.hpp"
#include "coulomb2d/rng.hpp"
#include "coulomb2d/types.hpp"

namespace coulomb2d {

using Configuration = std::vector<Complex>;

struct ChainState {
  Configuration config;
  double beta = 1.0;
  double step_scale = 1.0;  // proposal scale in units of 1/sqrt(n*delta)
  CounterRng rng{0, 0};
  int64_t sweep = 0;
  int64_t accepted = 0;
  int64_t proposed = 0;
  bool adapting = false;  // step scale moves only during burn-in
  int64_t window_accepted = 0;
  int64_t window_proposed = 0;

  double acceptance_rate() const {
    return proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
};

struct SampleParams {
  int n = 16;
  double beta = 1.0;
  int chains = 4;
  int64_t sweeps = 2000;  // total sweeps per chain, burn-in included
  int64_t burnin = 1000;
  int64_t thin = 10;
  uint64_t seed = 1;
  double step_scale = 1.0;
  int threads = 0;  // 0 = hardware concurrency
};

// Full Hamiltonian: sum_{i != j} log 1/|z_i - z_j| + n sum_i Q(z_i), ordered
// pairs (each unordered pair counted twice). +inf for a point outside the
// wall or a coincident pair.
double hamiltonian(const PotentialSpec& spec, const Configuration& config);

// H(config with z_j -> z_new) - H(config), in O(n).
double delta_energy(const PotentialSpec& spec, const Configuration& config, int j,
                    Complex z_new);

// Uniform draw from the droplet annulus.
Configuration initial_configuration(const PotentialSpec& spec, int n, const CounterRng& rng);

// One sweep: n single-particle Gaussian proposals at scale
// step_scale/sqrt(n*delta), each accepted with probability min(1, e^{-beta dH}).
void mh_step(const PotentialSpec& spec, ChainState& chain);

struct ChainSummary {
  int chain = 0;
  int64_t accepted = 0;
  int64_t proposed = 0;
  double final_step_scale = 1.0;
  int64_t emitted = 0;
};

// Per-chain consumer of retained configurations; called on the worker that
// owns the chain, in sweep order.
using ConfigSink = std::function<void(int64_t sweep, const Configuration&)>;

// Runs `chains` independent chains with derived per-chain streams. Burn-in
// sweeps adapt the step scale toward acceptance in [0.3, 0.6] and are
// discarded; afterwards every `thin`-th sweep is emitted. Deterministic for a
// fixed seed regardless of thread count.
std::vector<ChainSummary> run_chains(const PotentialSpec& spec, const SampleParams& params,
                                     const std::function<ConfigSink(int chain)>& make_sink);

// Convenience wrapper that materializes every retained configuration,
// ordered by (chain, sweep). Only for desk-scale runs.
std::vector<Configuration> sample_configs(const PotentialSpec& spec,
                                          const SampleParams& params);

}  // namespace coulomb2d
