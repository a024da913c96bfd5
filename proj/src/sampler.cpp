#include "coulomb2d/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace coulomb2d {

namespace {

constexpr uint64_t kInitSweep = ~uint64_t{0};  // reserved counter for initialization draws
constexpr int64_t kAdaptWindow = 50;           // sweeps between step-scale updates

// log of prod_i |num_i|^2 / |den_i|^2 with exponent tracking, one final log.
class LogRatioProduct {
 public:
  void mul(double num2, double den2) {
    prod_ *= num2 / den2;
    if (prod_ > 1e150 || (prod_ > 0.0 && prod_ < 1e-150)) {
      int e = 0;
      prod_ = std::frexp(prod_, &e);
      exp2_ += e;
    }
  }
  double log_value() const {
    if (prod_ == 0.0) return -kInf;
    return std::log(prod_) + 0.6931471805599453 * static_cast<double>(exp2_);
  }

 private:
  double prod_ = 1.0;
  int64_t exp2_ = 0;
};

double norm2(Complex a) { return a.real() * a.real() + a.imag() * a.imag(); }

}  // namespace

double hamiltonian(const PotentialSpec& spec, const Configuration& config) {
  const int n = static_cast<int>(config.size());
  double energy = 0.0;
  for (const Complex& z : config) {
    const double q = spec.q(z);
    if (q == kInf) return kInf;
    energy += q;
  }
  energy *= static_cast<double>(n);
  double pair = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d2 = norm2(config[i] - config[j]);
      if (d2 == 0.0) return kInf;
      pair -= std::log(d2);  // 2 * log(1/|zi-zj|), both ordered pairs at once
    }
  }
  return energy + pair;
}

double delta_energy(const PotentialSpec& spec, const Configuration& config, int j,
                    Complex z_new) {
  const int n = static_cast<int>(config.size());
  require(j >= 0 && j < n, Errc::BadParameters, "delta_energy index out of range");
  const double q_new = spec.q(z_new);
  if (q_new == kInf) return kInf;
  const Complex z_old = config[j];
  if (z_new == z_old) return 0.0;
  double d_energy = static_cast<double>(n) * (q_new - spec.q(z_old));
  LogRatioProduct ratio;
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    const double num = norm2(z_new - config[i]);
    if (num == 0.0) return kInf;
    ratio.mul(num, norm2(z_old - config[i]));
  }
  // pair term enters as -log prod |z_new - z_i|^2/|z_old - z_i|^2
  return d_energy - ratio.log_value();
}

Configuration initial_configuration(const PotentialSpec& spec, int n, const CounterRng& rng) {
  const Droplet d = spec.droplet_numeric();
  Configuration config(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(kInitSweep, static_cast<uint64_t>(i), 0);
    const double v = rng.uniform(kInitSweep, static_cast<uint64_t>(i), 1);
    const double r = std::sqrt(d.r_in * d.r_in + u * (d.r_out * d.r_out - d.r_in * d.r_in));
    config[i] = std::polar(r, 2.0 * kPi * v);
  }
  return config;
}

void mh_step(const PotentialSpec& spec, ChainState& chain) {
  const int n = static_cast<int>(chain.config.size());
  const double scale =
      chain.step_scale / std::sqrt(static_cast<double>(n) * spec.delta());
  const uint64_t sweep = static_cast<uint64_t>(chain.sweep);
  for (int j = 0; j < n; ++j) {
    const auto [gx, gy] = chain.rng.gaussian_pair(sweep, static_cast<uint64_t>(j), 0);
    const Complex z_new = chain.config[j] + scale * Complex(gx, gy);
    const double d_h = delta_energy(spec, chain.config, j, z_new);
    ++chain.proposed;
    ++chain.window_proposed;
    bool accept = false;
    if (d_h <= 0.0) {
      accept = true;
    } else if (d_h < kInf) {
      const double u = chain.rng.uniform(sweep, static_cast<uint64_t>(j), 2);
      accept = u < std::exp(-chain.beta * d_h);
    }
    if (accept) {
      chain.config[j] = z_new;
      ++chain.accepted;
      ++chain.window_accepted;
    }
  }
  ++chain.sweep;

  if (chain.adapting && chain.sweep % kAdaptWindow == 0 && chain.window_proposed > 0) {
    const double rate = static_cast<double>(chain.window_accepted) /
                        static_cast<double>(chain.window_proposed);
    if (rate < 0.3)
      chain.step_scale = std::max(1e-3, chain.step_scale * 0.7);
    else if (rate > 0.6)
      chain.step_scale = std::min(1e3, chain.step_scale * 1.3);
    chain.window_accepted = 0;
    chain.window_proposed = 0;
  }
}

namespace {

ChainSummary run_one_chain(const PotentialSpec& spec, const SampleParams& params, int c,
                           const ConfigSink& sink) {
  ChainState chain;
  chain.beta = params.beta;
  chain.step_scale = params.step_scale;
  chain.rng = CounterRng(params.seed, static_cast<uint64_t>(c));
  chain.config = initial_configuration(spec, params.n, chain.rng);
  chain.adapting = true;

  ChainSummary summary;
  summary.chain = c;
  for (int64_t s = 0; s < params.sweeps; ++s) {
    if (s == params.burnin) chain.adapting = false;
    mh_step(spec, chain);
    if (s >= params.burnin && (s - params.burnin) % params.thin == 0) {
      if (sink) sink(s, chain.config);
      ++summary.emitted;
    }
  }
  summary.accepted = chain.accepted;
  summary.proposed = chain.proposed;
  summary.final_step_scale = chain.step_scale;
  return summary;
}

}  // namespace

std::vector<ChainSummary> run_chains(const PotentialSpec& spec, const SampleParams& params,
                                     const std::function<ConfigSink(int chain)>& make_sink) {
  require(params.n >= 1, Errc::ConfigError, "n must be >= 1");
  require(params.chains >= 1, Errc::ConfigError, "chains must be >= 1");
  require(params.sweeps > params.burnin, Errc::ConfigError, "sweeps must exceed burnin");
  require(params.burnin >= 0 && params.thin >= 1, Errc::ConfigError,
          "burnin must be >= 0 and thin >= 1");
  require(params.beta > 0.0, Errc::ConfigError, "beta must be > 0");

  std::vector<ChainSummary> summaries(params.chains);
  std::vector<ConfigSink> sinks(params.chains);
  for (int c = 0; c < params.chains; ++c) sinks[c] = make_sink ? make_sink(c) : ConfigSink{};

  int workers = params.threads > 0 ? params.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, params.chains));

  if (workers == 1) {
    for (int c = 0; c < params.chains; ++c)
      summaries[c] = run_one_chain(spec, params, c, sinks[c]);
    return summaries;
  }

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= params.chains) return;
      summaries[c] = run_one_chain(spec, params, c, sinks[c]);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return summaries;
}

std::vector<Configuration> sample_configs(const PotentialSpec& spec,
                                          const SampleParams& params) {
  std::vector<std::vector<Configuration>> per_chain(params.chains);
  run_chains(spec, params, [&](int c) -> ConfigSink {
    return [&per_chain, c](int64_t, const Configuration& cfg) {
      per_chain[c].push_back(cfg);
    };
  });
  std::vector<Configuration> all;
  for (auto& v : per_chain)
    for (auto& cfg : v) all.push_back(std::move(cfg));
  return all;
}

}  // namespace coulomb2d
