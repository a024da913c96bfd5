#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coulomb2d/estimator.hpp"
#include "coulomb2d/potential.hpp"
#include "coulomb2d/types.hpp"

namespace coulomb2d {

struct BumpSpec {
  double x = 0.0, y = 0.0, radius = 0.5;
};

// Flat `key = value` run configuration. Defaults describe the Ginibre spec at
// desk scale; every value is validated before any compute starts.
struct RunConfig {
  std::string potential_kind = "ginibre";  // ginibre | induced | quartic | custom
  double delta = 1.0;
  double log_coef = 0.0;
  double quartic_coef = 0.0;
  double const_term = 0.0;
  double sigma_inner = 0.0;
  double sigma_outer = 2.0;
  double delta0 = 0.1;
  double eta0 = 0.5;
  double induced_s = 2.0;

  int n = 16;
  double beta = 1.0;
  int chains = 4;
  int64_t sweeps = 2000;
  int64_t burnin = 1000;
  int64_t thin = 10;
  uint64_t seed = 1;

  int grid_bins = 128;
  BBox bbox{-1.5, 1.5, -1.5, 1.5};
  int radial_bins = 400;

  std::vector<Complex> frames{Complex(1.0, 0.0)};
  std::vector<BumpSpec> bumps{{0.0, 0.0, 0.5}, {0.6, 0.0, 0.35}, {1.0, 0.0, 0.4}};

  int thermal_grid = 8193;
  double thermal_tol = 1e-5;
  int64_t thermal_max_iters = 200000;

  double overcrowd_radius = 0.0;  // 0 = microscopic default 1/sqrt(n delta)
  int threads = 0;
  bool write_samples = false;

  PotentialSpec spec() const;
};

struct ParseResult {
  RunConfig config;
  std::vector<std::string> errors;  // empty on success
  bool ok() const { return errors.empty(); }
};

// Parses flat `key = value` text with `#` comments. Unknown keys and invalid
// values are all reported, with line numbers, not just the first.
ParseResult try_parse_config(const std::string& text);

// Same, but throws ConfigError carrying every message.
RunConfig parse_config(const std::string& text);

std::string canonical_config_text(const RunConfig& cfg);

}  // namespace coulomb2d
