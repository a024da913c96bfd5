#pragma once

#include <string>

#include "coulomb2d/config.hpp"

namespace coulomb2d {

struct CliOptions {
  std::string out_dir = ".";
  int threads = 0;
  bool have_seed_override = false;
  uint64_t seed_override = 0;
};

// Runs one subcommand against a parsed config. Writes CSV/JSON artifacts and a
// run manifest into out_dir. Returns 0 on success, 1 on an assertion failure,
// 2 on a configuration error.
int dispatch(const std::string& subcommand, RunConfig cfg, const CliOptions& opt);

const std::vector<std::string>& subcommands();

}  // namespace coulomb2d
