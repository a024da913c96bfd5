#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coulomb2d {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double elapsed_s = 0.0;
};

struct Scorecard {
  std::vector<CriterionResult> results;
  int passed() const {
    int k = 0;
    for (const auto& r : results) k += r.pass;
    return k;
  }
  bool all_pass() const { return passed() == static_cast<int>(results.size()); }
  std::string to_json() const;
};

struct AcceptanceOptions {
  uint64_t seed = 20250810;
  int threads = 0;
  bool verbose = true;  // one [PASS]/[FAIL] line per criterion on stdout
  // Subset selection; empty = all 13.
  std::vector<int> only;
};

Scorecard run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace coulomb2d
