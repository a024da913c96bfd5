// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "coulomb2d/acceptance.hpp"
#include "coulomb2d/io.hpp"

int main(int argc, char** argv) {
  coulomb2d::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--only" && i + 1 < argc) {
      // comma-separated criterion ids, e.g. --only 1,6,13
      const std::string list = argv[++i];
      size_t pos = 0;
      while (pos < list.size()) {
        opt.only.push_back(std::atoi(list.c_str() + pos));
        const size_t comma = list.find(',', pos);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--seed U64] [--only 1,2,...]\n", argv[0]);
      return 2;
    }
  }

  const coulomb2d::Scorecard card = coulomb2d::run_acceptance(opt);
  coulomb2d::write_file("acceptance_scorecard.json", card.to_json());
  std::printf("ACCEPTANCE: %d/%zu passed\n", card.passed(), card.results.size());
  return card.all_pass() ? 0 : 1;
}
