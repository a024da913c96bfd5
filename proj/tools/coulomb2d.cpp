#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "coulomb2d/cli.hpp"
#include "coulomb2d/config.hpp"
#include "coulomb2d/io.hpp"
#include "coulomb2d/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"coulomb2d: a desk-scale laboratory for planar Coulomb gases"};
  app.set_version_flag("--version", coulomb2d::kVersion);

  std::string config_path;
  std::string out_dir = ".";
  std::string seed_str;
  int threads = 0;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_dir, "output directory for artifacts");
  app.add_option("--seed", seed_str, "seed override (also env COULOMB2D_SEED)");
  app.add_option("--threads", threads, "worker pool size, 0 = hardware");
  app.require_subcommand(1);
  for (const std::string& name : coulomb2d::subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  coulomb2d::RunConfig cfg;
  if (!config_path.empty()) {
    try {
      const coulomb2d::ParseResult parsed =
          coulomb2d::try_parse_config(coulomb2d::read_file(config_path));
      if (!parsed.ok()) {
        for (const std::string& e : parsed.errors)
          std::fprintf(stderr, "%s: %s\n", config_path.c_str(), e.c_str());
        return 2;
      }
      cfg = parsed.config;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "%s\n", e.what());
      return 2;
    }
  }

  coulomb2d::CliOptions opt;
  opt.out_dir = out_dir;
  opt.threads = threads;
  if (seed_str.empty()) {
    if (const char* env = std::getenv("COULOMB2D_SEED")) seed_str = env;
  }
  if (!seed_str.empty()) {
    try {
      opt.seed_override = std::stoull(seed_str);
      opt.have_seed_override = true;
    } catch (...) {
      std::fprintf(stderr, "invalid seed `%s`\n", seed_str.c_str());
      return 2;
    }
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  return coulomb2d::dispatch(sub, cfg, opt);
}
