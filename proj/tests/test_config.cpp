#include <cstdio>
#include <filesystem>

#include "coulomb2d/cli.hpp"
#include "coulomb2d/config.hpp"
#include "coulomb2d/io.hpp"
#include "doctest.h"

using namespace coulomb2d;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal config gets defaults") {
  const ParseResult r = try_parse_config("# just a comment\nn = 8\n");
  REQUIRE(r.ok());
  CHECK(r.config.n == 8);
  CHECK(r.config.beta == 1.0);
  CHECK(r.config.potential_kind == "ginibre");
  CHECK(r.config.spec().delta() == 1.0);
}

TEST_CASE("validation errors name the key and line") {
  const ParseResult r = try_parse_config("beta = -1\n");
  REQUIRE(!r.ok());
  bool found = false;
  for (const auto& e : r.errors) found = found || e.find("beta") != std::string::npos;
  CHECK(found);
}

TEST_CASE("all errors are reported, not just the first") {
  const ParseResult r = try_parse_config(
      "beta = -1\n"
      "bogus_key = 3\n"
      "thin = 0\n"
      "what even is this line\n");
  REQUIRE(r.errors.size() >= 4);
  CHECK(r.errors[0].find("line") != std::string::npos);
}

TEST_CASE("induced config equals programmatic construction") {
  const ParseResult r = try_parse_config(
      "potential.kind = induced\n"
      "induced.s = 2.0\n"
      "n = 100\n");
  REQUIRE(r.ok());
  const PotentialSpec from_config = r.config.spec();
  const PotentialSpec direct = PotentialSpec::induced(100, 2.0);
  CHECK(from_config.delta() == direct.delta());
  CHECK(from_config.log_coef() == direct.log_coef());
  CHECK(from_config.const_term() == direct.const_term());
  CHECK(from_config.sigma_inner() == direct.sigma_inner());
  CHECK(from_config.sigma_outer() == direct.sigma_outer());
}

TEST_CASE("frames and bumps parse as tuples") {
  const ParseResult r = try_parse_config(
      "frames = 1,0 0.5,0.5\n"
      "ward.bumps = 0,0,0.5 1,0,0.4\n");
  REQUIRE(r.ok());
  REQUIRE(r.config.frames.size() == 2);
  CHECK(r.config.frames[1] == Complex(0.5, 0.5));
  REQUIRE(r.config.bumps.size() == 2);
  CHECK(r.config.bumps[1].radius == 0.4);
}

TEST_CASE("parse_config throws a joined ConfigError") {
  CHECK_THROWS_AS(parse_config("beta = 0\n"), Error);
}

TEST_CASE("dispatch: unknown subcommand exits 2") {
  RunConfig cfg;
  CliOptions opt;
  opt.out_dir = (fs::temp_directory_path() / "coulomb2d_unknown").string();
  CHECK(dispatch("frobnicate", cfg, opt) == 2);
}

TEST_CASE("dispatch: droplet writes artifacts and a manifest") {
  RunConfig cfg;
  CliOptions opt;
  const fs::path dir = fs::temp_directory_path() / "coulomb2d_droplet";
  fs::remove_all(dir);
  opt.out_dir = dir.string();
  CHECK(dispatch("droplet", cfg, opt) == 0);
  CHECK(fs::exists(dir / "droplet.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  const std::string manifest = read_file((dir / "manifest.json").string());
  CHECK(manifest.find("config_hash") != std::string::npos);
  CHECK(manifest.find("droplet.json") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("dispatch: sample reruns are byte-identical") {
  RunConfig cfg;
  cfg.n = 4;
  cfg.chains = 2;
  cfg.sweeps = 220;
  cfg.burnin = 100;
  cfg.thin = 10;
  cfg.seed = 4242;
  const fs::path dir_a = fs::temp_directory_path() / "coulomb2d_sample_a";
  const fs::path dir_b = fs::temp_directory_path() / "coulomb2d_sample_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  CliOptions opt;
  opt.out_dir = dir_a.string();
  REQUIRE(dispatch("sample", cfg, opt) == 0);
  opt.out_dir = dir_b.string();
  REQUIRE(dispatch("sample", cfg, opt) == 0);
  CHECK(read_file((dir_a / "samples.txt").string()) ==
        read_file((dir_b / "samples.txt").string()));

  // the seed override changes the stream
  opt.have_seed_override = true;
  opt.seed_override = 999;
  const fs::path dir_c = fs::temp_directory_path() / "coulomb2d_sample_c";
  fs::remove_all(dir_c);
  opt.out_dir = dir_c.string();
  REQUIRE(dispatch("sample", cfg, opt) == 0);
  CHECK(read_file((dir_a / "samples.txt").string()) !=
        read_file((dir_c / "samples.txt").string()));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::remove_all(dir_c);
}

TEST_CASE("csv cells use 17 significant digits") {
  CsvWriter w({"a", "b"});
  w.row({1.0 / 3.0, 2.0});
  CHECK(w.text().find("0.33333333333333331") != std::string::npos);
}

TEST_SUITE_END();
