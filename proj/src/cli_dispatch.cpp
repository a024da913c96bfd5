#include "coulomb2d/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "coulomb2d/acceptance.hpp"
#include "coulomb2d/diagnostics.hpp"
#include "coulomb2d/estimator.hpp"
#include "coulomb2d/io.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/sampler.hpp"
#include "coulomb2d/thermal.hpp"
#include "coulomb2d/version.hpp"

#include "json.hpp"

namespace coulomb2d {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunContext {
  fs::path out;
  json manifest;
  std::chrono::steady_clock::time_point start;

  RunContext(const std::string& subcommand, const RunConfig& cfg, const CliOptions& opt)
      : out(opt.out_dir), start(std::chrono::steady_clock::now()) {
    fs::create_directories(out);
    manifest["command"] = subcommand;
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["threads"] = opt.threads;
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_config_text(cfg))));
    manifest["config_hash"] = hash;
    manifest["artifacts"] = json::array();
  }

  void artifact(const std::string& name, const std::string& content) {
    write_file((out / name).string(), content);
    manifest["artifacts"].push_back(name);
  }

  void finish() {
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
  }
};

SampleParams sample_params(const RunConfig& cfg, const CliOptions& opt) {
  SampleParams p;
  p.n = cfg.n;
  p.beta = cfg.beta;
  p.chains = cfg.chains;
  p.sweeps = cfg.sweeps;
  p.burnin = cfg.burnin;
  p.thin = cfg.thin;
  p.seed = cfg.seed;
  p.threads = opt.threads > 0 ? opt.threads : cfg.threads;
  return p;
}

int cmd_droplet(const RunConfig& cfg, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const Droplet d = spec.droplet_numeric();
  json out;
  out["potential"] = spec.describe();
  out["r_in"] = d.r_in;
  out["r_out"] = d.r_out;
  out["mass_defect"] =
      spec.hele_shaw() ? std::abs(spec.delta() * (d.r_out * d.r_out - d.r_in * d.r_in) - 1.0)
                       : 0.0;
  out["wall_margin"] = spec.sigma_outer() - d.r_out;
  ctx.artifact("droplet.json", out.dump(2) + "\n");
  return 0;
}

int cmd_sample(const RunConfig& cfg, const CliOptions& opt, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const SampleParams params = sample_params(cfg, opt);
  std::vector<std::string> blocks(params.chains);
  run_chains(spec, params, [&](int c) -> ConfigSink {
    return [&blocks, c](int64_t sweep, const Configuration& config) {
      std::string& s = blocks[c];
      s += std::to_string(c);
      s += ' ';
      s += std::to_string(sweep);
      for (const Complex& z : config) {
        s += ' ';
        s += format_g17(z.real());
        s += ' ';
        s += format_g17(z.imag());
      }
      s += '\n';
    };
  });
  std::string all;
  for (const std::string& b : blocks) all += b;
  ctx.artifact("samples.txt", all);
  return 0;
}

int cmd_density(const RunConfig& cfg, const CliOptions& opt, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const SampleParams params = sample_params(cfg, opt);
  std::vector<DensityField> fields(params.chains,
                                   DensityField(cfg.bbox, cfg.grid_bins, cfg.grid_bins));
  std::vector<RadialField> radials(params.chains,
                                   RadialField(0.0, spec.sigma_outer(), cfg.radial_bins));
  run_chains(spec, params, [&](int c) -> ConfigSink {
    return [&fields, &radials, c](int64_t, const Configuration& config) {
      fields[c].accumulate(config);
      radials[c].accumulate(config);
    };
  });
  for (int c = 1; c < params.chains; ++c) {
    fields[0].merge(fields[c]);
    radials[0].merge(radials[c]);
  }
  CsvWriter grid({"x", "y", "density", "stderr"});
  for (int iy = 0; iy < fields[0].ny(); ++iy)
    for (int ix = 0; ix < fields[0].nx(); ++ix) {
      const Complex z = fields[0].bin_center(ix, iy);
      grid.row({z.real(), z.imag(), fields[0].estimate(ix, iy), fields[0].stderror(ix, iy)});
    }
  ctx.artifact("density.csv", grid.text());
  CsvWriter rad({"r", "density", "stderr"});
  for (int i = 0; i < radials[0].bins(); ++i)
    rad.row({radials[0].r_center(i), radials[0].estimate(i), radials[0].stderror(i)});
  ctx.artifact("radial.csv", rad.text());
  ctx.manifest["samples"] = fields[0].samples();
  return 0;
}

int cmd_oracle(const RunConfig& cfg, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const RadialKernel kernel(spec, cfg.n);
  CsvWriter norms({"k", "h_k", "log_h_k"});
  for (int k = 0; k < cfg.n; ++k)
    norms.row({static_cast<double>(k), kernel.norm(k), kernel.log_norm(k)});
  ctx.artifact("norms.csv", norms.text());
  CsvWriter radial({"r", "density"});
  for (int i = 0; i < cfg.radial_bins; ++i) {
    const double r = spec.sigma_outer() * (i + 0.5) / cfg.radial_bins;
    radial.row({r, kernel.r1(Complex(r, 0.0))});
  }
  ctx.artifact("oracle_radial.csv", radial.text());
  const double mass = kernel.mass();
  json rep;
  rep["n"] = cfg.n;
  rep["mass"] = mass;
  rep["mass_defect"] = std::abs(mass - cfg.n);
  ctx.artifact("oracle.json", rep.dump(2) + "\n");
  return std::abs(mass - cfg.n) <= 1e-8 ? 0 : 1;
}

int cmd_ward(const RunConfig& cfg, const CliOptions& opt, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const SampleParams params = sample_params(cfg, opt);
  std::vector<BumpFunction> bumps;
  for (const BumpSpec& b : cfg.bumps)
    bumps.emplace_back(Complex(b.x, b.y), b.radius, spec);
  std::vector<std::vector<std::vector<Complex>>> stats(
      bumps.size(), std::vector<std::vector<Complex>>(params.chains));
  run_chains(spec, params, [&](int c) -> ConfigSink {
    return [&, c](int64_t, const Configuration& config) {
      for (size_t b = 0; b < bumps.size(); ++b)
        stats[b][c].push_back(ward_stat(spec, params.beta, config, bumps[b]));
    };
  });
  CsvWriter csv({"bump", "re_mean", "re_stderr", "re_z", "im_mean", "im_stderr", "im_z"});
  json verdicts = json::array();
  bool all_ok = true;
  for (size_t b = 0; b < bumps.size(); ++b) {
    const WardTestResult res = ward_test(stats[b]);
    csv.row({static_cast<double>(b), res.re.mean, res.re.stderror, res.re.z_score(),
             res.im.mean, res.im.stderror, res.im.z_score()});
    const bool ok = res.pass();
    all_ok = all_ok && ok;
    verdicts.push_back({{"bump", b}, {"pass", ok}});
  }
  ctx.artifact("ward.csv", csv.text());
  ctx.artifact("ward.json", verdicts.dump(2) + "\n");
  return all_ok ? 0 : 1;
}

int cmd_berezin(const RunConfig& cfg, const CliOptions& opt, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const SampleParams params = sample_params(cfg, opt);
  const Complex anchor = cfg.frames.front();
  const double cell = 0.25 / std::sqrt(cfg.n * spec.delta());
  const int half = static_cast<int>(std::ceil((spec.sigma_outer() - 0.5) / cell));
  std::vector<BerezinAccumulator> acc(params.chains,
                                      BerezinAccumulator(anchor, cell, half));
  run_chains(spec, params, [&](int c) -> ConfigSink {
    return [&acc, c](int64_t, const Configuration& config) { acc[c].accumulate(config); };
  });
  std::vector<double> chain_mass;
  for (int c = 0; c < params.chains; ++c)
    if (acc[c].anchor_hits() > 0) chain_mass.push_back(acc[c].window_mass());
  for (int c = 1; c < params.chains; ++c) acc[0].merge(acc[c]);

  CsvWriter csv({"vx", "vy", "berezin", "stderr"});
  const int ext = acc[0].extent();
  for (int iy = 0; iy < ext; ++iy)
    for (int ix = 0; ix < ext; ++ix) {
      const Complex v = acc[0].cell_center(ix, iy);
      csv.row({v.real(), v.imag(), acc[0].berezin(ix, iy), acc[0].berezin_stderror(ix, iy)});
    }
  ctx.artifact("berezin.csv", csv.text());

  RunningStat mass_stat;
  for (double m : chain_mass) mass_stat.add(m);
  json rep;
  rep["anchor_hits"] = acc[0].anchor_hits();
  rep["window_mass"] = acc[0].window_mass();
  rep["window_mass_stderr"] = mass_stat.stderror();
  rep["r_anchor"] = acc[0].r_anchor();
  ctx.artifact("berezin.json", rep.dump(2) + "\n");
  const double dev = std::abs(acc[0].window_mass() - 1.0);
  return dev <= std::max(3.0 * mass_stat.stderror(), 1e-3) ? 0 : 1;
}

int cmd_profiles(const RunConfig& cfg, RunContext& ctx) {
  CsvWriter csv({"x", "erfc_profile", "f_s_of_2x", "bulk_kernel_at_x", "boundary_kernel_mass"});
  for (int i = 0; i <= 240; ++i) {
    const double x = -3.0 + i * 0.025;
    csv.row({x, erfc_profile(cfg.beta, Complex(x, 0.0)), f_s_profile(cfg.induced_s, 2.0 * x),
             bulk_kernel(cfg.beta, Complex(0, 0), Complex(x, 0)),
             boundary_kernel_mass(cfg.beta, x)});
  }
  ctx.artifact("profiles.csv", csv.text());

  json rep;
  rep["bulk_mass"] = kernel_mass_quadrature(RefKernel::Bulk, cfg.beta, {0, 0}).value;
  rep["boundary_mass_deep_bulk"] =
      kernel_mass_quadrature(RefKernel::Boundary, cfg.beta, {-6.0, 0.0}).value;
  rep["expected"] = 1.0 / cfg.beta;
  ResidualOptions ropt;
  rep["bulk_residual_sup"] = ward_equation_residual(
      [&](Complex u, Complex v) { return bulk_kernel(cfg.beta, u, v); }, cfg.beta, ropt).sup;
  rep["boundary_residual_sup"] = ward_equation_residual(
      [&](Complex u, Complex v) { return boundary_kernel(cfg.beta, u, v); }, cfg.beta, ropt).sup;
  ctx.artifact("profiles.json", rep.dump(2) + "\n");
  return 0;
}

int cmd_thermal(const RunConfig& cfg, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  ThermalOptions topt;
  topt.grid = cfg.thermal_grid;
  topt.tol = cfg.thermal_tol;
  topt.max_iters = cfg.thermal_max_iters;
  auto [delta, rep] = solve_thermal(spec, cfg.n, cfg.beta, topt);
  CsvWriter csv({"r", "delta", "log_delta"});
  for (size_t i = 0; i < delta.radii.size(); ++i)
    csv.row({delta.radii[i], delta.value(i), delta.log_values[i]});
  ctx.artifact("thermal.csv", csv.text());
  json out;
  out["iterations"] = rep.iterations;
  out["free_energy"] = rep.free_energy;
  out["residual_sup"] = rep.residual_sup;
  out["mass_defect"] = rep.mass_defect;
  out["converged"] = rep.converged;
  ctx.artifact("thermal.json", out.dump(2) + "\n");
  return rep.converged ? 0 : 1;
}

int cmd_compare(const RunConfig& cfg, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const RadialKernel kernel(spec, cfg.n);
  ThermalOptions topt;
  topt.grid = cfg.thermal_grid;
  topt.tol = cfg.thermal_tol;
  topt.max_iters = cfg.thermal_max_iters;
  auto [delta, rep] = solve_thermal(spec, cfg.n, cfg.beta, topt);
  (void)rep;
  CsvWriter csv({"r", "oracle_density", "n_delta", "gap"});
  const int stride = std::max<int>(1, static_cast<int>(delta.radii.size()) / 2048);
  for (size_t i = 0; i < delta.radii.size(); i += stride) {
    const double r = delta.radii[i];
    const double oracle = kernel.r1(Complex(r, 0.0));
    const double nd = cfg.n * delta.value(i);
    csv.row({r, oracle, nd, oracle - nd});
  }
  ctx.artifact("compare.csv", csv.text());
  return 0;
}

int cmd_overcrowd(const RunConfig& cfg, const CliOptions& opt, RunContext& ctx) {
  const PotentialSpec spec = cfg.spec();
  const SampleParams params = sample_params(cfg, opt);
  const Complex p = cfg.frames.front();
  const double r = cfg.overcrowd_radius > 0.0
                       ? cfg.overcrowd_radius
                       : 1.0 / std::sqrt(cfg.n * spec.delta());
  std::vector<std::vector<int>> per_chain(params.chains);
  run_chains(spec, params, [&](int c) -> ConfigSink {
    return [&per_chain, c, p, r](int64_t, const Configuration& config) {
      per_chain[c].push_back(count_disk(config, p, r));
    };
  });
  std::vector<int> counts;
  for (const auto& v : per_chain) counts.insert(counts.end(), v.begin(), v.end());
  const OvercrowdTail tail = overcrowd_tail(counts, counts.size(), cfg.n);
  CsvWriter csv({"m", "prob", "stderr"});
  for (const TailPoint& pt : tail.points)
    csv.row({static_cast<double>(pt.m), pt.prob, pt.stderror});
  ctx.artifact("overcrowd.csv", csv.text());
  json rep;
  rep["disc_radius"] = r;
  rep["fit_ok"] = tail.fit_ok;
  rep["fit_a"] = tail.fit_a;
  rep["fit_b"] = tail.fit_b;
  ctx.artifact("overcrowd.json", rep.dump(2) + "\n");
  return 0;
}

int cmd_acceptance(const RunConfig& cfg, const CliOptions& opt, RunContext& ctx) {
  AcceptanceOptions aopt;
  aopt.seed = cfg.seed;
  aopt.threads = opt.threads > 0 ? opt.threads : cfg.threads;
  const Scorecard card = run_acceptance(aopt);
  ctx.artifact("scorecard.json", card.to_json());
  return card.all_pass() ? 0 : 1;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{
      "droplet", "sample",  "density", "oracle",    "ward",      "berezin",
      "profiles", "thermal", "compare", "overcrowd", "acceptance"};
  return names;
}

int dispatch(const std::string& subcommand, RunConfig cfg, const CliOptions& opt) {
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) ==
      subcommands().end()) {
    std::fprintf(stderr, "unknown subcommand `%s`\n", subcommand.c_str());
    return 2;
  }
  if (opt.have_seed_override) cfg.seed = opt.seed_override;
  try {
    RunContext ctx(subcommand, cfg, opt);
    int rc = 1;
    if (subcommand == "droplet") rc = cmd_droplet(cfg, ctx);
    else if (subcommand == "sample") rc = cmd_sample(cfg, opt, ctx);
    else if (subcommand == "density") rc = cmd_density(cfg, opt, ctx);
    else if (subcommand == "oracle") rc = cmd_oracle(cfg, ctx);
    else if (subcommand == "ward") rc = cmd_ward(cfg, opt, ctx);
    else if (subcommand == "berezin") rc = cmd_berezin(cfg, opt, ctx);
    else if (subcommand == "profiles") rc = cmd_profiles(cfg, ctx);
    else if (subcommand == "thermal") rc = cmd_thermal(cfg, ctx);
    else if (subcommand == "compare") rc = cmd_compare(cfg, ctx);
    else if (subcommand == "overcrowd") rc = cmd_overcrowd(cfg, opt, ctx);
    else if (subcommand == "acceptance") rc = cmd_acceptance(cfg, opt, ctx);
    ctx.finish();
    return rc;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", subcommand.c_str(), e.what());
    return e.code() == Errc::ConfigError || e.code() == Errc::BadParameters ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", subcommand.c_str(), e.what());
    return 1;
  }
}

}  // namespace coulomb2d
