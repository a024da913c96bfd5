#include "coulomb2d/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "coulomb2d/io.hpp"

namespace coulomb2d {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int64_t& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

bool parse_u64(const std::string& s, uint64_t& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_tuple(const std::string& tok, int arity, std::vector<double>& vals) {
  vals.clear();
  std::string part;
  std::istringstream is(tok);
  while (std::getline(is, part, ',')) {
    double v = 0.0;
    if (!parse_double(trim(part), v)) return false;
    vals.push_back(v);
  }
  return static_cast<int>(vals.size()) == arity;
}

}  // namespace

PotentialSpec RunConfig::spec() const {
  if (potential_kind == "ginibre") return PotentialSpec::ginibre();
  if (potential_kind == "induced") return PotentialSpec::induced(n, induced_s);
  if (potential_kind == "quartic")
    return PotentialSpec::quartic(delta, quartic_coef, sigma_outer);
  PotentialParams p;
  p.delta = delta;
  p.log_coef = log_coef;
  p.quartic_coef = quartic_coef;
  p.const_term = const_term;
  p.sigma_inner = sigma_inner;
  p.sigma_outer = sigma_outer;
  p.delta0 = delta0;
  p.eta0 = eta0;
  return PotentialSpec(p);
}

ParseResult try_parse_config(const std::string& text) {
  ParseResult result;
  RunConfig& c = result.config;
  auto err = [&](int line, const std::string& msg) {
    result.errors.push_back("line " + std::to_string(line) + ": " + msg);
  };

  using Setter = std::function<bool(const std::string&)>;
  auto dbl = [&](double& target) {
    return Setter([&target](const std::string& v) { return parse_double(v, target); });
  };
  auto i64 = [&](int64_t& target) {
    return Setter([&target](const std::string& v) { return parse_int(v, target); });
  };
  auto i32 = [&](int& target) {
    return Setter([&target](const std::string& v) {
      int64_t x = 0;
      if (!parse_int(v, x) || x < INT32_MIN || x > INT32_MAX) return false;
      target = static_cast<int>(x);
      return true;
    });
  };

  std::map<std::string, Setter> keys;
  keys["potential.kind"] = [&](const std::string& v) {
    if (v != "ginibre" && v != "induced" && v != "quartic" && v != "custom") return false;
    c.potential_kind = v;
    return true;
  };
  keys["potential.delta"] = dbl(c.delta);
  keys["potential.log_coef"] = dbl(c.log_coef);
  keys["potential.quartic_coef"] = dbl(c.quartic_coef);
  keys["potential.const"] = dbl(c.const_term);
  keys["potential.sigma_inner"] = dbl(c.sigma_inner);
  keys["potential.sigma_outer"] = dbl(c.sigma_outer);
  keys["potential.delta0"] = dbl(c.delta0);
  keys["potential.eta0"] = dbl(c.eta0);
  keys["induced.s"] = dbl(c.induced_s);
  keys["n"] = i32(c.n);
  keys["beta"] = dbl(c.beta);
  keys["chains"] = i32(c.chains);
  keys["sweeps"] = i64(c.sweeps);
  keys["burnin"] = i64(c.burnin);
  keys["thin"] = i64(c.thin);
  keys["seed"] = [&](const std::string& v) { return parse_u64(v, c.seed); };
  keys["grid.bins"] = i32(c.grid_bins);
  keys["grid.xmin"] = dbl(c.bbox.xmin);
  keys["grid.xmax"] = dbl(c.bbox.xmax);
  keys["grid.ymin"] = dbl(c.bbox.ymin);
  keys["grid.ymax"] = dbl(c.bbox.ymax);
  keys["grid.radial_bins"] = i32(c.radial_bins);
  keys["frames"] = [&](const std::string& v) {
    std::vector<Complex> frames;
    for (const std::string& tok : split_ws(v)) {
      std::vector<double> vals;
      if (!parse_tuple(tok, 2, vals)) return false;
      frames.emplace_back(vals[0], vals[1]);
    }
    if (frames.empty()) return false;
    c.frames = std::move(frames);
    return true;
  };
  keys["ward.bumps"] = [&](const std::string& v) {
    std::vector<BumpSpec> bumps;
    for (const std::string& tok : split_ws(v)) {
      std::vector<double> vals;
      if (!parse_tuple(tok, 3, vals)) return false;
      bumps.push_back({vals[0], vals[1], vals[2]});
    }
    if (bumps.empty()) return false;
    c.bumps = std::move(bumps);
    return true;
  };
  keys["thermal.grid"] = i32(c.thermal_grid);
  keys["thermal.tol"] = dbl(c.thermal_tol);
  keys["thermal.max_iters"] = i64(c.thermal_max_iters);
  keys["overcrowd.radius"] = dbl(c.overcrowd_radius);
  keys["threads"] = i32(c.threads);
  keys["out.samples"] = [&](const std::string& v) {
    if (v == "0" || v == "false") c.write_samples = false;
    else if (v == "1" || v == "true") c.write_samples = true;
    else return false;
    return true;
  };

  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      err(line, "expected `key = value`");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) {
      err(line, "unknown key `" + key + "`");
      continue;
    }
    if (value.empty() || !it->second(value))
      err(line, "invalid value for `" + key + "`: `" + value + "`");
  }

  // cross-field validation; report with the offending key's name
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) result.errors.push_back(msg);
  };
  check(c.n >= 1, "n: must be >= 1");
  check(c.beta > 0.0, "beta: must be > 0");
  check(c.chains >= 1, "chains: must be >= 1");
  check(c.sweeps > c.burnin, "sweeps: must exceed burnin");
  check(c.burnin >= 0, "burnin: must be >= 0");
  check(c.thin >= 1, "thin: must be >= 1");
  check(c.grid_bins >= 1, "grid.bins: must be >= 1");
  check(c.radial_bins >= 1, "grid.radial_bins: must be >= 1");
  check(c.bbox.xmax > c.bbox.xmin && c.bbox.ymax > c.bbox.ymin,
        "grid bbox: must be nonempty");
  check(c.thermal_grid >= 512, "thermal.grid: must be >= 512");
  check(c.thermal_tol > 0.0, "thermal.tol: must be > 0");
  check(c.threads >= 0, "threads: must be >= 0");
  check(c.overcrowd_radius >= 0.0, "overcrowd.radius: must be >= 0");
  if (c.potential_kind == "induced")
    check(c.induced_s > 0.0 && c.induced_s * c.induced_s < c.n,
          "induced.s: needs s^2 < n");
  if (result.errors.empty()) {
    try {
      (void)c.spec();
    } catch (const Error& e) {
      result.errors.push_back(std::string("potential: ") + e.what());
    }
  }
  return result;
}

RunConfig parse_config(const std::string& text) {
  ParseResult r = try_parse_config(text);
  if (!r.ok()) {
    std::string joined;
    for (const auto& e : r.errors) {
      if (!joined.empty()) joined += "; ";
      joined += e;
    }
    fail(Errc::ConfigError, joined);
  }
  return r.config;
}

std::string canonical_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "potential.kind = " << c.potential_kind << "\n";
  os << "potential.delta = " << format_g17(c.delta) << "\n";
  os << "potential.log_coef = " << format_g17(c.log_coef) << "\n";
  os << "potential.quartic_coef = " << format_g17(c.quartic_coef) << "\n";
  os << "potential.const = " << format_g17(c.const_term) << "\n";
  os << "potential.sigma_inner = " << format_g17(c.sigma_inner) << "\n";
  os << "potential.sigma_outer = " << format_g17(c.sigma_outer) << "\n";
  os << "induced.s = " << format_g17(c.induced_s) << "\n";
  os << "n = " << c.n << "\n";
  os << "beta = " << format_g17(c.beta) << "\n";
  os << "chains = " << c.chains << "\n";
  os << "sweeps = " << c.sweeps << "\n";
  os << "burnin = " << c.burnin << "\n";
  os << "thin = " << c.thin << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

}  // namespace coulomb2d
