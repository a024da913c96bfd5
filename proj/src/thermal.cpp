#include "coulomb2d/thermal.hpp"

#include <algorithm>
#include <cmath>

namespace coulomb2d {

namespace {

// trapezoid weights for int f dA = 2 int f r dr on the uniform grid
std::vector<double> area_weights(const RadialDensity& d) {
  const size_t m = d.radii.size();
  std::vector<double> w(m);
  for (size_t i = 0; i < m; ++i) {
    const double edge = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
    w[i] = 2.0 * d.radii[i] * d.grid_step * edge;
  }
  return w;
}

void normalize(RadialDensity& d) {
  const std::vector<double> w = area_weights(d);
  double peak = -kInf;
  for (double l : d.log_values) peak = std::max(peak, l);
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    const double e = d.log_values[i] - peak;
    if (e > -745.0) sum += w[i] * std::exp(e);
  }
  const double log_mass = peak + std::log(sum);
  for (double& l : d.log_values) l -= log_mass;
}

RadialDensity blank_density(const PotentialSpec& spec, int grid) {
  require(grid >= 512, Errc::BadParameters, "thermal grid must be >= 512");
  RadialDensity d;
  d.radii.resize(grid);
  d.log_values.assign(grid, 0.0);
  d.grid_step = (spec.sigma_outer() - spec.sigma_inner()) / (grid - 1);
  for (int i = 0; i < grid; ++i) d.radii[i] = spec.sigma_inner() + i * d.grid_step;
  return d;
}

}  // namespace

double RadialDensity::mass() const {
  const std::vector<double> w = area_weights(*this);
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (log_values[i] > -745.0) sum += w[i] * std::exp(log_values[i]);
  }
  return sum;
}

int RadialDensity::node_of(double r) const {
  const int i = static_cast<int>(std::round((r - radii.front()) / grid_step));
  return std::clamp(i, 0, static_cast<int>(radii.size()) - 1);
}

double RadialDensity::value_at(double r) const { return value(node_of(r)); }

RadialDensity uniform_density(const PotentialSpec& spec, int grid) {
  RadialDensity d = blank_density(spec, grid);
  normalize(d);
  return d;
}

RadialDensity equilibrium_density(const PotentialSpec& spec, int grid) {
  RadialDensity d = blank_density(spec, grid);
  const Droplet drop = spec.droplet_numeric();
  for (size_t i = 0; i < d.radii.size(); ++i) {
    const double r = d.radii[i];
    d.log_values[i] = drop.contains(r) && r > 0.0
                          ? std::log(spec.laplacian(Complex(r, 0.0)))
                          : (drop.contains(r) ? std::log(spec.delta()) : -700.0);
  }
  normalize(d);
  return d;
}

std::vector<double> log_potential_radial(const RadialDensity& delta) {
  const size_t m = delta.radii.size();
  const double h = delta.grid_step;
  std::vector<double> vals(m);
  for (size_t i = 0; i < m; ++i)
    vals[i] = delta.log_values[i] > -745.0 ? std::exp(delta.log_values[i]) : 0.0;

  // panel integrals of delta rho drho and delta log(rho) rho drho
  std::vector<double> prefix(m, 0.0), suffix(m, 0.0);
  for (size_t i = 1; i < m; ++i) {
    const double ra = delta.radii[i - 1], rb = delta.radii[i];
    prefix[i] = prefix[i - 1] + 0.5 * h * (vals[i - 1] * ra + vals[i] * rb);
  }
  for (size_t i = m - 1; i >= 1; --i) {
    const double ra = delta.radii[i - 1], rb = delta.radii[i];
    const double la = ra > 0.0 ? std::log(ra) * ra : 0.0;  // rho log rho -> 0
    suffix[i - 1] = suffix[i] + 0.5 * h * (vals[i - 1] * la + vals[i] * std::log(rb) * rb);
  }

  std::vector<double> u(m);
  for (size_t i = 0; i < m; ++i) {
    const double r = delta.radii[i];
    const double inner = r > 0.0 ? std::log(r) * prefix[i] : 0.0;
    u[i] = -2.0 * (inner + suffix[i]);
  }
  return u;
}

double free_energy(const PotentialSpec& spec, double n_beta, const RadialDensity& delta) {
  const std::vector<double> w = area_weights(delta);
  const std::vector<double> u = log_potential_radial(delta);
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    const double l = delta.log_values[i];
    if (l <= -745.0) continue;  // 0 log 0 = 0 at underflow
    const double d = std::exp(l);
    const double q = spec.radial_value(delta.radii[i]);
    acc += w[i] * d * (u[i] + q + l / n_beta);
  }
  return acc;
}

std::vector<double> variational_residual(const PotentialSpec& spec, double n_beta,
                                         const RadialDensity& delta) {
  const size_t m = delta.radii.size();
  const double h = delta.grid_step;
  std::vector<double> res(m, 0.0);
  for (size_t i = 1; i + 1 < m; ++i) {
    const double lm = delta.log_values[i - 1], l0 = delta.log_values[i],
                 lp = delta.log_values[i + 1];
    const double d2 = (lp - 2.0 * l0 + lm) / (h * h);
    const double r = delta.radii[i];
    double lap_log;
    if (r > 0.0) {
      const double d1 = (lp - lm) / (2.0 * h);
      lap_log = 0.25 * (d2 + d1 / r);
    } else {
      lap_log = 0.5 * d2;  // symmetric limit at the origin
    }
    res[i] = -std::exp(l0) + spec.laplacian(Complex(std::max(r, h), 0.0)) +
             lap_log / n_beta;
  }
  if (m >= 2 && delta.radii[0] == 0.0) {
    // even extension across r = 0
    const double d2 = 2.0 * (delta.log_values[1] - delta.log_values[0]) / (h * h);
    res[0] = -std::exp(delta.log_values[0]) + spec.laplacian(Complex(h, 0.0)) +
             0.5 * d2 / n_beta;
  }
  return res;
}

std::pair<RadialDensity, ThermalSolveReport> solve_thermal(const PotentialSpec& spec,
                                                           double n, double beta,
                                                           const ThermalOptions& opt) {
  require(n >= 1.0 && beta > 0.0, Errc::BadParameters, "solve needs n >= 1, beta > 0");
  const double n_beta = n * beta;
  RadialDensity delta =
      opt.warm_start ? equilibrium_density(spec, opt.grid) : uniform_density(spec, opt.grid);
  const std::vector<double> w = area_weights(delta);
  const size_t m = delta.radii.size();

  std::vector<double> q(m);
  for (size_t i = 0; i < m; ++i) q[i] = spec.radial_value(delta.radii[i]);

  const Droplet drop = spec.droplet_numeric();
  const double band = 0.05 * drop.width();
  std::vector<char> mid90(m, 0);
  for (size_t i = 0; i < m; ++i)
    mid90[i] = delta.radii[i] >= drop.r_in + band && delta.radii[i] <= drop.r_out - band;

  double f_cur = free_energy(spec, n_beta, delta);
  double eta = 0.1;
  ThermalSolveReport rep;
  RadialDensity trial = delta;

  for (int64_t it = 0; it < opt.max_iters; ++it) {
    const std::vector<double> u = log_potential_radial(delta);
    bool accepted = false;
    double f_new = f_cur;
    for (int bt = 0; bt < 60; ++bt) {
      for (size_t i = 0; i < m; ++i) {
        const double grad = 2.0 * u[i] + q[i] + delta.log_values[i] / n_beta;
        trial.log_values[i] = delta.log_values[i] - eta * grad;
      }
      normalize(trial);
      f_new = free_energy(spec, n_beta, trial);
      if (f_new <= f_cur) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // at the floor of machine-precision descent

    double step_l1 = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const double a = delta.log_values[i] > -745.0 ? std::exp(delta.log_values[i]) : 0.0;
      const double b = trial.log_values[i] > -745.0 ? std::exp(trial.log_values[i]) : 0.0;
      step_l1 += w[i] * std::abs(a - b);
    }
    std::swap(delta.log_values, trial.log_values);
    const double df = f_cur - f_new;
    f_cur = f_new;
    eta = std::min(eta * 1.25, 1e6);
    rep.iterations = it + 1;
    rep.last_step_l1 = step_l1;

    if (it % 16 == 15 || step_l1 < opt.step_l1_target) {
      const std::vector<double> res = variational_residual(spec, n_beta, delta);
      double sup = 0.0;
      for (size_t i = 0; i < m; ++i)
        if (mid90[i]) sup = std::max(sup, std::abs(res[i]));
      rep.residual_sup = sup;
      if (sup < opt.tol && df < 1e-12 * std::max(1.0, std::abs(f_cur)) &&
          step_l1 < opt.step_l1_target) {
        rep.converged = true;
        break;
      }
    }
  }

  rep.free_energy = f_cur;
  rep.mass_defect = std::abs(delta.mass() - 1.0);
  {
    const std::vector<double> res = variational_residual(spec, n_beta, delta);
    double sup = 0.0;
    for (size_t i = 0; i < m; ++i)
      if (mid90[i]) sup = std::max(sup, std::abs(res[i]));
    rep.residual_sup = sup;
  }
  require(rep.converged || rep.residual_sup < opt.tol, Errc::NoConvergence,
          "thermal solve stalled: residual " + std::to_string(rep.residual_sup) +
              " after " + std::to_string(rep.iterations) + " iterations");
  rep.converged = true;
  return {std::move(delta), rep};
}

BoundaryDiscrepancyReport boundary_discrepancy(const PotentialSpec& spec, int n,
                                               const ThermalOptions& opt) {
  require(spec.hele_shaw() && spec.log_coef() == 0.0, Errc::BadParameters,
          "edge comparison is set up for the disc droplet");
  const double edge = spec.droplet().r_out;
  const double lap_q = spec.laplacian(Complex(edge - 1e-9, 0.0));
  const double scale = std::sqrt(n * lap_q);

  RadialKernel kernel(spec, n);
  auto rho = [&](double t) {  // rescaled oracle profile along the real axis
    return kernel.r1(Complex(edge + t / scale, 0.0)) / (n * lap_q);
  };

  auto [delta, rep] = solve_thermal(spec, n, 1.0, opt);
  (void)rep;
  auto rho_t = [&](double t) { return delta.value_at(edge + t / scale) / lap_q; };

  BoundaryDiscrepancyReport out;
  out.rho_oracle_at_0 = rho(0.0);
  out.rho_thermal_at_0 = rho_t(0.0);

  // ddbar log of a radial profile F(r) at r = edge, in microscopic units:
  // (F''/F - (F'/F)^2 + F'/(r F)) / (4 n lap_q), with steps on grid nodes for
  // the thermal side and the same physical step for the oracle side.
  const int k = std::max(2, static_cast<int>(std::round(0.1 / (scale * delta.grid_step))));
  const double h_phys = k * delta.grid_step;
  auto lap_log_micro = [&](const std::function<double(double)>& f) {
    const double fm = f(edge - h_phys), f0 = f(edge), fp = f(edge + h_phys);
    const double d1 = (fp - fm) / (2.0 * h_phys);
    const double d2 = (fp - 2.0 * f0 + fm) / (h_phys * h_phys);
    const double lap_log_phys =
        0.25 * ((d2 / f0 - (d1 / f0) * (d1 / f0)) + d1 / (edge * f0));
    return lap_log_phys / (n * lap_q);
  };
  out.lap_log_rho_oracle = lap_log_micro([&](double r) { return kernel.r1(Complex(r, 0.0)); });
  const double lap_log_thermal = lap_log_micro([&](double r) { return delta.value_at(r); });
  out.spuck_defect = lap_log_thermal - (out.rho_thermal_at_0 - 1.0);

  const int lo = delta.node_of(edge - 6.0 / scale);
  const int hi = delta.node_of(edge + 6.0 / scale);
  double gap = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double r = delta.radii[i];
    gap = std::max(gap, std::abs(kernel.r1(Complex(r, 0.0)) - n * delta.value(i)));
  }
  out.gap = gap / n;
  return out;
}

BulkDiscrepancyReport bulk_discrepancy(const PotentialSpec& spec, int n, double p_radius,
                                       const ThermalOptions& opt) {
  require(spec.quartic_coef() > 0.0, Errc::BadParameters,
          "bulk comparison needs ddbar log ddbar Q != 0, i.e. a quartic term");
  const Complex p(p_radius, 0.0);
  const double lap_q = spec.laplacian(p);

  BulkDiscrepancyReport out;
  // ddbar log(delta + 4 c4 r^2) = 4 c4 delta / (delta + 4 c4 r^2)^2
  out.lap_log_lap_q = 4.0 * spec.quartic_coef() * spec.delta() / (lap_q * lap_q);

  RadialKernel kernel(spec, n);
  auto [delta, rep] = solve_thermal(spec, n, 1.0, opt);
  (void)rep;

  const double r_n = kernel.r1(p);
  const double n_delta = n * delta.value_at(p_radius);
  out.oracle_two_term = r_n - n * lap_q;
  out.thermal_two_term = n_delta - n * lap_q;
  out.gap = std::abs(r_n - n_delta);
  return out;
}

}  // namespace coulomb2d
