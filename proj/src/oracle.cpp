#include "coulomb2d/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace coulomb2d {

namespace {

// log of the radial moment integrand r^{2k+1} e^{-t g(r)}.
double log_moment_integrand(const PotentialSpec& spec, double t, int k, double r) {
  if (r <= 0.0) return -kInf;
  return (2.0 * k + 1.0) * std::log(r) - t * spec.radial_value(r);
}

}  // namespace

RadialKernel::RadialKernel(const PotentialSpec& spec, int n) : spec_(spec), n_(n) {
  require(n >= 1, Errc::BadParameters, "kernel needs n >= 1");
  log_norms_.resize(n);
  const double a = spec.sigma_inner();
  const double b = spec.sigma_outer();
  const double nn = static_cast<double>(n);
  for (int k = 0; k < n; ++k) {
    double rel_err = 0.0;
    const double log_mom = integrate_log(
        [&](double r) { return log_moment_integrand(spec_, nn, k, r); }, a, b, 5e-13,
        4097, &rel_err);
    require(std::isfinite(log_mom), Errc::QuadratureFailure,
            "weighted norm vanished for k = " + std::to_string(k));
    require(rel_err <= 1e-10, Errc::QuadratureFailure,
            "norm quadrature error above 1e-10 for k = " + std::to_string(k));
    log_norms_[k] = std::log(2.0) + log_mom;  // dA angular factor is 2, not 2*pi
  }
}

double RadialKernel::r1(Complex z) const {
  const double q = spec_.q(z);
  if (q == kInf) return 0.0;
  const double lz2 = 2.0 * std::log(std::abs(z));  // -inf at the origin
  double sum = 0.0;
  for (int k = 0; k < n_; ++k) {
    const double expo = (k == 0 ? 0.0 : k * lz2) - n_ * q - log_norms_[k];
    if (expo > -745.0) sum += std::exp(expo);
  }
  return sum;
}

Complex RadialKernel::k(Complex z, Complex w) const {
  const double qz = spec_.q(z), qw = spec_.q(w);
  if (qz == kInf || qw == kInf) return {0.0, 0.0};
  const Complex zwbar = z * std::conj(w);
  const double lm = std::log(std::abs(zwbar));
  const double phase = std::arg(zwbar);
  const double base = -0.5 * n_ * (qz + qw);
  Complex sum{0.0, 0.0};
  for (int k = 0; k < n_; ++k) {
    const double expo = (k == 0 ? 0.0 : k * lm) + base - log_norms_[k];
    if (expo > -745.0) sum += std::polar(std::exp(expo), k * phase);
  }
  return sum;
}

double RadialKernel::r2(Complex z, Complex w) const {
  const double kk = std::abs(k(z, w));
  return r1(z) * r1(w) - kk * kk;
}

double RadialKernel::berezin(Complex z, Complex w) const {
  const double rz = r1(z);
  require(rz > 0.0, Errc::BadParameters, "Berezin kernel needs R(z) > 0");
  const double kk = std::abs(k(z, w));
  return kk * kk / rz;
}

double RadialKernel::mass() const {
  const auto q = integrate([&](double r) { return 2.0 * r * r1(Complex(r, 0.0)); },
                           spec_.sigma_inner(), spec_.sigma_outer(), 1e-12);
  return q.value;
}

double gibbs_density_n1(const PotentialSpec& spec, double beta, Complex z) {
  const double q = spec.q(z);
  if (q == kInf) return 0.0;
  const double log_norm =
      std::log(2.0) + integrate_log(
                          [&](double r) {
                            return r > 0.0 ? std::log(r) - beta * spec.radial_value(r)
                                           : -kInf;
                          },
                          spec.sigma_inner(), spec.sigma_outer(), 1e-12);
  require(std::isfinite(log_norm), Errc::QuadratureFailure, "n=1 partition function");
  return std::exp(-beta * q - log_norm);
}

namespace {

struct N2Engine {
  const PotentialSpec& spec;
  double beta;
  const PairObservable* obs;  // nullptr for the plain weight integral
  int theta_points;
  int rotation_points;
  double inner_tol;
  double abs_scale = 0.0;  // absolute tolerance anchor; observables can integrate to zero
  std::vector<double> cos_t, sin_t;    // relative-angle table
  std::vector<Complex> rot;            // rotation-average table
  enum class Pow { Half, One, Two, General } pow_mode = Pow::General;

  N2Engine(const PotentialSpec& s, double b, const PairObservable* o, int tp, int rp,
           double tol)
      : spec(s), beta(b), obs(o), theta_points(tp), rotation_points(rp), inner_tol(tol) {
    cos_t.resize(theta_points);
    sin_t.resize(theta_points);
    for (int t = 0; t < theta_points; ++t) {
      cos_t[t] = std::cos(2.0 * kPi * t / theta_points);
      sin_t[t] = std::sin(2.0 * kPi * t / theta_points);
    }
    rot.resize(rotation_points);
    for (int m = 0; m < rotation_points; ++m)
      rot[m] = std::polar(1.0, 2.0 * kPi * m / rotation_points);
    if (beta == 0.5) pow_mode = Pow::Half;
    else if (beta == 1.0) pow_mode = Pow::One;
    else if (beta == 2.0) pow_mode = Pow::Two;
  }

  // |z1 - z2|^{2 beta} from the squared distance
  double pair_weight(double d2) const {
    switch (pow_mode) {
      case Pow::Half: return std::sqrt(d2);
      case Pow::One: return d2;
      case Pow::Two: return d2 * d2;
      default: return d2 > 0.0 ? std::exp(beta * std::log(d2)) : 0.0;
    }
  }

  bool maybe_supported(double r) const {
    return r >= obs->support_r_lo && r <= obs->support_r_hi;
  }

  double observed(double r1, const Complex& z2) const {
    if (obs->rotation_invariant) return obs->fn(Complex(r1, 0.0), z2);
    double acc = 0.0;
    for (const Complex& e : rot) acc += obs->fn(r1 * e, z2 * e);
    return acc / rotation_points;
  }

  // (1/pi) int_0^{2pi} |z1-z2|^{2 beta} g dtheta at fixed radii.
  double angular(double r1, double r2) const {
    const double base = r1 * r1 + r2 * r2;
    const double cross = 2.0 * r1 * r2;
    if (obs && !maybe_supported(r1) && !maybe_supported(r2)) return 0.0;
    double acc = 0.0;
    for (int t = 0; t < theta_points; ++t) {
      const double d2 = base - cross * cos_t[t];
      if (d2 <= 0.0) continue;
      const double w = pair_weight(d2);
      acc += obs ? w * observed(r1, Complex(r2 * cos_t[t], r2 * sin_t[t])) : w;
    }
    return acc * (2.0 / theta_points);  // (2 pi / K) / pi
  }

  double inner(double r1) const {
    std::vector<double> cuts{r1};
    if (obs)
      cuts.insert(cuts.end(), obs->radial_breakpoints.begin(),
                  obs->radial_breakpoints.end());
    const double boltz1 = std::exp(-2.0 * beta * spec.radial_value(r1));
    if (boltz1 == 0.0) return 0.0;
    // tighter than the outer tolerance, so the outer rule does not chase
    // inner adaptivity noise
    const auto q = integrate(
        [&](double r2) {
          const double boltz2 = std::exp(-2.0 * beta * spec.radial_value(r2));
          if (boltz2 == 0.0) return 0.0;
          return r2 * boltz2 * angular(r1, r2);
        },
        spec.sigma_inner(), spec.sigma_outer(), 0.02 * inner_tol,
        0.02 * inner_tol * abs_scale / (boltz1 * std::max(0.05, 2.0 * r1)), cuts);
    return boltz1 * q.value;
  }

  double outer() const {
    std::vector<double> cuts;
    if (obs)
      cuts.insert(cuts.end(), obs->radial_breakpoints.begin(),
                  obs->radial_breakpoints.end());
    const Droplet d = spec.droplet_numeric();
    cuts.push_back(d.r_in);
    cuts.push_back(d.r_out);
    const auto q = integrate([&](double r1) { return 2.0 * r1 * inner(r1); },
                             spec.sigma_inner(), spec.sigma_outer(), inner_tol,
                             inner_tol * abs_scale, cuts);
    return q.value;
  }
};

double n2_ratio(const PotentialSpec& spec, double beta, const PairObservable& obs,
                int theta_points, int rotation_points, double rel_tol) {
  N2Engine den(spec, beta, nullptr, theta_points, rotation_points, rel_tol);
  const double z = den.outer();
  require(z > 0.0, Errc::QuadratureFailure, "two-particle partition function vanished");
  N2Engine num(spec, beta, &obs, theta_points, rotation_points, rel_tol);
  num.abs_scale = z;  // observables may integrate to zero
  return num.outer() / z;
}

}  // namespace

QuadratureResult expectation_n2(const PotentialSpec& spec, double beta,
                                const PairObservable& obs, const N2Options& opt) {
  require(beta > 0.0, Errc::BadParameters, "beta must be > 0");
  require(static_cast<bool>(obs.fn), Errc::BadParameters, "observable must be callable");
  const double fine =
      n2_ratio(spec, beta, obs, opt.theta_points, opt.rotation_points, opt.rel_tol);
  const double coarse = n2_ratio(spec, beta, obs, opt.theta_points / 2,
                                 std::max(4, opt.rotation_points / 2), opt.rel_tol * 4);
  QuadratureResult out;
  out.value = fine;
  out.error = std::abs(fine - coarse) + opt.rel_tol * std::abs(fine);
  return out;
}

}  // namespace coulomb2d
