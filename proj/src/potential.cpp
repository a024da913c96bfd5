#include "coulomb2d/potential.hpp"

#include <cmath>
#include <sstream>

namespace coulomb2d {

namespace {

// r g'(r) = 2 delta r^2 + 4 c4 r^4 - b, increasing on r > 0.
double radial_mass_flux(const PotentialParams& p, double r) {
  const double r2 = r * r;
  return 2.0 * p.delta * r2 + 4.0 * p.quartic_coef * r2 * r2 - p.log_coef;
}

double bisect_flux(const PotentialParams& p, double target) {
  double lo = 0.0;
  double hi = std::max(p.sigma_outer, 1.0);
  while (radial_mass_flux(p, hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (radial_mass_flux(p, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Droplet solve_droplet(const PotentialParams& p) {
  Droplet d;
  if (p.quartic_coef == 0.0) {
    d.r_in = std::sqrt(std::max(0.0, p.log_coef / (2.0 * p.delta)));
    d.r_out = std::sqrt((2.0 + p.log_coef) / (2.0 * p.delta));
  } else {
    d.r_in = p.log_coef > 0.0 ? bisect_flux(p, 0.0) : 0.0;
    d.r_out = bisect_flux(p, 2.0);
  }
  return d;
}

}  // namespace

PotentialSpec::PotentialSpec(const PotentialParams& p) : p_(p) {
  require(p.delta > 0.0 && std::isfinite(p.delta), Errc::BadParameters, "delta must be > 0");
  require(p.log_coef >= 0.0, Errc::BadParameters, "log_coef must be >= 0");
  require(p.quartic_coef >= 0.0, Errc::BadParameters, "quartic_coef must be >= 0");
  require(std::isfinite(p.const_term), Errc::BadParameters, "const_term must be finite");
  require(p.sigma_outer > 0.0 && p.sigma_inner >= 0.0 && p.sigma_inner < p.sigma_outer,
          Errc::BadParameters, "wall radii must satisfy 0 <= sigma_inner < sigma_outer");
  require(p.delta0 > 0.0 && p.eta0 > 0.0, Errc::BadParameters, "delta0, eta0 must be > 0");
  require(p.delta >= p.delta0, Errc::BadParameters, "delta below the assumption floor delta0");

  droplet_ = solve_droplet(p);
  require(p.log_coef == 0.0 || p.sigma_inner > 0.0 || droplet_.r_in > 0.0,
          Errc::BadParameters, "log term needs an inner wall or a positive inner radius");

  double margin = p.sigma_outer - droplet_.r_out;
  if (p.sigma_inner > 0.0) margin = std::min(margin, droplet_.r_in - p.sigma_inner);
  require(margin >= 2.0 * p.eta0, Errc::DropletTouchesWall,
          "dist(droplet, wall) = " + std::to_string(margin) + " < 2*eta0");
}

PotentialSpec PotentialSpec::ginibre() { return PotentialSpec(PotentialParams{}); }

PotentialSpec PotentialSpec::induced(int n, double s) {
  require(n >= 1 && s > 0.0 && s * s < static_cast<double>(n), Errc::BadParameters,
          "induced ensemble needs s^2 < n");
  PotentialParams p;
  p.delta = static_cast<double>(n) / (s * s);
  // g(1) = 1, g'(1) = 2 for g(r) = delta r^2 + a + b log(1/r).
  p.log_coef = 2.0 * p.delta - 2.0;
  p.const_term = 1.0 - p.delta;
  const double r_in = std::sqrt(1.0 - s * s / static_cast<double>(n));
  p.sigma_inner = (p.log_coef > 0.0) ? 0.5 * r_in : 0.0;
  p.sigma_outer = 2.0;
  const double margin = std::min(1.0, r_in - p.sigma_inner);
  p.eta0 = std::min(0.5, 0.5 * margin);
  return PotentialSpec(p);
}

PotentialSpec PotentialSpec::quartic(double delta, double c4, double wall) {
  require(c4 > 0.0, Errc::BadParameters, "quartic spec needs c4 > 0");
  PotentialParams p;
  p.delta = delta;
  p.quartic_coef = c4;
  p.sigma_outer = wall;
  const double margin = wall - solve_droplet(p).r_out;
  require(margin > 0.0, Errc::DropletTouchesWall, "quartic droplet exceeds the wall");
  p.eta0 = std::min(0.5, 0.5 * margin);
  return PotentialSpec(p);
}

double PotentialSpec::radial_value(double r) const {
  const double r2 = r * r;
  double v = p_.delta * r2 + p_.quartic_coef * r2 * r2 + p_.const_term;
  if (p_.log_coef > 0.0) v += p_.log_coef * (r > 0.0 ? -std::log(r) : kInf);
  return v;
}

double PotentialSpec::radial_derivative(double r) const {
  const double r2 = r * r;
  double v = 2.0 * p_.delta * r + 4.0 * p_.quartic_coef * r2 * r;
  if (p_.log_coef > 0.0) v -= p_.log_coef / r;
  return v;
}

double PotentialSpec::q(Complex z) const {
  if (!inside_wall(z)) return kInf;
  return radial_value(std::abs(z));
}

Complex PotentialSpec::grad(Complex z) const {
  const double r = std::abs(z);
  require(r < p_.sigma_outer && (p_.sigma_inner == 0.0 || r > p_.sigma_inner),
          Errc::OutsideDomain, "grad needs z in the interior of the wall");
  Complex out = p_.delta * std::conj(z);
  if (p_.log_coef > 0.0) {
    require(z != Complex(0.0, 0.0), Errc::PoleAtOrigin, "log term has a pole at 0");
    out -= p_.log_coef / (2.0 * z);
  }
  if (p_.quartic_coef > 0.0) out += 2.0 * p_.quartic_coef * (r * r) * std::conj(z);
  return out;
}

double PotentialSpec::laplacian(Complex z) const {
  const double r = std::abs(z);
  require(r < p_.sigma_outer && (p_.sigma_inner == 0.0 || r > p_.sigma_inner),
          Errc::OutsideDomain, "laplacian needs z in the interior of the wall");
  if (p_.log_coef > 0.0)
    require(z != Complex(0.0, 0.0), Errc::PoleAtOrigin, "log term has a pole at 0");
  return p_.delta + 4.0 * p_.quartic_coef * r * r;
}

Droplet PotentialSpec::droplet() const {
  require(hele_shaw(), Errc::NotHeleShaw, "closed-form droplet needs c4 = 0");
  double margin = p_.sigma_outer - droplet_.r_out;
  if (p_.sigma_inner > 0.0) margin = std::min(margin, droplet_.r_in - p_.sigma_inner);
  require(margin >= 2.0 * p_.eta0, Errc::DropletTouchesWall, "droplet touches the wall");
  return droplet_;
}

double PotentialSpec::obstacle(Complex z) const {
  require(hele_shaw(), Errc::NotHeleShaw, "obstacle function needs c4 = 0");
  const double r = std::abs(z);
  if (r < droplet_.r_in) return radial_value(droplet_.r_in);
  if (r > droplet_.r_out)
    return radial_value(droplet_.r_out) + 2.0 * std::log(r / droplet_.r_out);
  return radial_value(r);
}

double PotentialSpec::effective(Complex z) const {
  require(hele_shaw(), Errc::NotHeleShaw, "effective potential needs c4 = 0");
  if (!inside_wall(z)) return kInf;
  const double r = std::abs(z);
  if (droplet_.contains(r)) return 0.0;  // exact zero on the droplet by construction
  const double v = radial_value(r) - obstacle(z);
  return v > 0.0 ? v : 0.0;
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os << "Q = " << p_.delta << "|z|^2";
  if (p_.log_coef > 0.0) os << " + " << p_.log_coef << " log(1/|z|)";
  if (p_.quartic_coef > 0.0) os << " + " << p_.quartic_coef << "|z|^4";
  if (p_.const_term != 0.0) os << " + " << p_.const_term;
  os << " on [" << p_.sigma_inner << ", " << p_.sigma_outer << "]";
  return os.str();
}

Complex induced_center(int n, double s, double alpha) {
  require(n >= 1 && s > 0.0 && s * s < static_cast<double>(n), Errc::BadParameters,
          "induced center needs s^2 < n");
  const double mid = 0.5 * (1.0 + std::sqrt(1.0 - s * s / static_cast<double>(n)));
  return mid * std::polar(1.0, alpha);
}

Complex induced_rescale(int n, double s, double alpha, Complex z) {
  const Complex p = induced_center(n, s, alpha);
  const Complex rot = Complex(0.0, -1.0) * std::polar(1.0, alpha);
  return rot * (static_cast<double>(n) / s) * (z - p);
}

}  // namespace coulomb2d
