#pragma once

#include <string>

#include "coulomb2d/types.hpp"

namespace coulomb2d {

// Droplet of the equilibrium measure: the annulus r_in <= |z| <= r_out.
struct Droplet {
  double r_in = 0.0;
  double r_out = 0.0;
  double width() const { return r_out - r_in; }
  bool contains(double r) const { return r >= r_in && r <= r_out; }
};

struct PotentialParams {
  double delta = 1.0;         // coefficient of |z|^2
  double log_coef = 0.0;      // coefficient b of b*log(1/|z|)
  double quartic_coef = 0.0;  // coefficient of |z|^4 (non-Hele-Shaw extension)
  double const_term = 0.0;    // additive constant
  double sigma_inner = 0.0;   // hard wall: sigma_inner <= |z| <= sigma_outer
  double sigma_outer = 2.0;
  double delta0 = 0.1;  // assumption floor for delta
  double eta0 = 0.5;    // assumption floor for dist(droplet, wall)/2
};

// External potential Q(z) = delta|z|^2 + b log(1/|z|) + c4 |z|^4 + a on the
// wall annulus, +inf outside. Immutable after construction; the droplet and
// the margin assumptions are validated up front.
class PotentialSpec {
 public:
  explicit PotentialSpec(const PotentialParams& p);

  static PotentialSpec ginibre();
  // Almost-circular induced ensemble: delta = n/s^2 with b, a fixed by the
  // boundary conditions g(1) = 1 and g'(1) = 2.
  static PotentialSpec induced(int n, double s);
  // Quartic oracle spec (non-Hele-Shaw): Q = delta|z|^2 + c4|z|^4 on D(0, wall).
  static PotentialSpec quartic(double delta, double c4, double wall = 2.0);

  double delta() const { return p_.delta; }
  double log_coef() const { return p_.log_coef; }
  double quartic_coef() const { return p_.quartic_coef; }
  double const_term() const { return p_.const_term; }
  double sigma_inner() const { return p_.sigma_inner; }
  double sigma_outer() const { return p_.sigma_outer; }
  double delta0() const { return p_.delta0; }
  double eta0() const { return p_.eta0; }
  bool hele_shaw() const { return p_.quartic_coef == 0.0; }

  // |Sigma| under dA = dxdy/pi.
  double area() const { return p_.sigma_outer * p_.sigma_outer - p_.sigma_inner * p_.sigma_inner; }

  bool inside_wall(Complex z) const {
    const double r = std::abs(z);
    return r >= p_.sigma_inner && r <= p_.sigma_outer;
  }

  // Radial profile g(r) and its derivative, ignoring the wall.
  double radial_value(double r) const;
  double radial_derivative(double r) const;

  // Q(z); +inf outside the wall (and at a log pole).
  double q(Complex z) const;

  // dQ = (d/dx - i d/dy)Q / 2. Requires z in the interior of the wall and
  // away from the origin when the log term is present.
  Complex grad(Complex z) const;

  // ddbar Q = Laplacian/4; the log term drops out away from the origin.
  double laplacian(Complex z) const;

  // Droplet by the Hele-Shaw closed form; rejects quartic specs.
  Droplet droplet() const;
  // Droplet for any radial member, from r g'(r) = 0 and r g'(r) = 2 by bisection.
  const Droplet& droplet_numeric() const { return droplet_; }

  // Obstacle function: Q on the droplet, flat in the hole, Q(r_out) + 2 log(r/r_out)
  // outside. Hele-Shaw only.
  double obstacle(Complex z) const;

  // Q_eff = Q - obstacle on the wall annulus, +inf outside. Zero exactly on the droplet.
  double effective(Complex z) const;

  std::string describe() const;

 private:
  PotentialParams p_;
  Droplet droplet_;
};

// Rescale map of the induced ensemble about p_n = (1 + sqrt(1 - s^2/n)) e^{i alpha} / 2.
Complex induced_center(int n, double s, double alpha);
Complex induced_rescale(int n, double s, double alpha, Complex z);

}  // namespace coulomb2d
