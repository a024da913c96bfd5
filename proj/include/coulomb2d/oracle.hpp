#pragma once

#include <functional>
#include <vector>

#include "coulomb2d/potential.hpp"
#include "coulomb2d/quadrature.hpp"
#include "coulomb2d/types.hpp"

namespace coulomb2d {

// Weighted monomial norms h_k = int |z|^{2k} e^{-n Q} dA over the wall
// annulus. For a radial potential the monomials are orthogonal, so these
// norms diagonalize the beta = 1 determinantal kernel. Norms are kept as
// logarithms: h_k underflows double range already for moderate n.
class RadialKernel {
 public:
  RadialKernel(const PotentialSpec& spec, int n);

  const PotentialSpec& spec() const { return spec_; }
  int n() const { return n_; }
  double log_norm(int k) const { return log_norms_[k]; }
  double norm(int k) const { return std::exp(log_norms_[k]); }

  // One-point function R_n^{beta=1}(z) = e^{-nQ(z)} sum_k |z|^{2k} / h_k,
  // zero outside the wall. Terms are assembled in the log domain.
  double r1(Complex z) const;

  // Reproducing kernel K(z, w) = e^{-n(Q(z)+Q(w))/2} sum_k (z wbar)^k / h_k.
  Complex k(Complex z, Complex w) const;

  // Two-point function R_2(z, w) = R(z) R(w) - |K(z, w)|^2.
  double r2(Complex z, Complex w) const;

  // Macroscopic Berezin kernel B(z, w) = (R(z)R(w) - R_2(z, w)) / R(z).
  double berezin(Complex z, Complex w) const;

  // int R dA by independent radial quadrature; equals n up to quadrature error.
  double mass() const;

 private:
  PotentialSpec spec_;
  int n_;
  std::vector<double> log_norms_;
};

// Gibbs one-point density for a single particle:
// R_1^beta(z) = e^{-beta Q(z)} / int_Sigma e^{-beta Q} dA.
double gibbs_density_n1(const PotentialSpec& spec, double beta, Complex z);

// Observable for two-particle expectations. Must be symmetric in (z1, z2).
struct PairObservable {
  std::function<double(Complex, Complex)> fn;
  bool rotation_invariant = false;
  // Optional support hint: the observable vanishes unless |z1| or |z2| lies in
  // [support_r_lo, support_r_hi].
  double support_r_lo = 0.0;
  double support_r_hi = kInf;
  // Radii at which the observable is not smooth (indicator edges); used as
  // quadrature breakpoints.
  std::vector<double> radial_breakpoints;
};

struct N2Options {
  double rel_tol = 3e-7;
  int theta_points = 256;    // trapezoid points for the relative angle
  int rotation_points = 32;  // trapezoid points for the rotation average
};

// E[obs(z1, z2)] for two particles under the Gibbs measure, by reducing the
// 4D integral to 3D with rotational symmetry (z1 pinned to the positive real
// axis, weighted by the angular volume) plus a rotation average for
// observables that are not rotation invariant. Reports an error estimate from
// angular refinement and the radial tolerance.
QuadratureResult expectation_n2(const PotentialSpec& spec, double beta,
                                const PairObservable& obs, const N2Options& opt = {});

}  // namespace coulomb2d
