#pragma once

#include <functional>
#include <vector>

#include "coulomb2d/estimator.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/potential.hpp"
#include "coulomb2d/quadrature.hpp"
#include "coulomb2d/sampler.hpp"
#include "coulomb2d/stats.hpp"
#include "coulomb2d/types.hpp"

namespace coulomb2d {

// Smooth compactly supported bump: f = exp(1 - rho^2/(rho^2 - |z-c|^2)) on
// D(c, rho), zero outside, with the holomorphic derivative in closed form.
class BumpFunction {
 public:
  BumpFunction(Complex center, double radius);
  // validates support against the wall with margin eta0
  BumpFunction(Complex center, double radius, const PotentialSpec& spec);

  Complex center() const { return center_; }
  double radius() const { return radius_; }
  double operator()(Complex z) const;
  Complex d(Complex z) const;  // (d/dx - i d/dy)/2 applied to f

 private:
  Complex center_;
  double radius_;
};

// W_n^+[f] = (1/beta) sum d f(z_j) - n sum (f dQ)(z_j)
//          + (1/2) sum_{j != k} (f(z_j) - f(z_k)) / (z_j - z_k).
// The pair sum is Kahan-compensated.
Complex ward_stat(const PotentialSpec& spec, double beta, const Configuration& config,
                  const BumpFunction& f);

struct WardTestResult {
  BlockedStats re, im;
  bool pass(double z_max = 3.0) const {
    return std::abs(re.z_score()) <= z_max && std::abs(im.z_score()) <= z_max;
  }
};

// E[W_2^+[f]] under the two-particle Gibbs measure, via expectation_n2. The
// rotation average of the statistic collapses analytically to the first
// circular Fourier coefficient of f, which makes the reduced observable
// rotation invariant and cheap to integrate.
QuadratureResult ward_expectation_n2(const PotentialSpec& spec, double beta,
                                     const BumpFunction& f, bool imaginary_part = false,
                                     const N2Options& opt = {});

// Chain-blocked mean/stderr of the statistic's real and imaginary parts.
WardTestResult ward_test(const std::vector<std::vector<Complex>>& per_chain_stats);

// log |ell_j(z)| of the weighted Lagrange interpolation function
// ell_j = q e^{-nQ/2} with ell_j(z_k) = delta_jk; -inf at the other nodes.
double lagrange_log_abs(const PotentialSpec& spec, const Configuration& config, int j,
                        Complex z);

struct IdentityCheck {
  double mc_mean = 0.0;
  double mc_stderror = 0.0;
  double reference = 0.0;
  double z_score = 0.0;
};

// Monte-Carlo mean of |ell_1(z)|^{2 beta} against (|Sigma|/n) * density(z).
IdentityCheck lagrange_identity_test(const PotentialSpec& spec, double beta,
                                     const std::vector<std::vector<Configuration>>& per_chain,
                                     Complex z, double reference_density);

// Anchored pair tallies on a square grid centered at the anchor point.
// Estimates the macroscopic Berezin kernel B(anchor, v) and its window mass.
class BerezinAccumulator {
 public:
  BerezinAccumulator(Complex anchor, double cell_size, int half_extent);

  void accumulate(const Configuration& config);
  void merge(const BerezinAccumulator& other);

  Complex anchor() const { return anchor_; }
  int extent() const { return 2 * half_ + 1; }
  double cell_area() const { return cell_ * cell_ / kPi; }
  Complex cell_center(int ix, int iy) const;
  int64_t samples() const { return samples_; }
  int64_t anchor_hits() const { return anchor_hits_; }

  double density(int ix, int iy) const;  // plain R estimate on the grid
  double r_anchor() const;               // R estimate on the anchor cell
  // Berezin estimate and a delta-method error bar, both against dA.
  double berezin(int ix, int iy) const;
  double berezin_stderror(int ix, int iy) const;
  // sum of B over the window; equals 1 when the window covers the gas
  double window_mass() const;

 private:
  int idx(int ix, int iy) const { return iy * extent() + ix; }
  int cell_of(Complex z) const;
  Complex anchor_;
  double cell_;
  int half_;
  int64_t samples_ = 0;
  int64_t anchor_hits_ = 0;
  std::vector<int64_t> counts_;       // plain occupation tallies
  std::vector<int64_t> pair_counts_;  // ordered pairs (anchored, other)
};

// Reference profiles and kernels of the limiting equations.
double bulk_kernel(double beta, Complex u, Complex v);
// screened form e^{-beta|u-v|^2} erfc-factor with the real combination
// Re(u+v); simple, with a closed-form v-mass, but not an exact solution of
// the limiting Ward equation
double boundary_kernel(double beta, Complex u, Complex v);
// holomorphic-pairing form e^{-beta|u-v|^2} |F(u + conj(v))|^2 / F(2 Re u),
// F(w) = erfc(sqrt(beta/2) w)/2: the edge kernel that solves the limiting
// Ward equation, and at beta = 1 the true edge Berezin kernel
double boundary_kernel_exact(double beta, Complex u, Complex v);
double erfc_profile(double beta, Complex u);
// F_s(x) = (1/sqrt(2 pi)) int_{-s/2}^{s/2} e^{-(x-t)^2/2} dt
double f_s_profile(double s, double x);
// closed form of int boundary_kernel(u, v) dA(v) as a function of Re u
double boundary_kernel_mass(double beta, double re_u);

// complementary error function of a complex argument (Faddeeva reduction)
Complex erfc_complex(Complex z);

enum class RefKernel { Bulk, Boundary, BoundaryExact };

// int kernel(u, v) dA(v) by polar/tensor quadrature over a window large
// enough that the Gaussian tail is below 1e-12.
QuadratureResult kernel_mass_quadrature(RefKernel kind, double beta, Complex u);

// int_cell 1/(w - v) dA(v) over the rectangle [x0,x1] x [y0,y1], in closed
// form; valid also when w lies inside the cell.
Complex cell_cauchy_integral(Complex w, double x0, double x1, double y0, double y1);

// five-point ddbar = Laplacian/4
double laplacian_fd(const std::function<double(Complex)>& f, Complex u, double h);

struct ResidualReport {
  std::vector<Complex> points;
  std::vector<double> residual_abs;
  double sup = 0.0;
};

struct ResidualOptions {
  BBox window{-1.0, 1.0, -1.0, 1.0};  // evaluation window for u
  double h_u = 0.1;                   // u-grid step (also the FD step)
  double v_halfwidth = 5.0;           // Cauchy integral window half-size, relative to u
  double h_v = 0.1;                   // v-grid cell size
};

// Residual of the limiting Ward equation
//   dbar_u int B(u,v)/(u-v) dA(v) = B(u,u) - 1 - (1/beta) ddbar log B(u,u)
// with the left side from grid quadrature of the Cauchy transform (singular
// cell by the exact closed form) and derivatives by central differences.
ResidualReport ward_equation_residual(const std::function<double(Complex, Complex)>& kernel,
                                      double beta, const ResidualOptions& opt = {});

}  // namespace coulomb2d
