#pragma once

#include <cstdint>
#include <vector>

#include "coulomb2d/oracle.hpp"
#include "coulomb2d/potential.hpp"
#include "coulomb2d/types.hpp"

namespace coulomb2d {

// Positive radial unit-mass density on a uniform grid. Values are carried as
// logarithms; exp() may underflow far outside the droplet, which the
// integrals treat as an exact zero (the 0 log 0 = 0 convention).
struct RadialDensity {
  std::vector<double> radii;
  std::vector<double> log_values;
  double grid_step = 0.0;

  double value(int i) const { return std::exp(log_values[i]); }
  // discrete mass 2 int delta r dr under the trapezoid rule
  double mass() const;
  // nearest-node lookup
  double value_at(double r) const;
  int node_of(double r) const;
};

RadialDensity uniform_density(const PotentialSpec& spec, int grid);
// classical equilibrium density ddbar Q restricted to the droplet (floored to
// keep logs finite), normalized
RadialDensity equilibrium_density(const PotentialSpec& spec, int grid);

// logarithmic potential U(r) = -2 int delta(rho) log(max(r, rho)) rho drho,
// O(m) by prefix sums
std::vector<double> log_potential_radial(const RadialDensity& delta);

// F_n = I_Q + E_Q/(n beta), I_Q = int U delta dA + int Q delta dA,
// E_Q = int delta log delta dA
double free_energy(const PotentialSpec& spec, double n_beta, const RadialDensity& delta);

struct ThermalSolveReport {
  int64_t iterations = 0;
  double free_energy = 0.0;
  double residual_sup = 0.0;   // variational-equation residual, middle 90% of droplet
  double mass_defect = 0.0;
  double last_step_l1 = 0.0;
  bool converged = false;
};

struct ThermalOptions {
  int grid = 8193;          // >= 512 per contract; odd keeps droplet edges on nodes
  double tol = 1e-5;        // residual target on the middle 90% of the droplet
  int64_t max_iters = 200000;
  double step_l1_target = 1e-10;
  bool warm_start = false;  // start from the equilibrium density
};

// Minimizes F_n by multiplicative mirror descent with backtracking; the free
// energy is non-increasing across iterations and the mass is renormalized to
// 1 after every step. Throws NoConvergence when the targets are not met.
std::pair<RadialDensity, ThermalSolveReport> solve_thermal(const PotentialSpec& spec,
                                                           double n, double beta,
                                                           const ThermalOptions& opt = {});

// Residual field of -delta + ddbar Q + (1/n beta) ddbar log delta on the grid
// (second-order radial stencils; symmetric limit at r = 0).
std::vector<double> variational_residual(const PotentialSpec& spec, double n_beta,
                                         const RadialDensity& delta);

struct BoundaryDiscrepancyReport {
  double rho_oracle_at_0 = 0.0;    // rescaled exact density at the edge
  double rho_thermal_at_0 = 0.0;   // rescaled thermal density at the edge
  double lap_log_rho_oracle = 0.0; // ddbar log of the oracle profile at 0 -> -2/pi
  double spuck_defect = 0.0;       // ddbar log rho~ - (rho~ - 1) at 0
  double gap = 0.0;                // n^{-1} sup_edge |R_n - n delta_n|
};

// Edge comparison of the beta = 1 one-point function and n * thermal density
// for the Ginibre spec, rescaled about p = 1.
BoundaryDiscrepancyReport boundary_discrepancy(const PotentialSpec& spec, int n,
                                               const ThermalOptions& opt = {});

struct BulkDiscrepancyReport {
  double lap_log_lap_q = 0.0;    // ddbar log ddbar Q(p), closed form
  double oracle_two_term = 0.0;  // R_n(p) - n ddbar Q(p) -> (1/2) lap_log_lap_q
  double thermal_two_term = 0.0; // n delta_n(p) - n ddbar Q(p) -> (1/beta) lap_log_lap_q
  double gap = 0.0;              // |R_n(p) - n delta_n(p)|
};

// Bulk comparison at |z| = p_radius for a non-Hele-Shaw (quartic) spec.
BulkDiscrepancyReport bulk_discrepancy(const PotentialSpec& spec, int n, double p_radius,
                                       const ThermalOptions& opt = {});

}  // namespace coulomb2d
