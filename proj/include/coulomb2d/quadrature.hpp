#pragma once

#include <functional>
#include <vector>

#include "coulomb2d/types.hpp"

namespace coulomb2d {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Adaptive composite Gauss-Legendre quadrature. Panels are bisected until the
// refinement ratio (parent panel vs. its two halves) meets the tolerance.
// Throws QuadratureFailure if the error estimate cannot be driven below
// tolerance within the depth budget.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 0.0,
                           const std::vector<double>& breakpoints = {});

// Integral of exp(log_f(r)) dr over [a, b], returned as a logarithm.
// Intended for sharply peaked positive integrands whose values under- or
// overflow double range: a coarse scan locates the active region and the
// adaptive rule integrates exp(log_f - max) there. Returns -inf for an
// identically negligible integrand. If rel_err is given it receives the
// step-halving estimate of the relative error.
double integrate_log(const std::function<double(double)>& log_f, double a, double b,
                     double rel_tol = 1e-12, int scan_points = 2049,
                     double* rel_err = nullptr);

}  // namespace coulomb2d
