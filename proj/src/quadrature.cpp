#include "coulomb2d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coulomb2d {

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGlN = 15;
constexpr double kGlX[kGlN] = {
    -0.98799251802048542849, -0.93727339240070590431, -0.84820658341042721620,
    -0.72441773136017004742, -0.57097217260853884754, -0.39415134707756336990,
    -0.20119409399743452230, 0.0,
    0.20119409399743452230,  0.39415134707756336990,  0.57097217260853884754,
    0.72441773136017004742,  0.84820658341042721620,  0.93727339240070590431,
    0.98799251802048542849};
constexpr double kGlW[kGlN] = {
    0.03075324199611726835, 0.07036604748810812471, 0.10715922046717193501,
    0.13957067792615431445, 0.16626920581699393355, 0.18616100001556221103,
    0.19843148532711157646, 0.20257824192556127288,
    0.19843148532711157646, 0.18616100001556221103, 0.16626920581699393355,
    0.13957067792615431445, 0.10715922046717193501, 0.07036604748810812471,
    0.03075324199611726835};

double gl_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < kGlN; ++i) s += kGlW[i] * f(c + h * kGlX[i]);
  return s * h;
}

struct Panel {
  double a, b, value;
  int depth;
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol,
                           const std::vector<double>& breakpoints) {
  QuadratureResult res;
  if (!(a < b)) return res;

  std::vector<double> cuts{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Panel> stack;
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p{cuts[i], cuts[i + 1], gl_panel(f, cuts[i], cuts[i + 1]), 0};
    total += p.value;
    stack.push_back(p);
  }

  constexpr int kMaxDepth = 44;
  double value = 0.0, err = 0.0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double left = gl_panel(f, p.a, m);
    const double right = gl_panel(f, m, p.b);
    const double refined = left + right;
    const double diff = std::abs(refined - p.value);
    total += refined - p.value;  // keep the running whole-interval estimate current
    const double tol_here =
        std::max(abs_tol, rel_tol * std::abs(total)) * (p.b - p.a) / (b - a);
    if (p.depth >= kMaxDepth ||
        diff <= std::max(tol_here, 4.0 * std::numeric_limits<double>::epsilon() *
                                       std::abs(refined))) {
      value += refined;
      err += diff;
      continue;
    }
    stack.push_back({p.a, m, left, p.depth + 1});
    stack.push_back({m, p.b, right, p.depth + 1});
  }
  res.value = value;
  res.error = err;
  // unresolved depth-limited panels surface here instead of looping forever
  require(res.error <= 30.0 * std::max(abs_tol, rel_tol * std::abs(res.value)) + 1e-300,
          Errc::QuadratureFailure, "panel refinement did not converge");
  return res;
}

double integrate_log(const std::function<double(double)>& log_f, double a, double b,
                     double rel_tol, int scan_points, double* rel_err) {
  require(a < b && scan_points >= 9, Errc::BadParameters, "integrate_log interval");
  if (rel_err) *rel_err = 0.0;
  const double h = (b - a) / (scan_points - 1);
  double peak = -kInf;
  std::vector<double> scan(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    scan[i] = log_f(a + i * h);
    peak = std::max(peak, scan[i]);
  }
  if (!std::isfinite(peak)) return -kInf;

  // Active region: everything within e^-700 of the peak, padded one cell.
  const double cutoff = peak - 700.0;
  int lo = scan_points - 1, hi = 0;
  for (int i = 0; i < scan_points; ++i) {
    if (scan[i] >= cutoff) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  const double ra = a + std::max(0, lo - 1) * h;
  const double rb = a + std::min(scan_points - 1, hi + 1) * h;

  auto scaled = [&](double r) {
    const double v = log_f(r) - peak;
    return v > -745.0 ? std::exp(v) : 0.0;
  };
  const QuadratureResult q = integrate(scaled, ra, rb, rel_tol);
  if (q.value <= 0.0) return -kInf;
  if (rel_err) *rel_err = q.error / q.value;
  return peak + std::log(q.value);
}

}  // namespace coulomb2d
