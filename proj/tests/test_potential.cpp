#include <cmath>

#include "coulomb2d/potential.hpp"
#include "coulomb2d/quadrature.hpp"
#include "coulomb2d/rng.hpp"
#include "doctest.h"

using namespace coulomb2d;

namespace {

// central finite differences of Q, the cross-check for grad and laplacian
Complex grad_fd(const PotentialSpec& s, Complex z, double h) {
  const double dx = (s.q(z + Complex(h, 0)) - s.q(z - Complex(h, 0))) / (2 * h);
  const double dy = (s.q(z + Complex(0, h)) - s.q(z - Complex(0, h))) / (2 * h);
  return 0.5 * Complex(dx, -dy);
}

double lap_fd(const PotentialSpec& s, Complex z, double h) {
  return 0.25 *
         (s.q(z + Complex(h, 0)) + s.q(z - Complex(h, 0)) + s.q(z + Complex(0, h)) +
          s.q(z - Complex(0, h)) - 4.0 * s.q(z)) /
         (h * h);
}

PotentialSpec log_spec(double delta, double b) {
  PotentialParams p;
  p.delta = delta;
  p.log_coef = b;
  p.sigma_inner = 0.05;
  p.sigma_outer = 3.0;
  p.eta0 = 0.15;
  return PotentialSpec(p);
}

}  // namespace

TEST_SUITE_BEGIN("potential");

TEST_CASE("potential values and the hard wall") {
  const PotentialSpec g = PotentialSpec::ginibre();
  CHECK(g.q({0, 0}) == 0.0);
  CHECK(g.q({1, 0}) == 1.0);
  CHECK(g.q({3, 0}) == kInf);
  CHECK(g.q({0, 2.5}) == kInf);
}

TEST_CASE("gradient closed forms") {
  const PotentialSpec g = PotentialSpec::ginibre();
  CHECK(g.grad({1, 0}) == Complex(1, 0));
  CHECK(g.grad({0, 1}) == Complex(0, -1));

  const PotentialSpec lg = log_spec(1.0, 2.0);
  CHECK(std::abs(lg.grad({1, 0}) - Complex(0, 0)) < 1e-15);

  // cross-check against central differences away from the origin
  const CounterRng rng(5, 0);
  for (int i = 0; i < 50; ++i) {
    const double r = 0.3 + 1.5 * rng.uniform(0, i, 0);
    const double th = 2 * kPi * rng.uniform(0, i, 1);
    const Complex z = std::polar(r, th);
    for (const PotentialSpec& s : {g, lg}) {
      CHECK(std::abs(s.grad(z) - grad_fd(s, z, 1e-5)) <
            1e-6 * std::max(1.0, std::abs(s.grad(z))));
    }
  }
}

TEST_CASE("laplacian closed forms") {
  const PotentialSpec g = PotentialSpec::ginibre();
  CHECK(g.laplacian({0.3, 0.4}) == 1.0);

  const PotentialSpec q4 = PotentialSpec::quartic(1.0, 1.0);
  CHECK(q4.laplacian(std::polar(1.0, 0.77)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::abs(q4.laplacian({0.5, 0.1}) - lap_fd(q4, {0.5, 0.1}, 1e-4)) < 1e-6);

  const PotentialSpec lg = log_spec(2.0, 1.0);
  CHECK(lg.laplacian({0.5, 0}) == 2.0);  // log term is harmonic off the origin
  CHECK(std::abs(lg.laplacian({0.5, 0}) - lap_fd(lg, {0.5, 0}, 1e-4)) < 1e-5);
}

TEST_CASE("droplet radii and unit mass") {
  CHECK(PotentialSpec::ginibre().droplet().r_in == 0.0);
  CHECK(PotentialSpec::ginibre().droplet().r_out == doctest::Approx(1.0));

  const PotentialSpec ind = PotentialSpec::induced(100, 2.0);
  CHECK(ind.delta() == 25.0);
  CHECK(ind.log_coef() == 48.0);
  CHECK(ind.const_term() == -24.0);
  CHECK(ind.droplet().r_in == doctest::Approx(std::sqrt(0.96)).epsilon(1e-12));
  CHECK(ind.droplet().r_out == doctest::Approx(1.0).epsilon(1e-12));

  PotentialParams p;
  p.delta = 2.0;
  CHECK(PotentialSpec(p).droplet().r_out == doctest::Approx(1.0 / std::sqrt(2.0)));

  // unit mass of delta 1_S across a sweep of specs
  const CounterRng rng(11, 0);
  for (int i = 0; i < 40; ++i) {
    PotentialParams pp;
    pp.delta = 0.5 + 3.0 * rng.uniform(0, i, 0);
    pp.log_coef = i % 2 ? 0.0 : 0.5 + 2.0 * rng.uniform(0, i, 1);
    pp.sigma_outer = 6.0;
    if (pp.log_coef > 0) {
      const double r_in = std::sqrt(pp.log_coef / (2.0 * pp.delta));
      pp.sigma_inner = 0.25 * r_in;
      pp.eta0 = std::min(0.05, 0.3 * r_in);
    } else {
      pp.eta0 = 0.05;
    }
    const Droplet d = PotentialSpec(pp).droplet();
    CHECK(std::abs(pp.delta * (d.r_out * d.r_out - d.r_in * d.r_in) - 1.0) < 1e-12);
  }
}

TEST_CASE("induced boundary conditions hold numerically") {
  const PotentialSpec ind = PotentialSpec::induced(100, 2.0);
  CHECK(ind.radial_value(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double h = 1e-6;
  const double g1 = (ind.radial_value(1.0 + h) - ind.radial_value(1.0 - h)) / (2 * h);
  CHECK(g1 == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(PotentialSpec::induced(4, 2.0), Error);
}

TEST_CASE("spec validation") {
  PotentialParams p;
  p.delta = 0.05;  // below delta0
  CHECK_THROWS_AS(PotentialSpec{p}, Error);

  PotentialParams wall;
  wall.sigma_outer = 1.5;  // margin to the droplet edge below 2 eta0
  CHECK_THROWS_AS(PotentialSpec{wall}, Error);
  try {
    PotentialSpec bad(wall);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DropletTouchesWall);
  }

  PotentialParams logp;
  logp.log_coef = 5.0;
  logp.delta = 1.0;
  logp.sigma_outer = 4.0;
  // r_in > 0 makes the log pole harmless even with sigma_inner = 0
  CHECK_NOTHROW(PotentialSpec{logp});
}

TEST_CASE("errors carry the contracted codes") {
  const PotentialSpec q4 = PotentialSpec::quartic(1.0, 1.0);
  CHECK_THROWS_AS(q4.droplet(), Error);
  CHECK_THROWS_AS(q4.obstacle({0.5, 0}), Error);
  CHECK_THROWS_AS(q4.effective({0.5, 0}), Error);

  const PotentialSpec lg = log_spec(1.0, 2.0);
  CHECK_THROWS_AS(lg.grad({0, 0}), Error);
  CHECK_THROWS_AS(PotentialSpec::ginibre().grad({5, 0}), Error);
}

TEST_CASE("obstacle function closed form and quadrature cross-check") {
  const PotentialSpec g = PotentialSpec::ginibre();
  CHECK(g.obstacle({0.5, 0}) == doctest::Approx(0.25));
  CHECK(g.obstacle({1.1, 0}) ==
        doctest::Approx(1.0 + 2.0 * std::log(1.1)).epsilon(1e-12));
  CHECK(g.obstacle({1.1, 0}) == doctest::Approx(1.190620).epsilon(1e-6));

  // independent route: 2 int log max(|z|, rho) dsigma + matching constant
  const Droplet d = g.droplet();
  auto checked = [&](double r) {
    const auto q = integrate(
        [&](double rho) { return 2.0 * std::log(std::max(r, rho)) * 2.0 * rho; },
        d.r_in, d.r_out, 1e-12);
    const auto q_edge = integrate(
        [&](double rho) { return 2.0 * std::log(std::max(d.r_out, rho)) * 2.0 * rho; },
        d.r_in, d.r_out, 1e-12);
    return q.value + (g.radial_value(d.r_out) - q_edge.value);
  };
  for (double r : {1.05, 1.3, 1.9}) {
    CHECK(g.obstacle({r, 0}) == doctest::Approx(checked(r)).epsilon(1e-10));
  }

  // flat in the hole
  const PotentialSpec lg = log_spec(1.0, 0.5);
  const double rin = lg.droplet().r_in;
  CHECK(lg.obstacle({0.9 * rin, 0}) == doctest::Approx(lg.radial_value(rin)));
  CHECK(lg.obstacle({0.2 * rin, 0}) == doctest::Approx(lg.radial_value(rin)));
}

TEST_CASE("effective potential vanishes exactly on the droplet") {
  const PotentialSpec g = PotentialSpec::ginibre();
  CHECK(g.effective({1.0, 0}) == 0.0);
  CHECK(g.effective({1.1, 0}) == doctest::Approx(0.019380).epsilon(1e-4));
  CHECK(g.effective({2.5, 0}) == kInf);

  const Droplet d = g.droplet();
  for (int i = 0; i < 1000; ++i) {
    const double r = 2.0 * (i + 0.5) / 1000;
    const double v = g.effective({r, 0});
    CHECK(v >= 0.0);
    if (r >= d.r_in && r <= d.r_out) CHECK(v == 0.0);
    else CHECK(v > 0.0);
  }

  // quadratic growth just outside the edge
  for (double dd : {1e-2, 1e-3}) {
    const double ratio = g.effective({1.0 + dd, 0}) / (2.0 * g.delta() * dd * dd);
    CHECK(std::abs(ratio - 1.0) < 10.0 * dd);
  }
}

TEST_CASE("obstacle is C1 at the droplet edges") {
  const PotentialSpec lg = log_spec(1.0, 0.5);
  const Droplet d = lg.droplet();
  const double h = 1e-6;
  auto radial_obstacle = [&](double r) { return lg.obstacle({r, 0}); };
  for (double edge : {d.r_in, d.r_out}) {
    const double left = (radial_obstacle(edge) - radial_obstacle(edge - h)) / h;
    const double right = (radial_obstacle(edge + h) - radial_obstacle(edge)) / h;
    CHECK(std::abs(left - right) < 1e-4);
  }
  // the edge derivative comes out as 2/r_out
  const double deriv =
      (radial_obstacle(d.r_out + h) - radial_obstacle(d.r_out - h)) / (2 * h);
  CHECK(deriv == doctest::Approx(2.0 / d.r_out).epsilon(1e-6));
}

TEST_CASE("obstacle minorizes Q and has logarithmic growth") {
  const PotentialSpec g = PotentialSpec::ginibre();
  const CounterRng rng(3, 0);
  for (int i = 0; i < 200; ++i) {
    const Complex z = std::polar(2.0 * rng.uniform(0, i, 0), 2 * kPi * rng.uniform(0, i, 1));
    if (!g.inside_wall(z)) continue;
    CHECK(g.obstacle(z) <= g.q(z) + 1e-12);
  }
  for (double r : {1.5, 1.8, 1.99}) {
    CHECK(std::abs(g.obstacle({r, 0}) - 2.0 * std::log(r) - 1.0) < 1e-12);
  }
}

TEST_CASE("rescale map of the induced ensemble") {
  const int n = 100;
  const double s = 2.0;
  for (double alpha : {0.0, 0.7}) {
    const Complex p = induced_center(n, s, alpha);
    CHECK(std::abs(induced_rescale(n, s, alpha, p)) < 1e-15);
  }
  const Complex p0 = induced_center(n, s, 0.0);
  const Complex w = induced_rescale(n, s, 0.0, p0 + Complex(0, s / n));
  CHECK(std::abs(w - Complex(1, 0)) < 1e-12);

  const CounterRng rng(9, 0);
  for (int i = 0; i < 20; ++i) {
    const Complex a(rng.uniform(0, i, 0), rng.uniform(0, i, 1));
    const Complex b(rng.uniform(0, i, 2), rng.uniform(0, i, 3));
    const double got = std::abs(induced_rescale(n, s, 0.3, a) - induced_rescale(n, s, 0.3, b));
    CHECK(got == doctest::Approx(n / s * std::abs(a - b)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(induced_rescale(4, 2.0, 0.0, Complex(1, 0)), Error);
}

TEST_SUITE_END();
