#include <cmath>

#include "coulomb2d/quadrature.hpp"
#include "coulomb2d/rng.hpp"
#include "coulomb2d/stats.hpp"
#include "doctest.h"

using namespace coulomb2d;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("polynomials and smooth integrands") {
  const auto q1 = integrate([](double x) { return x * x * x; }, 0.0, 2.0);
  CHECK(q1.value == doctest::Approx(4.0).epsilon(1e-13));

  // erf as the closed form for a Gaussian
  const auto q2 = integrate([](double x) { return std::exp(-x * x); }, -3.0, 5.0);
  const double exact = 0.5 * std::sqrt(kPi) * (std::erf(5.0) + std::erf(3.0));
  CHECK(q2.value == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("breakpoints resolve indicator edges") {
  auto f = [](double x) { return x < 0.37 ? 1.0 : 0.0; };
  const auto q = integrate(f, 0.0, 1.0, 1e-12, 0.0, {0.37});
  CHECK(q.value == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("log-domain integration handles extreme scales") {
  // int_0^10 e^{-1000 (x-3)^2} dx = sqrt(pi/1000)
  double rel_err = 0.0;
  const double got = integrate_log(
      [](double x) { return -1000.0 * (x - 3.0) * (x - 3.0); }, 0.0, 10.0, 1e-13, 4097,
      &rel_err);
  CHECK(got == doctest::Approx(std::log(std::sqrt(kPi / 1000.0))).epsilon(1e-11));
  CHECK(rel_err < 1e-10);

  // values far below double range still come back as finite logs
  const double tiny = integrate_log(
      [](double x) { return -2000.0 - x * x; }, 0.0, 1.0, 1e-12);
  CHECK(std::isfinite(tiny));
  CHECK(tiny < -2000.0);

  CHECK(integrate_log([](double) { return -kInf; }, 0.0, 1.0) == -kInf);
}

// Q0-moment of the uniform probability measure on the annulus A(R/2, R-2r):
// closed form (delta/2)((R-2r)^2 + (R/2)^2), always below delta R^2.
TEST_CASE("annulus moment closed form") {
  const double delta = 1.7, R = 0.3;
  for (double r : {0.001, 0.01, 0.02}) {
    const double a = 0.5 * R, b = R - 2.0 * r;
    const double norm = b * b - a * a;
    const auto q = integrate(
        [&](double s) { return 2.0 * delta * s * s * s / norm; }, a, b, 1e-13);
    const double closed = 0.5 * delta * (b * b + a * a);
    CHECK(q.value == doctest::Approx(closed).epsilon(1e-12));
    CHECK(closed < delta * R * R);
  }
}

// The microscopic annulus A(1/(2 sqrt(n delta)), 1/sqrt(n delta) - r) keeps
// its Q0-moment below 8/(5n) for every admissible r.
TEST_CASE("microscopic annulus moment bound") {
  const double delta = 2.3;
  const int n = 50;
  const double unit = 1.0 / std::sqrt(n * delta);
  for (double frac : {1e-6, 0.1, 0.24999}) {
    const double a = 0.5 * unit, b = unit - frac * unit;
    const double norm = b * b - a * a;
    const auto q = integrate(
        [&](double s) { return 2.0 * delta * s * s * s / norm; }, a, b, 1e-13);
    CHECK(q.value <= 8.0 / (5.0 * n));
  }
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("quadrature");  // rng shares the fast suite

TEST_CASE("counter rng is deterministic and keyed") {
  const CounterRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  CHECK(a.word(1, 2, 3) == b.word(1, 2, 3));
  CHECK(a.word(1, 2, 3) != c.word(1, 2, 3));
  CHECK(a.word(1, 2, 3) != d.word(1, 2, 3));
  CHECK(a.word(1, 2, 3) != a.word(1, 2, 4));
}

TEST_CASE("uniform and gaussian moments") {
  const CounterRng rng(7, 0);
  RunningStat u, g;
  for (int i = 0; i < 200000; ++i) {
    u.add(rng.uniform(0, i, 0));
    const auto [x, y] = rng.gaussian_pair(1, i, 0);
    g.add(x);
    g.add(y);
  }
  CHECK(u.mean() == doctest::Approx(0.5).epsilon(0.005));
  CHECK(u.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.02));
  CHECK(std::abs(g.mean()) < 0.01);
  CHECK(g.variance() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_SUITE_END();
