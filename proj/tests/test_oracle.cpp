#include <cmath>

#include "coulomb2d/estimator.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/quadrature.hpp"
#include "doctest.h"

using namespace coulomb2d;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("weighted norms against Gamma-integral closed forms") {
  // h_0 at n=1 on the truncated disc: (1 - e^-4)/1
  const RadialKernel k1(PotentialSpec::ginibre(), 1);
  CHECK(std::exp(k1.log_norm(0)) == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
  CHECK(std::exp(k1.log_norm(0)) == doctest::Approx(0.981684).epsilon(1e-6));

  // h_2 at n=4: (2 - 290 e^{-16}) / 64, an incomplete-Gamma value; the
  // truncation sits e^{-16} below the full-plane 2/64
  const RadialKernel k4(PotentialSpec::ginibre(), 4);
  const double truncated = (2.0 - 290.0 * std::exp(-16.0)) / 64.0;
  CHECK(std::exp(k4.log_norm(2)) == doctest::Approx(truncated).epsilon(1e-11));
  CHECK(std::abs(std::exp(k4.log_norm(2)) - 2.0 / 64.0) < 1e-4 * (2.0 / 64.0));

  // k! / n^{k+1} within the exponentially small truncation across k
  // (the wall misses a Q(k+1, 4n) tail, about 1e-7 relative at k = 7)
  const RadialKernel k8(PotentialSpec::ginibre(), 8);
  for (int k = 0; k < 8; ++k) {
    const double full = std::lgamma(k + 1.0) - (k + 1.0) * std::log(8.0);
    CHECK(k8.log_norm(k) == doctest::Approx(full).epsilon(1e-6));
  }
}

TEST_CASE("central value and positivity") {
  for (int n : {1, 4, 16}) {
    const RadialKernel kernel(PotentialSpec::ginibre(), n);
    const double expected = n / (1.0 - std::exp(-4.0 * n));
    CHECK(kernel.r1({0, 0}) == doctest::Approx(expected).epsilon(1e-12));
  }
  const RadialKernel kernel(PotentialSpec::ginibre(), 32);
  for (int i = 0; i < 200; ++i) {
    const double r = 2.0 * (i + 0.5) / 200;
    CHECK(kernel.r1({r, 0}) >= 0.0);
  }
  CHECK(kernel.r1({2.5, 0}) == 0.0);  // hard wall
}

TEST_CASE("density mass equals n") {
  for (int n : {1, 8, 64}) {
    const RadialKernel g(PotentialSpec::ginibre(), n);
    CHECK(std::abs(g.mass() - n) < 1e-8);
  }
  const RadialKernel ind(PotentialSpec::induced(64, 2.0), 64);
  CHECK(std::abs(ind.mass() - 64) < 1e-8);
}

TEST_CASE("monotone decay outside the droplet") {
  const RadialKernel kernel(PotentialSpec::ginibre(), 32);
  double prev = kernel.r1({1.0, 0});
  for (int i = 1; i <= 40; ++i) {
    const double r = 1.0 + i * 0.02;
    const double cur = kernel.r1({r, 0});
    CHECK(cur <= prev * (1 + 1e-12));
    prev = cur;
  }
}

TEST_CASE("edge profile approaches the erfc shape") {
  const int n = 64;
  const PotentialSpec spec = PotentialSpec::ginibre();
  const RadialKernel kernel(spec, n);
  const double scale = std::sqrt(static_cast<double>(n));
  double sup = 0.0;
  for (double u = -3.0; u <= 3.0; u += 0.1) {
    const double rho = kernel.r1({1.0 + u / scale, 0.0}) / n;
    sup = std::max(sup, std::abs(rho - 0.5 * std::erfc(std::sqrt(2.0) * u)));
  }
  CHECK(sup < 0.04);  // tightens to 0.02 by n = 256
}

TEST_CASE("upper bounds in theorem shape") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  std::vector<double> cs;
  for (int n : {16, 64}) {
    const RadialKernel kernel(spec, n);
    const double nd = n * spec.delta();
    double fitted = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double r = 2.0 * (i + 0.5) / 400;
      const double r1 = kernel.r1({r, 0});
      const double qeff = spec.effective({r, 0});
      // explicit global estimate e n^2 delta e^{-n qeff}
      if (r1 > 0.0)
        CHECK(std::log(r1) <= 1.0 + std::log(static_cast<double>(n) * n * spec.delta()) -
                                  n * qeff + 1e-9);
      fitted = std::max(fitted, r1 / (nd * std::min(1.0, n * std::exp(-n * qeff))));
    }
    cs.push_back(fitted);
  }
  CHECK(std::abs(cs[1] - cs[0]) / cs[0] < 0.10);
}

// sub-mean-value property of the determinantal density on microscopic discs
TEST_CASE("sub-mean-value inequality on bulk points") {
  const int n = 24;
  const PotentialSpec spec = PotentialSpec::ginibre();
  const RadialKernel kernel(spec, n);
  const double rho = 1.0 / std::sqrt(n * spec.delta());
  for (double rc : {0.0, 0.3, 0.6}) {
    const Complex z(rc, 0.0);
    // polar quadrature of R over D(z, rho)
    const auto disc = integrate(
        [&](double s) {
          const auto ang = integrate(
              [&](double th) { return kernel.r1(z + std::polar(s, th)); }, 0.0,
              2.0 * kPi, 1e-9);
          return s * ang.value / kPi;
        },
        0.0, rho, 1e-9);
    CHECK(n * spec.delta() * std::exp(1.0) * disc.value >= kernel.r1(z));
  }
}

TEST_CASE("single-particle density agrees with the kernel at beta 1") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  const RadialKernel k1(spec, 1);
  for (double r : {0.0, 0.5, 1.3, 1.9}) {
    CHECK(gibbs_density_n1(spec, 1.0, {r, 0}) ==
          doctest::Approx(k1.r1({r, 0})).epsilon(1e-10));
  }
  CHECK(gibbs_density_n1(spec, 1.0, {2.5, 0}) == 0.0);

  // normalization at other temperatures
  for (double beta : {0.5, 2.0}) {
    const auto q = integrate(
        [&](double r) { return 2.0 * r * gibbs_density_n1(spec, beta, {r, 0}); }, 0.0,
        2.0, 1e-10);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("two-particle normalization and determinantal cross-check") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  PairObservable one;
  one.rotation_invariant = true;
  one.fn = [](Complex, Complex) { return 1.0; };
  const QuadratureResult norm = expectation_n2(spec, 1.3, one);
  CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-6));

  // E N(0, 0.5) at beta 1 equals the integral of the n=2 determinantal density
  PairObservable count;
  count.rotation_invariant = true;
  count.support_r_lo = 0.0;
  count.support_r_hi = 0.5;
  count.radial_breakpoints = {0.5};
  count.fn = [](Complex z1, Complex z2) {
    return static_cast<double>(std::abs(z1) <= 0.5) +
           static_cast<double>(std::abs(z2) <= 0.5);
  };
  const QuadratureResult en = expectation_n2(spec, 1.0, count);
  const RadialKernel k2(spec, 2);
  const auto mass = integrate([&](double r) { return 2.0 * r * k2.r1({r, 0}); }, 0.0,
                              0.5, 1e-11);
  CHECK(std::abs(en.value - mass.value) < 1e-4);
}

TEST_CASE("berezin kernel identities at beta 1") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  const RadialKernel kernel(spec, 16);
  const Complex z(0.25, 0.1), w(-0.3, 0.45);
  // diagonal reproduces the density; off-diagonal stays positive
  CHECK(kernel.berezin(z, z) == doctest::Approx(kernel.r1(z)).epsilon(1e-10));
  CHECK(kernel.berezin(z, w) >= 0.0);
  CHECK(kernel.r2(z, w) <= kernel.r1(z) * kernel.r1(w));

  // int B(z, w) dA(w) = 1 by the reproducing property
  const auto q = integrate(
      [&](double r) {
        const auto ang = integrate(
            [&](double th) { return kernel.berezin(z, std::polar(r, th)); }, 0.0,
            2.0 * kPi, 1e-9);
        return r * ang.value / kPi;
      },
      0.0, 2.0, 1e-9);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_SUITE_END();
