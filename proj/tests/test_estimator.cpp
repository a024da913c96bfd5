#include <cmath>

#include "coulomb2d/estimator.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/rng.hpp"
#include "coulomb2d/sampler.hpp"
#include "doctest.h"

using namespace coulomb2d;

TEST_SUITE_BEGIN("estimator");

TEST_CASE("histogram bookkeeping") {
  const BBox box{-1.0, 1.0, -1.0, 1.0};
  DensityField f(box, 4, 4);
  CHECK(f.total_count() == 0);

  // one point dropped at a bin center
  DensityField g(box, 4, 4);
  g.accumulate({Complex(-0.75, -0.75)});
  CHECK(g.count(0, 0) == 1);
  CHECK(g.total_count() == 1);
  CHECK(g.estimate(0, 0) == doctest::Approx(1.0 / g.bin_area()));

  // spill is tracked, not binned
  DensityField s(box, 4, 4);
  s.accumulate({Complex(5, 5), Complex(0, 0)});
  CHECK(s.total_count() == 1);
  CHECK(s.spilled() == 1);
}

TEST_CASE("merge equals concatenated accumulation") {
  const BBox box{-1.0, 1.0, -1.0, 1.0};
  const CounterRng rng(23, 0);
  std::vector<Configuration> configs;
  for (int i = 0; i < 50; ++i) {
    Configuration cfg(6);
    for (int j = 0; j < 6; ++j)
      cfg[j] = Complex(2 * rng.uniform(i, j, 0) - 1, 2 * rng.uniform(i, j, 1) - 1);
    configs.push_back(cfg);
  }
  DensityField a(box, 8, 8), b(box, 8, 8), all(box, 8, 8);
  for (int i = 0; i < 50; ++i) {
    (i < 25 ? a : b).accumulate(configs[i]);
    all.accumulate(configs[i]);
  }
  a.merge(b);
  CHECK(a.samples() == all.samples());
  for (int iy = 0; iy < 8; ++iy)
    for (int ix = 0; ix < 8; ++ix) CHECK(a.count(ix, iy) == all.count(ix, iy));
}

TEST_CASE("rescaled profiles from the exact density") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  const int n = 256;
  const RadialKernel kernel(spec, n);
  auto dens = [&](Complex z) { return kernel.r1(z); };

  const Profile1D bulk = section_profile(dens, bulk_frame(spec, n, {0, 0}), {1, 0},
                                         -1.0, 1.0, 21);
  CHECK(bulk.value[10] == doctest::Approx(1.0).epsilon(1e-6));

  const Profile1D edge = section_profile(dens, bulk_frame(spec, n, {1, 0}), {1, 0},
                                         -1.0, 1.0, 21);
  CHECK(edge.value[10] == doctest::Approx(0.5).epsilon(0.02));

  // far-exterior zoom sees the empty process
  const RescaleFrame far = bulk_frame(spec, n, {1.5, 0});
  const Profile1D empty = section_profile(dens, far, {1, 0}, -2.0, 2.0, 41);
  for (double v : empty.value) CHECK(v <= 1e-8);
}

TEST_CASE("lipschitz modulus on synthetic profiles") {
  Profile1D flat;
  for (int i = 0; i <= 40; ++i) {
    flat.t.push_back(-2.0 + i * 0.1);
    flat.value.push_back(3.14);
    flat.stderror.push_back(0.0);
  }
  CHECK(lipschitz_modulus(flat, 0.5) == 0.0);

  Profile1D linear = flat;
  for (size_t i = 0; i < linear.t.size(); ++i) linear.value[i] = linear.t[i];
  CHECK(lipschitz_modulus(linear, 0.5) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(lipschitz_modulus(flat, 0.05), Error);  // below two grid steps
}

TEST_CASE("disc counts") {
  Configuration cfg{Complex(0, 0), Complex(0.3, 0), Complex(1.2, 0)};
  CHECK(count_disk(cfg, {0, 0}, 0.5) == 2);
  CHECK(count_disk(cfg, {0, 0}, 2.0) == 3);
  CHECK(count_disk(cfg, {5, 5}, 0.5) == 0);
  CHECK(count_disk(cfg, {0.3, 0}, 0.0001) == 1);  // boundary inclusive
}

TEST_CASE("overcrowding tail basics") {
  std::vector<int> counts{0, 0, 1, 1, 1, 2, 2, 3, 4, 0};
  const OvercrowdTail tail = overcrowd_tail(counts, counts.size(), 16);
  CHECK(tail.points[0].prob == 1.0);                    // m = 0
  CHECK(tail.points[1].prob == doctest::Approx(0.7));   // m = 1
  CHECK(tail.points.back().m == 5);
  CHECK(tail.points.back().prob == 0.0);                // above the max observed
  for (size_t i = 1; i < tail.points.size(); ++i)
    CHECK(tail.points[i].prob <= tail.points[i - 1].prob);
  CHECK(tail.points[1].stderror > 0.0);
}

TEST_CASE("bound report from the exact density") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  const int n = 32;
  const RadialKernel kernel(spec, n);
  const BoundReport rep =
      bound_report(spec, n, 1.0, [&](double r) { return kernel.r1({r, 0}); });
  CHECK(rep.exterior_ok);
  CHECK(rep.fitted_c > 0.9);
  CHECK(rep.fitted_c < 3.0);
  CHECK(rep.max_bulk_ratio <= rep.fitted_c);
}

TEST_CASE("density mass and rotational symmetry from samples") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  SampleParams params;
  params.n = 8;
  params.chains = 4;
  params.thin = 5;
  params.burnin = 500;
  params.sweeps = params.burnin + 5000 * params.thin;
  params.seed = 13;

  const BBox box{-2.0, 2.0, -2.0, 2.0};
  DensityField field(box, 40, 40);
  run_chains(spec, params, [&](int) -> ConfigSink {
    return [&field](int64_t, const Configuration& cfg) { field.accumulate(cfg); };
  });

  // total mass: all particles stay inside the wall, so nothing spills
  CHECK(field.spilled() == 0);
  const double mass =
      static_cast<double>(field.total_count()) / field.samples();
  CHECK(mass == doctest::Approx(8.0));

  // angular variation across four sectors at a fixed radius band
  double sector[4] = {0, 0, 0, 0};
  double area[4] = {0, 0, 0, 0};
  for (int iy = 0; iy < 40; ++iy) {
    for (int ix = 0; ix < 40; ++ix) {
      const Complex z = field.bin_center(ix, iy);
      const double r = std::abs(z);
      if (r < 0.4 || r > 0.7) continue;
      double a = std::arg(z);
      if (a < 0) a += 2 * kPi;
      const int q = std::min(3, static_cast<int>(a / (0.5 * kPi)));
      sector[q] += field.count(ix, iy);
      area[q] += field.bin_area();
    }
  }
  const RadialKernel kernel(spec, params.n);
  for (int q = 0; q < 4; ++q) {
    const double est = sector[q] / (field.samples() * area[q]);
    const double se = std::sqrt(sector[q]) / (field.samples() * area[q]);
    CHECK(std::abs(est - kernel.r1({0.55, 0})) <= std::max(4.0 * se, 0.05 * kernel.r1({0.55, 0})));
  }
}

TEST_CASE("mcmc density against the oracle in the bulk") {
  const PotentialSpec spec = PotentialSpec::ginibre();
  const int n = 16;
  SampleParams params;
  params.n = n;
  params.chains = 4;
  params.thin = 10;
  params.burnin = 1000;
  params.sweeps = params.burnin + 4000 * params.thin;
  params.seed = 41;

  const double bin = 0.25 / std::sqrt(n * spec.delta());
  const BBox box{-1.5, 1.5, -1.5, 1.5};
  const int bins = static_cast<int>(std::ceil(3.0 / bin));
  DensityField field(box, bins, bins);
  run_chains(spec, params, [&](int) -> ConfigSink {
    return [&field](int64_t, const Configuration& cfg) { field.accumulate(cfg); };
  });

  const RadialKernel kernel(spec, n);
  int failures = 0, checked = 0;
  for (int iy = 0; iy < field.ny(); ++iy) {
    for (int ix = 0; ix < field.nx(); ++ix) {
      const Complex z = field.bin_center(ix, iy);
      if (std::abs(z) > 0.8) continue;
      const double exact = kernel.r1(z);
      ++checked;
      if (std::abs(field.estimate(ix, iy) - exact) >
          std::max(3.0 * field.stderror(ix, iy), 0.05 * exact))
        ++failures;
    }
  }
  CHECK(checked > 100);
  // 3 sigma gives a ~0.3% false-failure rate per bin
  CHECK(failures <= std::max(3, checked / 100));
}

TEST_SUITE_END();
