#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "coulomb2d/potential.hpp"
#include "coulomb2d/sampler.hpp"
#include "coulomb2d/stats.hpp"
#include "coulomb2d/types.hpp"

namespace coulomb2d {

struct BBox {
  double xmin = -1.5, xmax = 1.5, ymin = -1.5, ymax = 1.5;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

// Histogram estimate of the one-point function against dA. estimate() is
// counts / (samples * bin_area_in_dA); errors are per-bin binomial.
class DensityField {
 public:
  DensityField(const BBox& bbox, int nx, int ny);

  void accumulate(const Configuration& config);
  void merge(const DensityField& other);

  const BBox& bbox() const { return bbox_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int64_t samples() const { return samples_; }
  int64_t spilled() const { return spilled_; }
  int64_t count(int ix, int iy) const { return counts_[idx(ix, iy)]; }
  int64_t total_count() const;

  double bin_area() const { return dx_ * dy_ / kPi; }  // dA units
  Complex bin_center(int ix, int iy) const;
  // bin containing z, or -1 when outside the box
  int bin_of(Complex z) const;

  double estimate(int ix, int iy) const;
  double stderror(int ix, int iy) const;
  double estimate_at(Complex z) const;  // nearest-bin lookup
  double stderror_at(Complex z) const;

 private:
  int idx(int ix, int iy) const { return iy * nx_ + ix; }
  BBox bbox_;
  int nx_, ny_;
  double dx_, dy_;
  int64_t samples_ = 0;
  int64_t spilled_ = 0;
  std::vector<int64_t> counts_;
};

// Radial histogram with per-bin sample variance (bins here can hold many
// particles per configuration, where a binomial error would be wrong).
class RadialField {
 public:
  RadialField(double r_lo, double r_hi, int bins);

  void accumulate(const Configuration& config);
  void merge(const RadialField& other);

  int bins() const { return bins_; }
  int64_t samples() const { return samples_; }
  double r_center(int i) const { return r_lo_ + (i + 0.5) * dr_; }
  double bin_area(int i) const;  // annulus area in dA units
  double estimate(int i) const;
  double stderror(int i) const;
  double estimate_at(double r) const;
  double stderror_at(double r) const;

 private:
  double r_lo_, r_hi_, dr_;
  int bins_;
  int64_t samples_ = 0;
  std::vector<double> sum_, sumsq_;
  std::vector<int64_t> scratch_;
};

// Microscopic frame: u = rotation * scale * (z - center). The inverse carries
// microscopic coordinates back to the plane; densities divide by scale^2.
struct RescaleFrame {
  Complex center{0.0, 0.0};
  double scale = 1.0;
  Complex rotation{1.0, 0.0};

  Complex to_micro(Complex z) const { return rotation * scale * (z - center); }
  Complex to_physical(Complex u) const { return center + std::conj(rotation) * u / scale; }
};

// Frame at p with scale sqrt(n * ddbar Q(p)).
RescaleFrame bulk_frame(const PotentialSpec& spec, int n, Complex p);
// Frame of the induced-ensemble strip map.
RescaleFrame induced_frame(int n, double s, double alpha);

struct Profile1D {
  std::vector<double> t;       // microscopic coordinate along the section
  std::vector<double> value;   // rescaled density
  std::vector<double> stderror;
};

// Rescaled density along the section u = t * dir (dir a unit complex), from
// an exact density callable (stderr = 0).
Profile1D section_profile(const std::function<double(Complex)>& density,
                          const RescaleFrame& frame, Complex dir, double t_lo,
                          double t_hi, int points);
// Same from a radial histogram (rotation-invariant ensembles).
Profile1D section_profile(const RadialField& field, const RescaleFrame& frame,
                          Complex dir, double t_lo, double t_hi, int points);

// Max of |p(t_i) - p(t_j)| / |t_i - t_j| over grid pairs at separation in [h, 2h].
double lipschitz_modulus(const Profile1D& p, double h);

int count_disk(const Configuration& config, Complex p, double r);

struct TailPoint {
  int m = 0;
  double prob = 0.0;
  double stderror = 0.0;
};

struct OvercrowdTail {
  std::vector<TailPoint> points;  // P(N >= m) for m = 0, 1, ...
  // least-squares fit of -log P(N >= m) by a m^2 - b m over observed m >= 1
  bool fit_ok = false;
  double fit_a = 0.0;
  double fit_b = 0.0;
};

OvercrowdTail overcrowd_tail(const std::vector<int>& counts, int64_t samples, int n);

// Theorem-shaped bound ratios from an exact or estimated density profile.
struct BoundReport {
  double fitted_c = 0.0;        // max R / (n delta min{1, n e^{-n beta q_eff}})
  double max_bulk_ratio = 0.0;  // same, restricted to the droplet
  bool exterior_ok = true;      // log R + n beta q_eff <= beta + log(n^2 delta) + 3 se
  double exterior_margin = kInf;
  std::vector<double> radii, density, ratio;
};

BoundReport bound_report(const PotentialSpec& spec, int n, double beta,
                         const std::function<double(double)>& radial_density,
                         const std::function<double(double)>& radial_stderr = {},
                         int grid_points = 600);

}  // namespace coulomb2d
