#include "coulomb2d/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace coulomb2d {

DensityField::DensityField(const BBox& bbox, int nx, int ny)
    : bbox_(bbox), nx_(nx), ny_(ny) {
  require(nx >= 1 && ny >= 1, Errc::BadParameters, "field needs positive bin counts");
  require(bbox.xmax > bbox.xmin && bbox.ymax > bbox.ymin, Errc::BadParameters,
          "field needs a nonempty bbox");
  dx_ = bbox.width() / nx;
  dy_ = bbox.height() / ny;
  counts_.assign(static_cast<size_t>(nx) * ny, 0);
}

int DensityField::bin_of(Complex z) const {
  const int ix = static_cast<int>(std::floor((z.real() - bbox_.xmin) / dx_));
  const int iy = static_cast<int>(std::floor((z.imag() - bbox_.ymin) / dy_));
  if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return -1;
  return idx(ix, iy);
}

void DensityField::accumulate(const Configuration& config) {
  for (const Complex& z : config) {
    const int b = bin_of(z);
    if (b < 0)
      ++spilled_;
    else
      ++counts_[b];
  }
  ++samples_;
}

void DensityField::merge(const DensityField& other) {
  require(other.nx_ == nx_ && other.ny_ == ny_ && other.bbox_.xmin == bbox_.xmin &&
              other.bbox_.xmax == bbox_.xmax && other.bbox_.ymin == bbox_.ymin &&
              other.bbox_.ymax == bbox_.ymax,
          Errc::BadParameters, "merging fields with different grids");
  for (size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  samples_ += other.samples_;
  spilled_ += other.spilled_;
}

int64_t DensityField::total_count() const {
  int64_t t = 0;
  for (int64_t c : counts_) t += c;
  return t;
}

Complex DensityField::bin_center(int ix, int iy) const {
  return {bbox_.xmin + (ix + 0.5) * dx_, bbox_.ymin + (iy + 0.5) * dy_};
}

double DensityField::estimate(int ix, int iy) const {
  if (samples_ == 0) return 0.0;
  return static_cast<double>(counts_[idx(ix, iy)]) / (samples_ * bin_area());
}

double DensityField::stderror(int ix, int iy) const {
  if (samples_ == 0) return 0.0;
  const double p = static_cast<double>(counts_[idx(ix, iy)]) / samples_;
  return std::sqrt(std::max(0.0, p * (1.0 - p) / samples_)) / bin_area();
}

double DensityField::estimate_at(Complex z) const {
  const int b = bin_of(z);
  return b < 0 ? 0.0 : static_cast<double>(counts_[b]) / (samples_ * bin_area());
}

double DensityField::stderror_at(Complex z) const {
  const int b = bin_of(z);
  if (b < 0 || samples_ == 0) return 0.0;
  const double p = static_cast<double>(counts_[b]) / samples_;
  return std::sqrt(std::max(0.0, p * (1.0 - p) / samples_)) / bin_area();
}

RadialField::RadialField(double r_lo, double r_hi, int bins)
    : r_lo_(r_lo), r_hi_(r_hi), bins_(bins) {
  require(bins >= 1 && r_hi > r_lo && r_lo >= 0.0, Errc::BadParameters,
          "radial field needs 0 <= r_lo < r_hi");
  dr_ = (r_hi - r_lo) / bins;
  sum_.assign(bins, 0.0);
  sumsq_.assign(bins, 0.0);
  scratch_.assign(bins, 0);
}

void RadialField::accumulate(const Configuration& config) {
  std::fill(scratch_.begin(), scratch_.end(), 0);
  for (const Complex& z : config) {
    const double r = std::abs(z);
    const int i = static_cast<int>(std::floor((r - r_lo_) / dr_));
    if (i >= 0 && i < bins_) ++scratch_[i];
  }
  for (int i = 0; i < bins_; ++i) {
    const double k = static_cast<double>(scratch_[i]);
    sum_[i] += k;
    sumsq_[i] += k * k;
  }
  ++samples_;
}

void RadialField::merge(const RadialField& other) {
  require(other.bins_ == bins_ && other.r_lo_ == r_lo_ && other.r_hi_ == r_hi_,
          Errc::BadParameters, "merging radial fields with different grids");
  for (int i = 0; i < bins_; ++i) {
    sum_[i] += other.sum_[i];
    sumsq_[i] += other.sumsq_[i];
  }
  samples_ += other.samples_;
}

double RadialField::bin_area(int i) const {
  const double a = r_lo_ + i * dr_;
  const double b = a + dr_;
  return b * b - a * a;
}

double RadialField::estimate(int i) const {
  if (samples_ == 0) return 0.0;
  return sum_[i] / (samples_ * bin_area(i));
}

double RadialField::stderror(int i) const {
  if (samples_ < 2) return 0.0;
  const double mean = sum_[i] / samples_;
  const double var = std::max(0.0, (sumsq_[i] - samples_ * mean * mean) / (samples_ - 1));
  return std::sqrt(var / samples_) / bin_area(i);
}

double RadialField::estimate_at(double r) const {
  const int i = static_cast<int>(std::floor((r - r_lo_) / dr_));
  return (i >= 0 && i < bins_) ? estimate(i) : 0.0;
}

double RadialField::stderror_at(double r) const {
  const int i = static_cast<int>(std::floor((r - r_lo_) / dr_));
  return (i >= 0 && i < bins_) ? stderror(i) : 0.0;
}

RescaleFrame bulk_frame(const PotentialSpec& spec, int n, Complex p) {
  RescaleFrame f;
  f.center = p;
  f.scale = std::sqrt(static_cast<double>(n) * spec.laplacian(p));
  return f;
}

RescaleFrame induced_frame(int n, double s, double alpha) {
  RescaleFrame f;
  f.center = induced_center(n, s, alpha);
  f.scale = static_cast<double>(n) / s;  // equals sqrt(n * delta) for delta = n/s^2
  f.rotation = Complex(0.0, -1.0) * std::polar(1.0, alpha);
  return f;
}

Profile1D section_profile(const std::function<double(Complex)>& density,
                          const RescaleFrame& frame, Complex dir, double t_lo,
                          double t_hi, int points) {
  require(points >= 2, Errc::BadParameters, "profile needs at least two points");
  const double rho_scale = frame.scale * frame.scale;
  Profile1D p;
  p.t.resize(points);
  p.value.resize(points);
  p.stderror.assign(points, 0.0);
  for (int i = 0; i < points; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (points - 1);
    p.t[i] = t;
    p.value[i] = density(frame.to_physical(t * dir)) / rho_scale;
  }
  return p;
}

Profile1D section_profile(const RadialField& field, const RescaleFrame& frame,
                          Complex dir, double t_lo, double t_hi, int points) {
  require(points >= 2, Errc::BadParameters, "profile needs at least two points");
  const double rho_scale = frame.scale * frame.scale;
  Profile1D p;
  p.t.resize(points);
  p.value.resize(points);
  p.stderror.resize(points);
  for (int i = 0; i < points; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (points - 1);
    const double r = std::abs(frame.to_physical(t * dir));
    p.t[i] = t;
    p.value[i] = field.estimate_at(r) / rho_scale;
    p.stderror[i] = field.stderror_at(r) / rho_scale;
  }
  return p;
}

double lipschitz_modulus(const Profile1D& p, double h) {
  const size_t n = p.t.size();
  double grid_step = kInf;
  for (size_t i = 1; i < n; ++i) grid_step = std::min(grid_step, p.t[i] - p.t[i - 1]);
  require(h >= 2.0 * grid_step, Errc::BadParameters,
          "separation must be at least two grid steps");
  double mod = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double sep = p.t[j] - p.t[i];
      if (sep < h) continue;
      if (sep > 2.0 * h) break;
      mod = std::max(mod, std::abs(p.value[j] - p.value[i]) / sep);
    }
  }
  return mod;
}

int count_disk(const Configuration& config, Complex p, double r) {
  require(r > 0.0, Errc::BadParameters, "disc radius must be > 0");
  const double r2 = r * r;
  int c = 0;
  for (const Complex& z : config) {
    const Complex d = z - p;
    if (d.real() * d.real() + d.imag() * d.imag() <= r2) ++c;
  }
  return c;
}

OvercrowdTail overcrowd_tail(const std::vector<int>& counts, int64_t samples, int n) {
  require(samples > 0 && static_cast<int64_t>(counts.size()) == samples,
          Errc::BadParameters, "tail needs one count per sample");
  int max_m = 0;
  for (int c : counts) max_m = std::max(max_m, c);
  max_m = std::min(max_m + 1, n + 1);

  OvercrowdTail tail;
  for (int m = 0; m <= max_m; ++m) {
    int64_t k = 0;
    for (int c : counts)
      if (c >= m) ++k;
    TailPoint pt;
    pt.m = m;
    pt.prob = static_cast<double>(k) / samples;
    pt.stderror = wilson_halfwidth(k, samples);
    tail.points.push_back(pt);
  }

  // fit -log P(N >= m) = a m^2 - b m over observed m >= 1
  double s4 = 0, s3 = 0, s2 = 0, sy2 = 0, sy1 = 0;
  int used = 0;
  for (const TailPoint& pt : tail.points) {
    if (pt.m < 1 || pt.prob <= 0.0) continue;
    const double y = -std::log(pt.prob);
    const double m = pt.m;
    s4 += m * m * m * m;
    s3 += m * m * m;
    s2 += m * m;
    sy2 += y * m * m;
    sy1 += y * m;
    ++used;
  }
  if (used >= 3) {
    const double det = s4 * s2 - s3 * s3;
    if (std::abs(det) > 1e-12 * s4 * s2) {
      tail.fit_a = (sy2 * s2 - sy1 * s3) / det;
      tail.fit_b = -(s4 * sy1 - s3 * sy2) / det;
      tail.fit_ok = tail.fit_a > 0.0;
    }
  }
  return tail;
}

BoundReport bound_report(const PotentialSpec& spec, int n, double beta,
                         const std::function<double(double)>& radial_density,
                         const std::function<double(double)>& radial_stderr,
                         int grid_points) {
  BoundReport rep;
  const double nd = static_cast<double>(n) * spec.delta();
  const Droplet d = spec.droplet();
  const double lo = spec.sigma_inner();
  const double hi = spec.sigma_outer();
  for (int i = 0; i < grid_points; ++i) {
    const double r = lo + (hi - lo) * (i + 0.5) / grid_points;
    const double qeff = spec.effective(Complex(r, 0.0));
    const double dens = radial_density(r);
    const double se = radial_stderr ? radial_stderr(r) : 0.0;
    const double envelope = nd * std::min(1.0, n * std::exp(-n * beta * qeff));
    const double ratio = dens / envelope;
    rep.radii.push_back(r);
    rep.density.push_back(dens);
    rep.ratio.push_back(ratio);
    rep.fitted_c = std::max(rep.fitted_c, ratio);
    if (d.contains(r)) rep.max_bulk_ratio = std::max(rep.max_bulk_ratio, ratio);
    // explicit global estimate, checked in the log domain:
    // log R + n beta q_eff <= beta + log(n^2 delta) + 3 se
    if (dens > 0.0 && qeff < kInf) {
      const double lhs = std::log(dens) + n * beta * qeff;
      const double rhs =
          beta + std::log(static_cast<double>(n) * n * spec.delta()) +
          (dens > 0.0 && se > 0.0 ? 3.0 * se / dens : 0.0);
      rep.exterior_margin = std::min(rep.exterior_margin, rhs - lhs);
      if (lhs > rhs) rep.exterior_ok = false;
    }
  }
  return rep;
}

}  // namespace coulomb2d
