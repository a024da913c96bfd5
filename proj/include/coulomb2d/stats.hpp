#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "coulomb2d/types.hpp"

namespace coulomb2d {

// Compensated (Kahan) accumulator for long mixed-sign sums.
template <class T>
class KahanSum {
 public:
  void add(T x) {
    T y = x - comp_;
    T t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  T value() const { return sum_; }

 private:
  T sum_{};
  T comp_{};
};

// Welford running mean/variance.
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderror() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct BlockedStats {
  double mean = 0.0;
  double stderror = 0.0;
  int64_t blocks = 0;
  double z_score() const { return stderror > 0 ? mean / stderror : 0.0; }
};

// Mean and standard error from consecutive-block means, one series per chain.
// Blocking absorbs residual autocorrelation within each chain.
inline BlockedStats blocked_mean(const std::vector<std::vector<double>>& per_chain,
                                 int64_t target_blocks_per_chain = 32) {
  RunningStat blocks;
  for (const auto& series : per_chain) {
    const int64_t len = static_cast<int64_t>(series.size());
    if (len == 0) continue;
    int64_t nb = std::min<int64_t>(target_blocks_per_chain, len);
    int64_t bs = len / nb;
    if (bs < 1) bs = 1;
    nb = len / bs;
    for (int64_t b = 0; b < nb; ++b) {
      double s = 0.0;
      for (int64_t i = b * bs; i < (b + 1) * bs; ++i) s += series[i];
      blocks.add(s / static_cast<double>(bs));
    }
  }
  BlockedStats out;
  out.blocks = blocks.count();
  out.mean = blocks.mean();
  out.stderror = blocks.stderror();
  return out;
}

// Wilson score half-width for a binomial proportion k/n at z standard errors.
inline double wilson_halfwidth(int64_t k, int64_t n, double z = 1.0) {
  if (n <= 0) return 0.0;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  return z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

}  // namespace coulomb2d
