#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kyleq {

/// Neumaier compensated accumulator; reduction order fixed by the caller.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += (std::abs(sum_) >= std::abs(x)) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streaming mean/variance accumulator with compensated sums.
class MeanVar {
 public:
  void add(double x) {
    n_ += 1;
    s_.add(x);
    s2_.add(x * x);
  }
  std::size_t count() const { return n_; }
  double mean() const { return n_ ? s_.value() / static_cast<double>(n_) : 0.0; }
  double variance() const {
    if (n_ < 2) return 0.0;
    const double m = mean();
    const double v = s2_.value() / static_cast<double>(n_) - m * m;
    return std::max(v, 0.0) * static_cast<double>(n_) / static_cast<double>(n_ - 1);
  }
  double stderr_mean() const {
    return n_ ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }
  void merge(const MeanVar& o) {
    n_ += o.n_;
    s_.add(o.s_.value());
    s2_.add(o.s2_.value());
  }

 private:
  std::size_t n_ = 0;
  CompensatedSum s_, s2_;
};

/// One-sample Kolmogorov-Smirnov statistic of samples against a CDF.
/// Samples need not be sorted.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS statistic between empirical CDFs of a and b.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Empirical CDF value of samples at probe x (samples sorted ascending).
double ecdf_at(std::span<const double> sorted, double x);

/// Weighted empirical CDF value and its standard error at probe x.
struct WeightedCdfPoint {
  double value = 0.0;
  double se = 0.0;
};
WeightedCdfPoint weighted_ecdf_at(std::span<const double> samples, std::span<const double> weights,
                                  double x);

}  // namespace kyleq
