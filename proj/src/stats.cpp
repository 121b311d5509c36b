#include "kyleq/stats.hpp"

#include <algorithm>
#include <cmath>

namespace kyleq {

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    const double lo = f - static_cast<double>(i) / n;
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    d = std::max({d, lo, hi});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ecdf_at(std::span<const double> sorted, double x) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

WeightedCdfPoint weighted_ecdf_at(std::span<const double> samples, std::span<const double> weights,
                                  double x) {
  CompensatedSum w_sum, wx_sum;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    w_sum.add(weights[i]);
    if (samples[i] <= x) wx_sum.add(weights[i]);
  }
  const double W = w_sum.value();
  const double p = W > 0.0 ? wx_sum.value() / W : 0.0;
  // Linearized SE of the ratio estimator sum(w 1{.<=x}) / sum(w).
  CompensatedSum var;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double ind = samples[i] <= x ? 1.0 : 0.0;
    const double r = weights[i] * (ind - p);
    var.add(r * r);
  }
  const double se = W > 0.0 ? std::sqrt(var.value()) / W : 0.0;
  return {p, se};
}

}  // namespace kyleq
