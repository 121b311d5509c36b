#include "kyleq/value_map.hpp"

#include <cmath>

#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"

namespace kyleq {

ValueMap ValueMap::scaled_tanh(double a, double b, double m) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ParamError("value map scaled_tanh: amplitude and rate must be positive (strict increase)");
  ValueMap f;
  f.kind_ = ValueMapKind::ScaledTanh;
  f.params_ = {a, b, m};
  f.lo_ = m - a;
  f.hi_ = m + a;
  f.f_inf_ = std::max(std::abs(f.lo_), std::abs(f.hi_));
  return f;
}

ValueMap ValueMap::scaled_normal_cdf(double a, double m) {
  if (!(a > 0.0))
    throw ParamError("value map scaled_normal_cdf: amplitude must be positive (strict increase)");
  ValueMap f;
  f.kind_ = ValueMapKind::ScaledNormalCdf;
  f.params_ = {a, m};
  f.lo_ = m - a;
  f.hi_ = m + a;
  f.f_inf_ = std::max(std::abs(f.lo_), std::abs(f.hi_));
  return f;
}

ValueMap ValueMap::tabulated(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 4) throw ParamError("value map tabulated: need at least 4 nodes");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw ParamError("value map tabulated: abscissae must be increasing");
    if (!(y[i] > y[i - 1]))
      throw ParamError("value map tabulated: data must be strictly increasing (f bounded increasing)");
  }
  ValueMap f;
  f.kind_ = ValueMapKind::Tabulated;
  f.lo_ = y.front();
  f.hi_ = y.back();
  f.f_inf_ = std::max(std::abs(f.lo_), std::abs(f.hi_));
  f.params_.reserve(2 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.params_.push_back(x[i]);
    f.params_.push_back(y[i]);
  }
  f.table_ = MonotoneCubic(std::move(x), std::move(y));
  return f;
}

std::string ValueMap::kind_name() const {
  switch (kind_) {
    case ValueMapKind::ScaledTanh: return "scaled_tanh";
    case ValueMapKind::ScaledNormalCdf: return "scaled_normal_cdf";
    case ValueMapKind::Tabulated: return "tabulated";
  }
  return "?";
}

double ValueMap::value(double x) const {
  if (!std::isfinite(x)) throw ParamError("value map: argument must be finite");
  switch (kind_) {
    case ValueMapKind::ScaledTanh: return params_[0] * std::tanh(params_[1] * x) + params_[2];
    case ValueMapKind::ScaledNormalCdf: return params_[0] * (2.0 * norm_cdf(x) - 1.0) + params_[1];
    case ValueMapKind::Tabulated:
      if (x < table_.min_x() || x > table_.max_x())
        throw ExtrapolationError("value map tabulated: query outside table support");
      return table_(x);
  }
  return 0.0;
}

double ValueMap::slope(double x) const {
  if (!std::isfinite(x)) throw ParamError("value map: argument must be finite");
  switch (kind_) {
    case ValueMapKind::ScaledTanh: {
      const double c = std::cosh(params_[1] * x);
      return params_[0] * params_[1] / (c * c);
    }
    case ValueMapKind::ScaledNormalCdf: return 2.0 * params_[0] * norm_pdf(x);
    case ValueMapKind::Tabulated:
      if (x < table_.min_x() || x > table_.max_x())
        throw ExtrapolationError("value map tabulated: query outside table support");
      return table_.deriv(x);
  }
  return 0.0;
}

double ValueMap::inverse(double v) const {
  if (!(v > lo_ && v < hi_)) throw RangeError("value map inverse: value outside open range");
  switch (kind_) {
    case ValueMapKind::ScaledTanh: return std::atanh((v - params_[2]) / params_[0]) / params_[1];
    case ValueMapKind::ScaledNormalCdf:
      return norm_cdf_inv(0.5 * ((v - params_[1]) / params_[0] + 1.0));
    case ValueMapKind::Tabulated: return table_.invert(v);
  }
  return 0.0;
}

void ValueMap::validate() const {
  const bool tab = kind_ == ValueMapKind::Tabulated;
  const double lo = tab ? table_.min_x() : -10.0;
  const double hi = tab ? table_.max_x() : 10.0;
  const int n = 10000;
  double prev = value(lo);
  for (int i = 1; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1.0);
    const double v = value(x);
    if (!(v > prev)) throw ParamError("value map: not strictly increasing on probe grid");
    if (std::abs(v) > f_inf_ * (1.0 + 1e-12))
      throw ParamError("value map: unbounded (exceeds recorded supremum norm)");
    if (!(slope(x) > 0.0)) throw ParamError("value map: derivative not strictly positive");
    prev = v;
  }
}

}  // namespace kyleq
