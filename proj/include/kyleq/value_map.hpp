#pragma once

#include <string>
#include <vector>

#include "kyleq/interp.hpp"

namespace kyleq {

enum class ValueMapKind { ScaledTanh, ScaledNormalCdf, Tabulated };

/// Bounded, strictly increasing map from the private signal to the asset's
/// fundamental value, V = f(eta) with eta standard normal.
///
/// Built-in kinds:
///   scaled_tanh        f(x) = a*tanh(b*x) + m
///   scaled_normal_cdf  f(x) = a*(2*Phi(x) - 1) + m
///   tabulated          monotone-cubic interpolation of strictly increasing
///                      bounded data (flat continuation outside support is
///                      rejected as an extrapolation error).
class ValueMap {
 public:
  static ValueMap scaled_tanh(double a, double b, double m = 0.0);
  static ValueMap scaled_normal_cdf(double a, double m = 0.0);
  static ValueMap tabulated(std::vector<double> x, std::vector<double> y);

  ValueMapKind kind() const { return kind_; }
  std::string kind_name() const;

  double value(double x) const;
  double slope(double x) const;
  /// Inverse of the map; v must lie strictly inside (lower, upper) limits.
  double inverse(double v) const;

  /// Supremum norm ||f||_inf.
  double f_inf() const { return f_inf_; }
  /// Range limits f(-inf), f(+inf) (endpoint values for tabulated data).
  double lower_limit() const { return lo_; }
  double upper_limit() const { return hi_; }

  /// Kind-specific coefficients, for persistence.
  const std::vector<double>& params() const { return params_; }

  /// Checks boundedness and strict monotonicity on a dense probe grid;
  /// throws ParamError naming the violated assumption.
  void validate() const;

 private:
  ValueMap() = default;
  ValueMapKind kind_ = ValueMapKind::ScaledTanh;
  std::vector<double> params_;
  double f_inf_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  MonotoneCubic table_;
};

}  // namespace kyleq
