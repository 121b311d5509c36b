#pragma once

#include <cmath>
#include <vector>

namespace kyleq {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Centered Gaussian density with variance v: q(v,x) = exp(-x^2/2v)/sqrt(2 pi v).
inline double gauss_q(double v, double x) {
  return kInvSqrt2Pi / std::sqrt(v) * std::exp(-0.5 * x * x / v);
}

/// Standard normal CDF via erfc; accurate in both tails.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

/// Inverse standard normal CDF, p in (0,1).
/// Rational approximation polished with Halley steps; relative accuracy
/// near machine precision away from the information-theoretic limit of
/// double-rounded CDF values.
double norm_cdf_inv(double p);

/// Bachelier-type call value E[(Z*s - k)^+] for Z standard normal, s >= 0.
inline double gauss_call(double s, double k) {
  if (s <= 0.0) return k < 0.0 ? -k : 0.0;
  const double d = k / s;
  return s * (norm_pdf(d) - d * (1.0 - norm_cdf(d)));
}

/// Nodes and weights of n-point Gauss-Hermite quadrature for
/// integrals of the form  int f(x) exp(-x^2) dx = sum w_i f(x_i).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussHermite(int n);

  /// E[f(m + s Z)] with Z standard normal.
  template <typename F>
  double expectation(F&& f, double m, double s) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(m + s * kSqrt2 * nodes[i]);
    return acc / std::sqrt(kPi);
  }
};

}  // namespace kyleq
