#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "kyleq/errors.hpp"

namespace kyleq {

/// Uniform grid x_i = x0 + i*dx, i = 0..n-1.
struct UniformGrid {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t n = 0;

  double operator[](std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  double front() const { return x0; }
  double back() const { return x0 + dx * static_cast<double>(n - 1); }
  bool contains(double x) const { return x >= front() - 1e-12 * dx && x <= back() + 1e-12 * dx; }

  /// Cell index such that x in [x_i, x_{i+1}], clamped to valid cells.
  std::size_t cell(double x) const {
    const double u = (x - x0) / dx;
    const auto i = static_cast<std::ptrdiff_t>(std::floor(u));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 2));
  }
};

/// Local cubic (Catmull-Rom) interpolation of smooth data on a uniform grid.
/// Falls back to linear in the first/last cell.
inline double cubic_eval(const UniformGrid& g, std::span<const double> f, double x) {
  const std::size_t i = g.cell(x);
  const double u = (x - g[i]) / g.dx;
  if (i == 0 || i + 2 >= g.n) return f[i] + u * (f[i + 1] - f[i]);
  const double fm = f[i - 1], f0 = f[i], f1 = f[i + 1], f2 = f[i + 2];
  const double a0 = f0;
  const double a1 = 0.5 * (f1 - fm);
  const double a2 = fm - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
  const double a3 = 0.5 * (f2 - fm) + 1.5 * (f0 - f1);
  return a0 + u * (a1 + u * (a2 + u * a3));
}

/// Derivative of the Catmull-Rom interpolant.
inline double cubic_eval_deriv(const UniformGrid& g, std::span<const double> f, double x) {
  const std::size_t i = g.cell(x);
  const double u = (x - g[i]) / g.dx;
  if (i == 0 || i + 2 >= g.n) return (f[i + 1] - f[i]) / g.dx;
  const double fm = f[i - 1], f0 = f[i], f1 = f[i + 1], f2 = f[i + 2];
  const double a1 = 0.5 * (f1 - fm);
  const double a2 = fm - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
  const double a3 = 0.5 * (f2 - fm) + 1.5 * (f0 - f1);
  return (a1 + u * (2.0 * a2 + u * 3.0 * a3)) / g.dx;
}

/// Monotone cubic (Fritsch-Carlson) interpolant of monotone data.
/// Preserves monotonicity; C1.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() < 2 || x_.size() != y_.size())
      throw ParamError("MonotoneCubic: need at least two matching nodes");
    build();
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }
  double min_y() const { return y_.front(); }
  double max_y() const { return y_.back(); }

  double operator()(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double u = (x - x_[i]) / h;
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  double deriv(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double u = (x - x_[i]) / h;
    const double g00 = 6.0 * u * (u - 1.0) / h;
    const double g10 = (1.0 - u) * (1.0 - 3.0 * u);
    const double g01 = -g00;
    const double g11 = u * (3.0 * u - 2.0);
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
  }

  /// Solve f(x) = v on the (strictly monotone increasing) interpolant by
  /// bisection on nodes followed by Newton polish.
  double invert(double v) const {
    if (v < y_.front() || v > y_.back()) throw RangeError("MonotoneCubic::invert: value outside range");
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (y_[mid] <= v ? lo : hi) = mid;
    }
    double a = x_[lo], b = x_[lo + 1];
    double x = 0.5 * (a + b);
    for (int it = 0; it < 60; ++it) {
      const double e = (*this)(x)-v;
      (e <= 0.0 ? a : b) = x;
      const double s = deriv(x);
      double xn = s > 0.0 ? x - e / s : 0.5 * (a + b);
      if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
      if (std::abs(xn - x) < 1e-15 * (1.0 + std::abs(x))) return xn;
      x = xn;
    }
    return x;
  }

 private:
  void build() {
    const std::size_t n = x_.size();
    d_.assign(n, 0.0);
    std::vector<double> s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_[0] = s[0];
    d_[n - 1] = s[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
      d_[i] = (s[i - 1] * s[i] <= 0.0) ? 0.0 : 2.0 * s[i - 1] * s[i] / (s[i - 1] + s[i]);
    // Fritsch-Carlson limiter.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (s[i] == 0.0) {
        d_[i] = d_[i + 1] = 0.0;
        continue;
      }
      const double a = d_[i] / s[i], b = d_[i + 1] / s[i];
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double t = 3.0 / std::sqrt(r);
        d_[i] = t * a * s[i];
        d_[i + 1] = t * b * s[i];
      }
    }
  }

  std::size_t locate(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> x_, y_, d_;
};

/// Cumulative trapezoid integral of samples on a uniform grid; out[0] = 0.
inline std::vector<double> cum_trapezoid(std::span<const double> f, double dx) {
  std::vector<double> out(f.size(), 0.0);
  double acc = 0.0, comp = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double inc = 0.5 * (f[i] + f[i - 1]) * dx - comp;
    const double t = acc + inc;
    comp = (t - acc) - inc;
    acc = t;
    out[i] = acc;
  }
  return out;
}

inline double trapezoid(std::span<const double> f, double dx) {
  if (f.empty()) return 0.0;
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
  return acc * dx;
}

/// Composite Simpson rule; requires an even interval count (odd sample
/// count), which holds for the symmetric y-grids used here.
inline double simpson(std::span<const double> f, double dx) {
  if (f.size() < 3 || f.size() % 2 == 0) return trapezoid(f, dx);
  double s4 = 0.0, s2 = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); i += 2) s4 += f[i];
  for (std::size_t i = 2; i + 1 < f.size(); i += 2) s2 += f[i];
  return dx / 3.0 * (f.front() + f.back() + 4.0 * s4 + 2.0 * s2);
}

}  // namespace kyleq
