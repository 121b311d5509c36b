#pragma once

#include <cstddef>
#include <vector>

#include "kyleq/interp.hpp"
#include "kyleq/value_map.hpp"

namespace kyleq {

struct Cdf;  // forward_law.hpp

/// Terminal pricing condition h on the y-grid: bounded, nondecreasing,
/// absolutely continuous, non-constant. Beyond the grid, h is extended by
/// affine tails h(y) = limit + slope * (y - edge); slopes are zero for
/// bounded value maps and nonzero only in synthetic test conditions.
class TerminalCondition {
 public:
  TerminalCondition(UniformGrid y, std::vector<double> values, std::vector<double> slopes,
                    double left_limit, double right_limit, double left_slope = 0.0,
                    double right_slope = 0.0);

  const UniformGrid& y() const { return y_; }
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& grid_slopes() const { return s_; }
  double h_inf() const { return h_inf_; }
  double left_limit() const { return lo_; }
  double right_limit() const { return hi_; }
  double left_slope() const { return lslope_; }
  double right_slope() const { return rslope_; }

  /// Evaluate h anywhere (monotone cubic on the grid, affine tails outside).
  double operator()(double x) const;
  double slope(double x) const;

  /// Unique root of h(y) = v on the grid; v must lie strictly inside the
  /// open grid range (h(y_min), h(y_max)).
  double invert(double v) const;

  std::size_t clamp_warnings() const { return clamp_warnings_; }
  void set_clamp_warnings(std::size_t n) { clamp_warnings_ = n; }

 private:
  UniformGrid y_;
  std::vector<double> v_, s_;
  double h_inf_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  double lslope_ = 0.0, rslope_ = 0.0;
  MonotoneCubic interp_;
  std::size_t clamp_warnings_ = 0;
};

/// Terminal condition h(y) = f(Phi^{-1}(P(y))) of the equilibrium map.
/// P values at interior nodes are clamped to [1e-12, 1-1e-12] with a warning
/// counter; a non-monotone P is an input error.
TerminalCondition terminal_from_cdf(const Cdf& P, const ValueMap& f);

}  // namespace kyleq
