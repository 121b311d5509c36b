#pragma once

#include <cstddef>
#include <vector>

#include "kyleq/interp.hpp"
#include "kyleq/value_map.hpp"

namespace kyleq {

/// Economic primitives and derived constants.
///
/// sigma  volatility of the liquidity traders' demand (price per sqrt-time)
/// rho    market makers' absolute risk aversion
/// n_mm   number of market makers (Bertrand competition, >= 2)
/// c      drift coefficient sigma^2 * rho / (2 N) of the demand SDE
/// big_c  bound constant ||f||_inf * sqrt(2/(sigma^2 pi)) on H_y*sqrt(1-t)
/// c_star density-dominance constant exp(2 c big_c)
struct ModelParams {
  double sigma = 1.0;
  double rho = 1.0;
  int n_mm = 2;
  double c = 0.0;
  ValueMap f;
  double big_c = 0.0;
  double c_star = 1.0;
};

/// Validates primitives, computes derived constants, and cross-checks the two
/// equivalent expressions for c_star to machine precision.
ModelParams build_params(double sigma, double rho, int n_mm, ValueMap f);

/// Uniform computational grids. The y-grid is symmetric about zero with an
/// odd node count so y = 0 is a node; the time grid has n_t uniform steps on
/// [0,1] and fields are stored up to 1 - eps_terminal (eps_terminal is an
/// exact multiple of 1/n_t).
struct GridSpec {
  double y_max = 8.0;
  std::size_t n_y = 801;
  std::size_t n_t = 400;
  double eps_terminal = 2.5e-3;
  std::size_t n_z = 101;

  double dy() const { return 2.0 * y_max / static_cast<double>(n_y - 1); }
  double dt() const { return 1.0 / static_cast<double>(n_t); }
  UniformGrid y_grid() const { return {-y_max, dy(), n_y}; }

  void validate() const;
  static GridSpec defaults_for(double sigma);
};

/// Shared simulation/PDE time mesh: uniform steps of 1/n_t up to
/// refine_start, then distances to t = 1 shrinking geometrically
/// (ratio `shrink`) down to eps_min, and a final node at exactly 1.
struct TimeMesh {
  std::vector<double> t;

  std::size_t steps() const { return t.size() - 1; }
  double dt(std::size_t k) const { return t[k + 1] - t[k]; }

  static TimeMesh build(const GridSpec& grid, double refine_start = 0.95, double shrink = 0.85,
                        double eps_min = 1e-5);
};

}  // namespace kyleq
