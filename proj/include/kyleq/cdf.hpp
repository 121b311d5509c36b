#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kyleq/interp.hpp"
#include "kyleq/model.hpp"

namespace kyleq {

/// Report of the admissibility checks on a terminal law: density dominance
/// by c_star * q(sigma^2, .) and the Brownian-scaled call-price lower bounds
/// on both tails.
struct LawBoundsReport {
  bool dominance_ok = false;
  bool upper_tail_ok = false;
  bool lower_tail_ok = false;
  double worst_dominance_margin = 0.0;  // min over nodes of c_star*q - P'
  double worst_dominance_y = 0.0;
  std::vector<double> tail_x;            // probe offsets
  std::vector<double> upper_margins;     // lhs - rhs, >= 0 when ok
  std::vector<double> lower_margins;
  bool all_ok() const { return dominance_ok && upper_tail_ok && lower_tail_ok; }
  std::string violated() const;
};

/// Absolutely continuous distribution function on the y-grid.
struct Cdf {
  UniformGrid y;
  std::vector<double> P;       // nondecreasing, ~0 at y_min, ~1 at y_max
  std::vector<double> Pprime;  // nonnegative density values
  bool d_flagged = false;      // set once validate_law_bounds passes
  LawBoundsReport d_report;

  /// Structural invariants: monotone, tail mass <= 1e-9, mass ~ 1,
  /// P(y) = int P' within 1e-6. Throws on violation.
  void validate_shape() const;

  double value(double x) const { return cubic_eval(y, P, x); }
  double density(double x) const { return cubic_eval(y, Pprime, x); }
  /// Quantile by monotone interpolation of the grid CDF.
  double quantile(double p) const;

  static Cdf gaussian(const UniformGrid& y, double sd);
};

/// Checks membership of the candidate law in the admissible envelope:
/// P' <= c_star q(sigma^2,.) nodewise (with roundoff floor), and the
/// call-price tail bounds at x in {0.25, 0.5, 1, 2} * sigma. Pure report.
LawBoundsReport validate_law_bounds(const Cdf& P, const ModelParams& params);

/// The call-price tail inequalities alone, as a pass/fail report with
/// margins (both sides by quadrature; right side in closed form).
LawBoundsReport tail_bounds_check(const Cdf& P, const ModelParams& params);

}  // namespace kyleq
