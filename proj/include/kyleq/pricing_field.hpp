#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kyleq/model.hpp"
#include "kyleq/terminal.hpp"

namespace kyleq {

/// One time slice of the pricing rule and its first two y-derivatives.
struct FieldRow {
  double t = 0.0;
  std::vector<double> H, Hy, Hyy;
};

/// Gaussian convolution of a terminal condition at the given variance:
/// H(y) = int h(z) q(v, z - y) dz with closed-form affine tail corrections,
/// plus the first two derivatives. Uses a shared kernel table on the uniform
/// grid when sqrt(v) is resolvable and per-node Gauss-Hermite otherwise.
FieldRow gaussian_conv_row(const TerminalCondition& h, const UniformGrid& y, double variance);

/// Single-point version of the convolution (H, Hy, Hyy at one y).
void gaussian_conv_point(const TerminalCondition& h, double variance, double y, double* H,
                         double* Hy, double* Hyy);

/// The pricing rule H(t,y) solving the backward heat equation
/// H_t + (sigma^2/2) H_yy = 0 with terminal condition h, represented in
/// closed form by Gaussian convolution. Rows on the uniform time grid up to
/// 1 - eps_terminal are materialized; between there and t = 1 evaluation
/// falls back to on-demand quadrature. Immutable and safe to share.
class PricingRuleField {
 public:
  /// Closed-form solve; asserts the maximum principle, positivity and the
  /// C/sqrt(1-t) bound of H_y, the H_yy bound, and the H_y mass identity on
  /// every stored row (ConsistencyError on violation beyond tolerance).
  static PricingRuleField solve_heat(TerminalCondition h, const ModelParams& params,
                                     const GridSpec& grid);

  /// Rebuild from persisted rows (bundle load). Rows must be on the uniform
  /// time grid; `terminal` is the exact t = 1 slice.
  static PricingRuleField from_rows(TerminalCondition terminal, const ModelParams& params,
                                    const GridSpec& grid, std::vector<FieldRow> rows);

  const UniformGrid& y() const { return y_; }
  double sigma() const { return sigma_; }
  double eps_terminal() const { return eps_; }
  const TerminalCondition& terminal() const { return h_; }
  double h_inf() const { return h_.h_inf(); }
  /// Bound constant C_h = ||h||_inf sqrt(2/(sigma^2 pi)).
  double bound_c() const { return bound_c_; }
  bool analytic() const { return analytic_; }

  const std::vector<FieldRow>& stored_rows() const { return rows_; }

  /// Materialize the field at an arbitrary time t in [0,1). Exact
  /// convolution for analytic fields; time interpolation of stored rows for
  /// tabulated ones (quadrature from the terminal row past the stored range).
  FieldRow row_at(double t) const;

  /// Point evaluation (cubic in y within a materialized or interpolated row).
  double H(double t, double y) const;
  double Hy(double t, double y) const;
  double Hyy(double t, double y) const;

  /// y with H(1,y) = v on the terminal row; RangeError outside the open range.
  double invert_terminal(double v) const;

  /// Root curve xi(t) of H(t, xi) = v for each requested time.
  std::vector<double> xi_curve(double v, std::span<const double> ts) const;

 private:
  PricingRuleField() = default;
  void point_eval(double t, double yq, double* H, double* Hy, double* Hyy) const;
  FieldRow interp_row(double t) const;
  void check_invariants(const FieldRow& row) const;

  UniformGrid y_;
  double sigma_ = 1.0;
  double eps_ = 2.5e-3;
  double bound_c_ = 0.0;
  bool analytic_ = true;
  TerminalCondition h_{UniformGrid{-1.0, 1.0, 3}, {-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}, -1.0, 1.0};
  std::vector<FieldRow> rows_;  // uniform times 0, dt, ..., <= 1 - eps
  double stored_dt_ = 0.0;
};

/// Parallel materialization of rows at the given times (analytic fields
/// compute exact convolutions; deterministic, one row per output slot).
std::vector<FieldRow> materialize_rows(const PricingRuleField& field, std::span<const double> ts);

}  // namespace kyleq
