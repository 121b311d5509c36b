#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kyleq/cdf.hpp"
#include "kyleq/forward_law.hpp"
#include "kyleq/model.hpp"
#include "kyleq/pricing_field.hpp"

namespace kyleq {

/// One application of the equilibrium map: terminal condition from the law,
/// closed-form heat solve, forward Fokker-Planck law of Y_1.
Cdf apply_equilibrium_map(const Cdf& P, const ModelParams& params, const GridSpec& grid,
                          bool validate = true);

struct FixedPointOptions {
  double damping = 0.5;     // P_{k+1} = (1-theta) P_k + theta T P_k
  double tol = 1e-4;        // sup-norm residual target
  std::size_t max_iter = 200;
  bool anderson = false;    // depth-3 Anderson acceleration
  std::optional<Cdf> start;  // default: Gaussian with sd sigma
};

struct FixedPointResult {
  Cdf P_star;
  std::vector<double> residuals;  // ||T P_k - P_k||_inf per iteration
  double damping = 0.5;
  bool converged = false;
  bool diverged = false;          // residual grew 10 times in a row
  std::string diagnostic;
  std::size_t iterations = 0;

  /// Final pricing rule built from P_star.
  PricingRuleField make_field(const ModelParams& params, const GridSpec& grid) const;
};

/// Damped Picard iteration of the equilibrium map on the admissible convex
/// set, starting from the Gaussian law unless overridden. Non-convergence is
/// a reported outcome carrying the residual history, not an exception.
FixedPointResult solve_fixed_point(const ModelParams& params, const GridSpec& grid,
                                   const FixedPointOptions& opts = {});

/// Residual of the map on a doubled-resolution grid (prolonged iterate),
/// for the refinement re-verification of a converged solution.
double refined_residual(const Cdf& P, const ModelParams& params, const GridSpec& grid);

/// Multi-start diagnostics: runs the solver from several admissible starts
/// and reports the maximal pairwise sup distance of the reached fixed points.
struct MultiStartResult {
  std::vector<FixedPointResult> runs;
  double max_pairwise_dist = 0.0;
  bool all_converged = false;
};
MultiStartResult solve_multi_start(const ModelParams& params, const GridSpec& grid,
                                   const FixedPointOptions& opts = {});

}  // namespace kyleq
