#pragma once

#include <cstdint>
#include <vector>

#include "kyleq/cdf.hpp"
#include "kyleq/model.hpp"
#include "kyleq/pricing_field.hpp"

namespace kyleq {

/// Probability density of the demand process on (time mesh, y-grid).
/// Rows are the density of Y_t under the market filtration dynamics
/// dY = sigma dB - c y H_y dt, evolved by a conservative Scharfetter-Gummel
/// flux discretization with Crank-Nicolson stepping.
struct DensityEvolution {
  TimeMesh mesh;
  UniformGrid y;
  std::vector<std::vector<double>> phi;  // one row per mesh node (from node 1)
  std::vector<double> mass_log;          // pre-renormalization mass per step

  const std::vector<double>& at_time_one() const { return phi.back(); }
};

/// Forward Fokker-Planck march of a point mass at (t0, y0) to t = 1.
/// The delta is mollified by one exact diffusion-with-drift step, i.e. the
/// march starts at the second mesh node with a drift-shifted Gaussian of
/// variance sigma^2 * (first step).
DensityEvolution evolve_density_from(const PricingRuleField& field, const ModelParams& params,
                                     const TimeMesh& mesh, double t0, double y0);

/// Density evolution of the equilibrium initial condition Y_0 = 0.
DensityEvolution evolve_density(const PricingRuleField& field, const ModelParams& params,
                                const GridSpec& grid);

/// Terminal law of Y_1: cumulative integral of the final density row.
/// When validate is set, the admissibility report is attached and the
/// d_flagged bit reflects it (diagnostics, not an exception).
Cdf law_Y1(const PricingRuleField& field, const ModelParams& params, const GridSpec& grid,
           bool validate = true);
Cdf law_from_density(const DensityEvolution& evo, const ModelParams& params, bool validate);

/// Monte-Carlo oracle for the time-1 law: a direct Euler-Maruyama estimator
/// and an importance-sampled estimator (Brownian paths reweighted by the
/// Girsanov ratio, bounded by c_star) that must agree within combined
/// statistical error.
struct McLawOracle {
  std::vector<double> direct;     // Euler terminal samples
  std::vector<double> brownian;   // sigma * W_1 samples
  std::vector<double> weights;    // Girsanov weights M_1 per Brownian path
  double max_weight = 0.0;
  double ks_direct_vs_weighted = 0.0;  // on a 50-quantile probe
  bool agree_3se = false;
};

McLawOracle mc_law_oracle(const PricingRuleField& field, const ModelParams& params,
                          const TimeMesh& mesh, std::size_t n_paths, std::uint64_t seed);

}  // namespace kyleq
