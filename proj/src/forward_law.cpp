#include "kyleq/forward_law.hpp"

#include <algorithm>
#include <cmath>

#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"
#include "kyleq/parallel.hpp"
#include "kyleq/rng.hpp"
#include "kyleq/stats.hpp"

namespace kyleq {

namespace {

// Bernoulli function x / (e^x - 1) of the Scharfetter-Gummel flux.
double bernoulli(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return x / std::expm1(x);
}

struct Tridiag {
  std::vector<double> lower, diag, upper;
  explicit Tridiag(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
};

// Conservative flux operator L for phi_t = d/dy [ D phi_y + a(y) phi ]
// with zero flux at both walls; exact on exponential steady states.
Tridiag sg_operator(const UniformGrid& y, double D, const std::vector<double>& a_mid) {
  const std::size_t n = y.n;
  Tridiag L(n);
  const double r = D / (y.dx * y.dx);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) {
      const double w = a_mid[i] * y.dx / D;
      L.diag[i] -= r * bernoulli(w);
      L.upper[i] = r * bernoulli(-w);
    }
    if (i > 0) {
      const double w = a_mid[i - 1] * y.dx / D;
      L.diag[i] -= r * bernoulli(-w);
      L.lower[i] = r * bernoulli(w);
    }
  }
  return L;
}

void thomas_solve(const Tridiag& A, std::vector<double>& rhs, std::vector<double>& scratch_c,
                  std::vector<double>& scratch_d) {
  const std::size_t n = rhs.size();
  scratch_c.resize(n);
  scratch_d.resize(n);
  double beta = A.diag[0];
  scratch_d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    scratch_c[i] = A.upper[i - 1] / beta;
    beta = A.diag[i] - A.lower[i] * scratch_c[i];
    scratch_d[i] = (rhs[i] - A.lower[i] * scratch_d[i - 1]) / beta;
  }
  rhs[n - 1] = scratch_d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = scratch_d[i] - scratch_c[i + 1] * rhs[i + 1];
}

// Midpoint advection coefficients a(y) = c * y * H_y(t_mid, y) at half nodes.
std::vector<double> advection_mid(const UniformGrid& y, double c, const FieldRow& row) {
  std::vector<double> a(y.n - 1);
  for (std::size_t i = 0; i + 1 < y.n; ++i) {
    const double ym = y[i] + 0.5 * y.dx;
    const double hy = 0.5 * (row.Hy[i] + row.Hy[i + 1]);
    a[i] = c * ym * hy;
  }
  return a;
}

double plain_mass(const std::vector<double>& phi, double dy) {
  CompensatedSum s;
  for (double v : phi) s.add(v);
  return s.value() * dy;
}

// One theta-step of phi_t = L phi from told to tnew with the operator frozen
// at the midpoint row.
void theta_step(std::vector<double>& phi, const UniformGrid& y, double D, double c,
                const FieldRow& mid_row, double dt, double theta, std::vector<double>& rhs,
                std::vector<double>& sc, std::vector<double>& sd) {
  const auto a = advection_mid(y, c, mid_row);
  const Tridiag L = sg_operator(y, D, a);
  const std::size_t n = y.n;
  rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = phi[i];
    if (theta < 1.0) {
      const double ex = (1.0 - theta) * dt;
      double acc = L.diag[i] * phi[i];
      if (i > 0) acc += L.lower[i] * phi[i - 1];
      if (i + 1 < n) acc += L.upper[i] * phi[i + 1];
      v += ex * acc;
    }
    rhs[i] = v;
  }
  Tridiag A(n);
  for (std::size_t i = 0; i < n; ++i) {
    A.diag[i] = 1.0 - theta * dt * L.diag[i];
    A.lower[i] = -theta * dt * L.lower[i];
    A.upper[i] = -theta * dt * L.upper[i];
  }
  thomas_solve(A, rhs, sc, sd);
  phi.swap(rhs);
}

}  // namespace

DensityEvolution evolve_density_from(const PricingRuleField& field, const ModelParams& params,
                                     const TimeMesh& mesh, double t0, double y0) {
  const UniformGrid y = field.y();
  DensityEvolution evo;
  evo.y = y;
  // Sub-mesh from t0 (prepended) to 1.
  evo.mesh.t.push_back(t0);
  for (double t : mesh.t)
    if (t > t0 + 1e-12) evo.mesh.t.push_back(t);
  if (evo.mesh.t.size() < 3) throw ParamError("density evolution: start time too close to 1");

  const double D = 0.5 * params.sigma * params.sigma;
  const double dt0 = evo.mesh.t[1] - evo.mesh.t[0];
  // Mollified delta: one exact Euler step of diffusion + frozen drift.
  const double mu = -params.c * y0 * field.Hy(t0, y0);
  std::vector<double> phi(y.n);
  for (std::size_t i = 0; i < y.n; ++i)
    phi[i] = gauss_q(params.sigma * params.sigma * dt0, y[i] - y0 - mu * dt0);
  {
    const double m = plain_mass(phi, y.dx);
    for (auto& v : phi) v /= m;
  }
  evo.phi.push_back(phi);
  evo.mass_log.push_back(1.0);

  std::vector<double> rhs, sc, sd;
  const std::size_t steps = evo.mesh.steps();
  for (std::size_t k = 1; k < steps; ++k) {
    const double ta = evo.mesh.t[k];
    const double tb = evo.mesh.t[k + 1];
    const double dt = tb - ta;
    if (k == 1) {
      // Rannacher startup: two implicit-Euler half-steps damp the
      // mollified-delta modes before Crank-Nicolson takes over.
      const FieldRow r1 = field.row_at(std::min(ta + 0.25 * dt, 1.0 - 1e-12));
      theta_step(phi, y, D, params.c, r1, 0.5 * dt, 1.0, rhs, sc, sd);
      const FieldRow r2 = field.row_at(std::min(ta + 0.75 * dt, 1.0 - 1e-12));
      theta_step(phi, y, D, params.c, r2, 0.5 * dt, 1.0, rhs, sc, sd);
    } else {
      const FieldRow rm = field.row_at(std::min(0.5 * (ta + tb), 1.0 - 1e-12));
      theta_step(phi, y, D, params.c, rm, dt, 0.5, rhs, sc, sd);
    }
    double neg = 0.0;
    for (auto& v : phi) {
      if (v < neg) neg = v;
      if (v < 0.0) v = 0.0;
    }
    if (neg < -1e-10)
      throw StabilityError("density evolution: negative density; increase grid.n_t");
    const double m = plain_mass(phi, y.dx);
    if (std::abs(m - 1.0) > 1e-5)
      throw StabilityError("density evolution: mass drift above 1e-5; increase grid.n_t");
    for (auto& v : phi) v /= m;
    evo.mass_log.push_back(m);
    evo.phi.push_back(phi);
  }
  return evo;
}

DensityEvolution evolve_density(const PricingRuleField& field, const ModelParams& params,
                                const GridSpec& grid) {
  const TimeMesh mesh = TimeMesh::build(grid);
  return evolve_density_from(field, params, mesh, 0.0, 0.0);
}

Cdf law_from_density(const DensityEvolution& evo, const ModelParams& params, bool validate) {
  Cdf out;
  out.y = evo.y;
  const auto& phi = evo.at_time_one();
  auto P = cum_trapezoid(phi, evo.y.dx);
  const double total = P.back();
  out.P.resize(evo.y.n);
  out.Pprime.resize(evo.y.n);
  for (std::size_t i = 0; i < evo.y.n; ++i) {
    out.P[i] = P[i] / total;
    out.Pprime[i] = phi[i] / total;
  }
  out.validate_shape();
  if (validate) {
    out.d_report = validate_law_bounds(out, params);
    out.d_flagged = out.d_report.all_ok();
  }
  return out;
}

Cdf law_Y1(const PricingRuleField& field, const ModelParams& params, const GridSpec& grid,
           bool validate) {
  const DensityEvolution evo = evolve_density(field, params, grid);
  return law_from_density(evo, params, validate);
}

McLawOracle mc_law_oracle(const PricingRuleField& field, const ModelParams& params,
                          const TimeMesh& mesh, std::size_t n_paths, std::uint64_t seed) {
  if (n_paths < 1000) throw ParamError("mc oracle: need at least 1e3 paths");
  const UniformGrid y = field.y();
  const std::size_t m = mesh.steps();
  // Drift rows at mesh nodes; the last interior node carries the left-point
  // drift of the final step.
  std::vector<double> row_times(mesh.t.begin(), mesh.t.end() - 1);
  const auto rows = materialize_rows(field, row_times);
  const FieldRow terminal_row = field.row_at(1.0);

  // B(1, y) = -(c / sigma^2) int_0^y x h'(x) dx, for the exact weight form.
  const double s2 = params.sigma * params.sigma;
  std::vector<double> xhp(y.n);
  for (std::size_t i = 0; i < y.n; ++i) xhp[i] = y[i] * terminal_row.Hy[i];
  auto cumG = cum_trapezoid(xhp, y.dx);
  const double g0 = cumG[y.n / 2];  // y = 0 is a node
  for (auto& v : cumG) v -= g0;

  McLawOracle out;
  out.direct.resize(n_paths);
  out.brownian.resize(n_paths);
  out.weights.resize(n_paths);
  const double weight_cap = std::exp(2.0 * params.c * field.bound_c());
  std::vector<double> hy0(m + 1);
  for (std::size_t k = 0; k < m; ++k) hy0[k] = rows[k].Hy[y.n / 2];
  hy0[m] = terminal_row.Hy[y.n / 2];

  parallel_for(n_paths, [&](std::size_t p) {
    // Direct Euler-Maruyama of the drifted SDE.
    {
      NormalStream rng(seed, p);
      double Y = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double dt = mesh.dt(k);
        const double hy = cubic_eval(y, rows[k].Hy, std::clamp(Y, y.front(), y.back()));
        Y += -params.c * Y * hy * dt + params.sigma * std::sqrt(dt) * rng.normal();
      }
      out.direct[p] = Y;
    }
    // Brownian path reweighted by the Girsanov ratio in its pathwise form
    // M_1 = exp(B(1, sW_1) + c I1 - c^2/2 I2).
    {
      NormalStream rng(seed, n_paths + p);
      double W = 0.0;
      double i1 = 0.0, i2 = 0.0;
      double f1_prev = 0.0, f2_prev = 0.0;
      for (std::size_t k = 0; k <= m; ++k) {
        const double t = mesh.t[k];
        const double sw = std::clamp(params.sigma * W, y.front(), y.back());
        const double hy = (k < m) ? cubic_eval(y, rows[k].Hy, sw)
                                  : cubic_eval(y, terminal_row.Hy, sw);
        const double f1 = hy - 0.5 * hy0[k];
        const double f2 = W * W * hy * hy;
        if (k > 0) {
          const double dt = t - mesh.t[k - 1];
          i1 += 0.5 * (f1 + f1_prev) * dt;
          i2 += 0.5 * (f2 + f2_prev) * dt;
        }
        f1_prev = f1;
        f2_prev = f2;
        if (k < m) W += std::sqrt(mesh.dt(k)) * rng.normal();
      }
      const double sw1 = params.sigma * W;
      const double B1 = -(params.c / s2) * cubic_eval(y, cumG, std::clamp(sw1, y.front(), y.back()));
      out.brownian[p] = sw1;
      out.weights[p] = std::exp(B1 + params.c * i1 - 0.5 * params.c * params.c * i2);
    }
  });

  for (double w : out.weights) out.max_weight = std::max(out.max_weight, w);
  if (out.max_weight > weight_cap * (1.0 + 1e-6))
    throw ResolutionError("mc oracle: Girsanov weight exceeds e^{2cC}; refine time steps near 1");

  // 50-quantile probe agreement between the two estimators.
  std::vector<double> sorted = out.direct;
  std::sort(sorted.begin(), sorted.end());
  out.agree_3se = true;
  out.ks_direct_vs_weighted = 0.0;
  const std::size_t n = n_paths;
  for (int j = 0; j < 50; ++j) {
    const double q = (j + 0.5) / 50.0;
    const double x = sorted[static_cast<std::size_t>(q * static_cast<double>(n - 1))];
    const double p1 = ecdf_at(sorted, x);
    const double se1 = std::sqrt(p1 * (1.0 - p1) / static_cast<double>(n));
    const auto wp = weighted_ecdf_at(out.brownian, out.weights, x);
    const double diff = std::abs(p1 - wp.value);
    out.ks_direct_vs_weighted = std::max(out.ks_direct_vs_weighted, diff);
    if (diff > 3.0 * std::sqrt(se1 * se1 + wp.se * wp.se)) out.agree_3se = false;
  }
  return out;
}

}  // namespace kyleq
