#include "kyleq/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"
#include "kyleq/terminal.hpp"

namespace kyleq {

namespace {

double sup_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Least-squares Anderson mixing (type II) over the last few residuals.
std::vector<double> anderson_combine(const std::vector<std::vector<double>>& iterates,
                                     const std::vector<std::vector<double>>& residuals,
                                     double damping) {
  const std::size_t m = iterates.size();
  const std::size_t n = iterates.back().size();
  if (m == 1) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = iterates[0][i] + damping * residuals[0][i];
    return out;
  }
  // Minimize || r_last + sum_j gamma_j (r_j - r_last) || over histories.
  const std::size_t k = m - 1;
  std::vector<std::vector<double>> dr(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) dr[j][i] = residuals[j][i] - residuals[k][i];
  // Normal equations with Tikhonov regularization.
  std::vector<double> A(k * k, 0.0), b(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += dr[a][i] * dr[c][i];
      A[a * k + c] = s + (a == c ? 1e-10 : 0.0);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += dr[a][i] * residuals[k][i];
    b[a] = -s;
  }
  // Gaussian elimination (k <= 3).
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(A[r * k + col]) > std::abs(A[piv * k + col])) piv = r;
    for (std::size_t c = 0; c < k; ++c) std::swap(A[col * k + c], A[piv * k + c]);
    std::swap(b[col], b[piv]);
    const double d = A[col * k + col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = A[r * k + col] / d;
      for (std::size_t c = col; c < k; ++c) A[r * k + c] -= f * A[col * k + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> gamma(k, 0.0);
  for (std::size_t r = k; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < k; ++c) s -= A[r * k + c] * gamma[c];
    gamma[r] = s / A[r * k + r];
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double xi = iterates[k][i] + damping * residuals[k][i];
    for (std::size_t j = 0; j < k; ++j)
      xi += gamma[j] * ((iterates[j][i] + damping * residuals[j][i]) -
                        (iterates[k][i] + damping * residuals[k][i]));
    out[i] = xi;
  }
  return out;
}

// Project mixed values back to a valid distribution function shape
// (monotone, clamped to [0,1]); density by centered differences.
Cdf rebuild_cdf(const UniformGrid& y, std::vector<double> values) {
  Cdf out;
  out.y = y;
  double run = 0.0;
  for (auto& v : values) {
    v = std::clamp(v, 0.0, 1.0);
    run = std::max(run, v);
    v = run;
  }
  out.P = std::move(values);
  out.Pprime.resize(y.n);
  for (std::size_t i = 0; i < y.n; ++i) {
    if (i == 0)
      out.Pprime[i] = (out.P[1] - out.P[0]) / y.dx;
    else if (i + 1 == y.n)
      out.Pprime[i] = (out.P[i] - out.P[i - 1]) / y.dx;
    else
      out.Pprime[i] = (out.P[i + 1] - out.P[i - 1]) / (2.0 * y.dx);
  }
  return out;
}

}  // namespace

Cdf apply_equilibrium_map(const Cdf& P, const ModelParams& params, const GridSpec& grid,
                          bool validate) {
  const TerminalCondition h = terminal_from_cdf(P, params.f);
  const PricingRuleField field = PricingRuleField::solve_heat(h, params, grid);
  return law_Y1(field, params, grid, validate);
}

PricingRuleField FixedPointResult::make_field(const ModelParams& params,
                                              const GridSpec& grid) const {
  return PricingRuleField::solve_heat(terminal_from_cdf(P_star, params.f), params, grid);
}

FixedPointResult solve_fixed_point(const ModelParams& params, const GridSpec& grid,
                                   const FixedPointOptions& opts) {
  if (!(opts.damping > 0.0 && opts.damping <= 1.0))
    throw ParamError("fixed_point.damping: must lie in (0,1]");
  if (!(opts.tol >= 1e-6)) throw ParamError("fixed_point.tol: must be at least 1e-6");

  FixedPointResult res;
  res.damping = opts.damping;
  Cdf P = opts.start ? *opts.start : Cdf::gaussian(grid.y_grid(), params.sigma);
  P.validate_shape();

  std::vector<std::vector<double>> hist_P, hist_R;
  std::size_t grew = 0;
  double prev_res = 1e300;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    const Cdf TP = apply_equilibrium_map(P, params, grid, /*validate=*/false);
    std::vector<double> resid(P.y.n);
    for (std::size_t i = 0; i < P.y.n; ++i) resid[i] = TP.P[i] - P.P[i];
    const double rnorm = sup_dist(TP.P, P.P);
    res.residuals.push_back(rnorm);
    res.iterations = it + 1;
    if (rnorm <= opts.tol) {
      res.converged = true;
      res.P_star = TP;  // the mapped iterate is the natural representative
      break;
    }
    grew = rnorm > prev_res ? grew + 1 : 0;
    prev_res = rnorm;
    if (grew >= 10) {
      res.diverged = true;
      res.diagnostic = "residual increased for 10 consecutive iterations; retry with smaller damping";
      res.P_star = P;
      break;
    }
    if (opts.anderson) {
      hist_P.push_back(P.P);
      hist_R.push_back(resid);
      if (hist_P.size() > 3) {
        hist_P.erase(hist_P.begin());
        hist_R.erase(hist_R.begin());
      }
      P = rebuild_cdf(P.y, anderson_combine(hist_P, hist_R, opts.damping));
    } else {
      std::vector<double> mixed(P.y.n);
      for (std::size_t i = 0; i < P.y.n; ++i)
        mixed[i] = (1.0 - opts.damping) * P.P[i] + opts.damping * TP.P[i];
      // Convex combination of admissible laws: densities mix the same way.
      Cdf nxt;
      nxt.y = P.y;
      nxt.P = std::move(mixed);
      nxt.Pprime.resize(P.y.n);
      for (std::size_t i = 0; i < P.y.n; ++i)
        nxt.Pprime[i] = (1.0 - opts.damping) * P.Pprime[i] + opts.damping * TP.Pprime[i];
      P = std::move(nxt);
    }
  }
  if (!res.converged && !res.diverged) {
    res.diagnostic = "max_iter exceeded before reaching tol";
    res.P_star = P;
  }
  if (res.converged) {
    res.P_star.d_report = validate_law_bounds(res.P_star, params);
    res.P_star.d_flagged = res.P_star.d_report.all_ok();
  }
  return res;
}

double refined_residual(const Cdf& P, const ModelParams& params, const GridSpec& grid) {
  GridSpec fine = grid;
  fine.n_y = 2 * grid.n_y - 1;
  fine.n_t = 2 * grid.n_t;
  const UniformGrid fy = fine.y_grid();
  Cdf Pf;
  Pf.y = fy;
  Pf.P.resize(fy.n);
  Pf.Pprime.resize(fy.n);
  for (std::size_t i = 0; i < fy.n; ++i) {
    Pf.P[i] = std::clamp(cubic_eval(P.y, P.P, fy[i]), 0.0, 1.0);
    Pf.Pprime[i] = std::max(cubic_eval(P.y, P.Pprime, fy[i]), 0.0);
  }
  // enforce monotonicity after interpolation
  for (std::size_t i = 1; i < fy.n; ++i) Pf.P[i] = std::max(Pf.P[i], Pf.P[i - 1]);
  const Cdf TPf = apply_equilibrium_map(Pf, params, fine, /*validate=*/false);
  double d = 0.0;
  for (std::size_t i = 0; i < fy.n; ++i) d = std::max(d, std::abs(TPf.P[i] - Pf.P[i]));
  return d;
}

MultiStartResult solve_multi_start(const ModelParams& params, const GridSpec& grid,
                                   const FixedPointOptions& opts) {
  // Admissible perturbed starts: Gaussian scales s <= 1 keep the density
  // dominated by c_star q(sigma^2, .) provided 1/s <= c_star; mixtures of
  // admissible laws stay admissible by convexity.
  std::vector<double> scales = {1.0, 0.95, 0.9, 0.85, 0.8};
  const double smin = 1.0 / params.c_star;
  for (auto& s : scales) s = std::max(s, std::min(1.0, smin * 1.05));
  MultiStartResult out;
  std::vector<std::future<FixedPointResult>> futs;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    futs.push_back(std::async(std::launch::async, [&, k] {
      FixedPointOptions o = opts;
      if (k == scales.size() - 1) {
        // mixture start
        Cdf a = Cdf::gaussian(grid.y_grid(), params.sigma);
        const Cdf b = Cdf::gaussian(grid.y_grid(), params.sigma * scales[1]);
        for (std::size_t i = 0; i < a.P.size(); ++i) {
          a.P[i] = 0.5 * (a.P[i] + b.P[i]);
          a.Pprime[i] = 0.5 * (a.Pprime[i] + b.Pprime[i]);
        }
        o.start = a;
      } else {
        o.start = Cdf::gaussian(grid.y_grid(), params.sigma * scales[k]);
      }
      return solve_fixed_point(params, grid, o);
    }));
  }
  for (auto& f : futs) out.runs.push_back(f.get());
  out.all_converged = true;
  for (const auto& r : out.runs) out.all_converged = out.all_converged && r.converged;
  for (std::size_t a = 0; a < out.runs.size(); ++a)
    for (std::size_t b = a + 1; b < out.runs.size(); ++b)
      out.max_pairwise_dist =
          std::max(out.max_pairwise_dist, sup_dist(out.runs[a].P_star.P, out.runs[b].P_star.P));
  return out;
}

}  // namespace kyleq
