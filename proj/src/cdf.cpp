#include "kyleq/cdf.hpp"

#include <algorithm>
#include <cmath>

#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"

namespace kyleq {

std::string LawBoundsReport::violated() const {
  std::string out;
  if (!dominance_ok) out += "dominance ";
  if (!upper_tail_ok) out += "upper_tail ";
  if (!lower_tail_ok) out += "lower_tail ";
  if (!out.empty()) out.pop_back();
  return out;
}

void Cdf::validate_shape() const {
  if (P.size() != y.n || Pprime.size() != y.n)
    throw ParamError("cdf: array sizes must match the y-grid");
  if (P.front() > 1e-9) throw ParamError("cdf: mass below the grid exceeds 1e-9");
  if (1.0 - P.back() > 1e-9) throw ParamError("cdf: mass above the grid exceeds 1e-9");
  for (std::size_t i = 0; i < y.n; ++i) {
    if (i > 0 && P[i] < P[i - 1] - 1e-12) throw ParamError("cdf: not nondecreasing");
    if (Pprime[i] < -1e-12) throw ParamError("cdf: negative density");
  }
  const auto integ = cum_trapezoid(Pprime, y.dx);
  double worst = 0.0;
  for (std::size_t i = 0; i < y.n; ++i)
    worst = std::max(worst, std::abs(P[i] - P.front() - integ[i]));
  if (worst > 1e-6) throw ParamError("cdf: P does not integrate its density (sup err > 1e-6)");
}

double Cdf::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw RangeError("cdf quantile: p must be in (0,1)");
  if (p <= P.front()) return y.front();
  if (p >= P.back()) return y.back();
  std::size_t lo = 0, hi = y.n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (P[mid] <= p ? lo : hi) = mid;
  }
  const double den = P[hi] - P[lo];
  const double w = den > 0.0 ? (p - P[lo]) / den : 0.5;
  return y[lo] + w * y.dx;
}

Cdf Cdf::gaussian(const UniformGrid& yg, double sd) {
  Cdf out;
  out.y = yg;
  out.P.resize(yg.n);
  out.Pprime.resize(yg.n);
  for (std::size_t i = 0; i < yg.n; ++i) {
    out.P[i] = norm_cdf(yg[i] / sd);
    out.Pprime[i] = norm_pdf(yg[i] / sd) / sd;
  }
  return out;
}

namespace {

// int_x^{y_max} (y - x) P'(y) dy with the kink cell integrated against the
// linear interpolant of P' (the integrand has a derivative jump at x).
double upper_call_integral(const Cdf& P, double x) {
  const UniformGrid& g = P.y;
  if (x >= g.back()) return 0.0;
  double acc = 0.0;
  if (x <= g.front()) {
    std::vector<double> f(g.n);
    for (std::size_t i = 0; i < g.n; ++i) f[i] = (g[i] - x) * P.Pprime[i];
    return trapezoid(f, g.dx);
  }
  const std::size_t i = g.cell(x);
  const double a = P.Pprime[i];
  const double b = (P.Pprime[i + 1] - P.Pprime[i]) / g.dx;
  const double L = g[i + 1] - x;
  const double c0 = a + b * (x - g[i]);
  acc += c0 * L * L / 2.0 + b * L * L * L / 3.0;
  // smooth remainder over [y_{i+1}, y_max]
  double prev = (g[i + 1] - x) * P.Pprime[i + 1];
  for (std::size_t k = i + 2; k < g.n; ++k) {
    const double cur = (g[k] - x) * P.Pprime[k];
    acc += 0.5 * (prev + cur) * g.dx;
    prev = cur;
  }
  return acc;
}

// int_{y_min}^{-x} (-x - y) P'(y) dy, the mirrored lower-tail integral.
double lower_call_integral(const Cdf& P, double x) {
  const UniformGrid& g = P.y;
  const double xm = -x;
  if (xm <= g.front()) return 0.0;
  double acc = 0.0;
  if (xm >= g.back()) {
    std::vector<double> f(g.n);
    for (std::size_t i = 0; i < g.n; ++i) f[i] = (xm - g[i]) * P.Pprime[i];
    return trapezoid(f, g.dx);
  }
  const std::size_t i = g.cell(xm);
  double prev = (xm - g[0]) * P.Pprime[0];
  for (std::size_t k = 1; k <= i; ++k) {
    const double cur = (xm - g[k]) * P.Pprime[k];
    acc += 0.5 * (prev + cur) * g.dx;
    prev = cur;
  }
  const double a = P.Pprime[i];
  const double b = (P.Pprime[i + 1] - P.Pprime[i]) / g.dx;
  const double L = xm - g[i];
  // integrand (xm - y) P'(y) on [y_i, xm], P' linearized from node i
  acc += a * L * L / 2.0 + b * L * L * (L / 6.0);
  return acc;
}

}  // namespace

LawBoundsReport tail_bounds_check(const Cdf& P, const ModelParams& params) {
  LawBoundsReport rep;
  rep.dominance_ok = true;
  const double sd = params.sigma / params.c_star;  // e^{-2cC} sigma
  rep.tail_x = {0.25 * params.sigma, 0.5 * params.sigma, params.sigma, 2.0 * params.sigma};
  rep.upper_tail_ok = rep.lower_tail_ok = true;
  for (const double x : rep.tail_x) {
    const double rhs = gauss_call(sd, x);
    const double pass_floor = -1e-8 * std::max(1.0, rhs);
    const double um = upper_call_integral(P, x) - rhs;
    const double lm = lower_call_integral(P, x) - rhs;
    rep.upper_margins.push_back(um);
    rep.lower_margins.push_back(lm);
    if (um < pass_floor) rep.upper_tail_ok = false;
    if (lm < pass_floor) rep.lower_tail_ok = false;
  }
  return rep;
}

LawBoundsReport validate_law_bounds(const Cdf& P, const ModelParams& params) {
  LawBoundsReport rep = tail_bounds_check(P, params);
  const double s2 = params.sigma * params.sigma;
  rep.dominance_ok = true;
  double worst = 1e300;
  double worst_y = 0.0;
  for (std::size_t i = 0; i < P.y.n; ++i) {
    const double cap = params.c_star * gauss_q(s2, P.y[i]);
    const double margin = cap - P.Pprime[i];
    if (margin < worst) {
      worst = margin;
      worst_y = P.y[i];
    }
    if (P.Pprime[i] > cap * (1.0 + 1e-6) + 1e-14) rep.dominance_ok = false;
  }
  rep.worst_dominance_margin = worst;
  rep.worst_dominance_y = worst_y;
  return rep;
}

}  // namespace kyleq
