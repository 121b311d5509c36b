#include "kyleq/pricing_field.hpp"

#include <algorithm>
#include <cmath>

#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"
#include "kyleq/parallel.hpp"

namespace kyleq {

namespace {

const GaussHermite& gh64() {
  static const GaussHermite gh(64);
  return gh;
}

// Closed-form convolution tails for h extended affinely outside the grid:
// left tail A + B*(z - y_min) on (-inf, y_min], right tail on [y_max, inf).
struct TailTerms {
  double H = 0.0, Hy = 0.0, Hyy = 0.0;
};

TailTerms tail_contributions(const TerminalCondition& h, const UniformGrid& g, double s, double y) {
  TailTerms out;
  const double e = (y - g.front()) / s;   // distance to the left edge
  const double d = (g.back() - y) / s;    // distance to the right edge
  const double al = h.left_limit(), bl = h.left_slope();
  const double ar = h.right_limit(), br = h.right_slope();
  const double pe = norm_pdf(e), pd = norm_pdf(d);
  const double ce = norm_cdf(-e), cd = norm_cdf(-d);
  out.H += al * ce + bl * s * (e * ce - pe);
  out.H += ar * cd + br * s * (pd - d * cd);
  out.Hy += -(al / s) * pe + bl * ce;
  out.Hy += (ar / s) * pd + br * cd;
  out.Hyy += (al * e * pe) / (s * s) - (bl / s) * pe;
  out.Hyy += (ar * d * pd) / (s * s) + (br / s) * pd;
  return out;
}

}  // namespace

FieldRow gaussian_conv_row(const TerminalCondition& h, const UniformGrid& y, double variance) {
  const std::size_t n = y.n;
  FieldRow row;
  row.H.assign(n, 0.0);
  row.Hy.assign(n, 0.0);
  row.Hyy.assign(n, 0.0);
  const double s = std::sqrt(variance);
  const double dy = y.dx;
  const auto& hv = h.values();

  if (s < 2.0 * dy) {
    // Kernel narrower than the grid can resolve: per-node Gauss-Hermite on
    // the terminal interpolant.
    const auto& gh = gh64();
    const double isqpi = 1.0 / std::sqrt(kPi);
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = y[i];
      double a0 = 0.0, a1 = 0.0, a2 = 0.0;
      for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
        const double z = kSqrt2 * gh.nodes[k];
        const double f = h(yi + s * z);
        const double w = gh.weights[k];
        a0 += w * f;
        a1 += w * z * f;
        a2 += w * (z * z - 1.0) * f;
      }
      row.H[i] = isqpi * a0;
      row.Hy[i] = isqpi * a1 / s;
      row.Hyy[i] = isqpi * a2 / variance;
    }
    return row;
  }

  // Shared kernel table: offsets j*dy, truncated at 8 standard deviations.
  const auto w = static_cast<std::ptrdiff_t>(
      std::min<double>(std::ceil(8.0 * s / dy), static_cast<double>(n - 1)));
  std::vector<double> k0(2 * w + 1), k1(2 * w + 1), k2(2 * w + 1);
  for (std::ptrdiff_t j = -w; j <= w; ++j) {
    const double x = static_cast<double>(j) * dy;
    const double q = gauss_q(variance, x) * dy;
    k0[j + w] = q;
    k1[j + w] = q * x / variance;
    k2[j + w] = q * (x * x - variance) / (variance * variance);
  }
  const auto nn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t i = 0; i < nn; ++i) {
    const std::ptrdiff_t jlo = std::max<std::ptrdiff_t>(-w, -i);
    const std::ptrdiff_t jhi = std::min<std::ptrdiff_t>(w, nn - 1 - i);
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    for (std::ptrdiff_t j = jlo; j <= jhi; ++j) {
      double f = hv[static_cast<std::size_t>(i + j)];
      if (i + j == 0 || i + j == nn - 1) f *= 0.5;  // trapezoid end weights
      a0 += k0[j + w] * f;
      a1 += k1[j + w] * f;
      a2 += k2[j + w] * f;
    }
    const TailTerms tails = tail_contributions(h, y, s, y[i]);
    row.H[i] = a0 + tails.H;
    row.Hy[i] = a1 + tails.Hy;
    row.Hyy[i] = a2 + tails.Hyy;
  }
  return row;
}

void gaussian_conv_point(const TerminalCondition& h, double variance, double yq, double* H,
                         double* Hy, double* Hyy) {
  const UniformGrid& g = h.y();
  const double s = std::sqrt(variance);
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  if (s < 2.0 * g.dx) {
    const auto& gh = gh64();
    const double isqpi = 1.0 / std::sqrt(kPi);
    for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
      const double z = kSqrt2 * gh.nodes[k];
      const double f = h(yq + s * z);
      const double w = gh.weights[k];
      a0 += w * f;
      a1 += w * z * f;
      a2 += w * (z * z - 1.0) * f;
    }
    if (H) *H = isqpi * a0;
    if (Hy) *Hy = isqpi * a1 / s;
    if (Hyy) *Hyy = isqpi * a2 / variance;
    return;
  }
  const auto& hv = h.values();
  const auto nn = static_cast<std::ptrdiff_t>(g.n);
  const auto ic = static_cast<std::ptrdiff_t>(std::floor((yq - g.front()) / g.dx));
  const auto w = static_cast<std::ptrdiff_t>(
      std::min<double>(std::ceil(8.0 * s / g.dx) + 1, static_cast<double>(g.n - 1)));
  const std::ptrdiff_t klo = std::max<std::ptrdiff_t>(0, ic - w);
  const std::ptrdiff_t khi = std::min<std::ptrdiff_t>(nn - 1, ic + w + 1);
  for (std::ptrdiff_t k = klo; k <= khi; ++k) {
    const double x = g[static_cast<std::size_t>(k)] - yq;
    double f = hv[static_cast<std::size_t>(k)];
    if (k == 0 || k == nn - 1) f *= 0.5;
    const double q = gauss_q(variance, x) * g.dx;
    a0 += q * f;
    a1 += q * x / variance * f;
    a2 += q * (x * x - variance) / (variance * variance) * f;
  }
  const TailTerms tails = tail_contributions(h, g, s, yq);
  if (H) *H = a0 + tails.H;
  if (Hy) *Hy = a1 + tails.Hy;
  if (Hyy) *Hyy = a2 + tails.Hyy;
}

PricingRuleField PricingRuleField::solve_heat(TerminalCondition h, const ModelParams& params,
                                              const GridSpec& grid) {
  grid.validate();
  PricingRuleField f;
  f.y_ = grid.y_grid();
  f.sigma_ = params.sigma;
  f.eps_ = grid.eps_terminal;
  f.analytic_ = true;
  f.bound_c_ = h.h_inf() * std::sqrt(2.0 / (params.sigma * params.sigma * kPi));
  f.h_ = std::move(h);
  f.stored_dt_ = grid.dt();

  const auto n_rows = static_cast<std::size_t>(
      std::llround((1.0 - grid.eps_terminal) / grid.dt())) + 1;
  f.rows_.resize(n_rows);
  const double s2 = params.sigma * params.sigma;
  parallel_for(n_rows, [&](std::size_t j) {
    const double t = static_cast<double>(j) * grid.dt();
    f.rows_[j] = gaussian_conv_row(f.h_, f.y_, s2 * (1.0 - t));
    f.rows_[j].t = t;
  });
  for (const auto& row : f.rows_) f.check_invariants(row);
  return f;
}

PricingRuleField PricingRuleField::from_rows(TerminalCondition terminal, const ModelParams& params,
                                             const GridSpec& grid, std::vector<FieldRow> rows) {
  grid.validate();
  if (rows.empty()) throw ParamError("pricing field: no stored rows");
  PricingRuleField f;
  f.y_ = grid.y_grid();
  f.sigma_ = params.sigma;
  f.eps_ = grid.eps_terminal;
  f.analytic_ = false;
  f.bound_c_ = terminal.h_inf() * std::sqrt(2.0 / (params.sigma * params.sigma * kPi));
  f.h_ = std::move(terminal);
  f.stored_dt_ = grid.dt();
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].H.size() != f.y_.n)
      throw ParamError("pricing field: stored row width does not match the grid");
    if (std::abs(rows[j].t - static_cast<double>(j) * grid.dt()) > 1e-9)
      throw ParamError("pricing field: stored rows are not on the uniform time grid");
  }
  f.rows_ = std::move(rows);
  return f;
}

FieldRow PricingRuleField::row_at(double t) const {
  if (t >= 1.0) {
    FieldRow row;
    row.t = 1.0;
    row.H = h_.values();
    row.Hy = h_.grid_slopes();
    row.Hyy.assign(y_.n, 0.0);
    for (std::size_t i = 1; i + 1 < y_.n; ++i)
      row.Hyy[i] = (row.Hy[i + 1] - row.Hy[i - 1]) / (2.0 * y_.dx);
    row.Hyy[0] = row.Hyy[1];
    row.Hyy[y_.n - 1] = row.Hyy[y_.n - 2];
    return row;
  }
  if (analytic_) {
    FieldRow row = gaussian_conv_row(h_, y_, sigma_ * sigma_ * (1.0 - t));
    row.t = t;
    return row;
  }
  return interp_row(t);
}

FieldRow PricingRuleField::interp_row(double t) const {
  const double t_last = rows_.back().t;
  if (t > t_last + 1e-12) {
    FieldRow row = gaussian_conv_row(h_, y_, sigma_ * sigma_ * (1.0 - t));
    row.t = t;
    return row;
  }
  const double u = std::clamp(t / stored_dt_, 0.0, static_cast<double>(rows_.size() - 1));
  const auto j = std::min<std::size_t>(static_cast<std::size_t>(std::floor(u)), rows_.size() - 2);
  const double w = u - static_cast<double>(j);
  const FieldRow& a = rows_[j];
  const FieldRow& b = rows_[j + 1];
  FieldRow row;
  row.t = t;
  row.H.resize(y_.n);
  row.Hy.resize(y_.n);
  row.Hyy.resize(y_.n);
  for (std::size_t i = 0; i < y_.n; ++i) {
    row.H[i] = (1.0 - w) * a.H[i] + w * b.H[i];
    row.Hy[i] = (1.0 - w) * a.Hy[i] + w * b.Hy[i];
    row.Hyy[i] = (1.0 - w) * a.Hyy[i] + w * b.Hyy[i];
  }
  return row;
}

void PricingRuleField::point_eval(double t, double yq, double* H, double* Hy, double* Hyy) const {
  if (t >= 1.0) {
    if (H) *H = h_(yq);
    if (Hy) *Hy = h_.slope(yq);
    if (Hyy) *Hyy = 0.0;
    return;
  }
  if (analytic_) {
    gaussian_conv_point(h_, sigma_ * sigma_ * (1.0 - t), yq, H, Hy, Hyy);
    return;
  }
  const double t_last = rows_.back().t;
  if (t > t_last + 1e-12) {
    gaussian_conv_point(h_, sigma_ * sigma_ * (1.0 - t), yq, H, Hy, Hyy);
    return;
  }
  const double u = std::clamp(t / stored_dt_, 0.0, static_cast<double>(rows_.size() - 1));
  const auto j = std::min<std::size_t>(static_cast<std::size_t>(std::floor(u)), rows_.size() - 2);
  const double w = u - static_cast<double>(j);
  const FieldRow& a = rows_[j];
  const FieldRow& b = rows_[j + 1];
  if (H) *H = (1.0 - w) * cubic_eval(y_, a.H, yq) + w * cubic_eval(y_, b.H, yq);
  if (Hy) *Hy = (1.0 - w) * cubic_eval(y_, a.Hy, yq) + w * cubic_eval(y_, b.Hy, yq);
  if (Hyy) *Hyy = (1.0 - w) * cubic_eval(y_, a.Hyy, yq) + w * cubic_eval(y_, b.Hyy, yq);
}

double PricingRuleField::H(double t, double y) const {
  double v;
  point_eval(t, y, &v, nullptr, nullptr);
  return v;
}

double PricingRuleField::Hy(double t, double y) const {
  double v;
  point_eval(t, y, nullptr, &v, nullptr);
  return v;
}

double PricingRuleField::Hyy(double t, double y) const {
  double v;
  point_eval(t, y, nullptr, nullptr, &v);
  return v;
}

double PricingRuleField::invert_terminal(double v) const {
  const double root = h_.invert(v);
  if (std::abs(h_(root) - v) > 1e-10 * std::max(1.0, h_.h_inf()))
    throw ConsistencyError("invert_terminal: residual exceeds tolerance");
  return root;
}

std::vector<double> PricingRuleField::xi_curve(double v, std::span<const double> ts) const {
  std::vector<double> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    if (t >= 1.0) {
      out[k] = invert_terminal(v);
      continue;
    }
    double lo = y_.front(), hi = y_.back();
    double Hlo = H(t, lo), Hhi = H(t, hi);
    if (!(v > Hlo && v < Hhi))
      throw RangeError("xi_curve: value outside the grid range of H(t,.)");
    for (int it = 0; it < 64 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double Hm = H(t, mid);
      if (Hm <= v)
        lo = mid, Hlo = Hm;
      else
        hi = mid, Hhi = Hm;
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

void PricingRuleField::check_invariants(const FieldRow& row) const {
  const double tol = 1e-6;
  const double hmin = std::min(h_.values().front(), h_.left_limit());
  const double hmax = std::max(h_.values().back(), h_.right_limit());
  const double one_minus_t = 1.0 - row.t;
  const double hy_cap = bound_c_ / std::sqrt(one_minus_t) + tol;
  const double hyy_cap = 2.0 * h_.h_inf() / (sigma_ * sigma_ * one_minus_t) * (1.0 + 1e-6) + tol;
  double hy_min = 1e300;
  for (std::size_t i = 0; i < y_.n; ++i) {
    if (row.H[i] < hmin - tol || row.H[i] > hmax + tol)
      throw ConsistencyError("pricing field: maximum principle violated (quadrature failure)");
    if (row.Hy[i] > hy_cap)
      throw ConsistencyError("pricing field: H_y exceeds C/sqrt(1-t) bound");
    if (std::abs(row.Hyy[i]) > hyy_cap)
      throw ConsistencyError("pricing field: H_yy exceeds 2||h||/(sigma^2(1-t)) bound");
    hy_min = std::min(hy_min, row.Hy[i]);
  }
  if (hy_min <= -1e-13 * std::max(1.0, bound_c_))
    throw ConsistencyError("pricing field: H_y lost positivity");
  const double mass = simpson(row.Hy, y_.dx);
  const double expect = (h_.left_slope() == 0.0 && h_.right_slope() == 0.0)
                            ? h_.right_limit() - h_.left_limit()
                            : h_.values().back() - h_.values().front();
  if (std::abs(mass - expect) > 1e-4 * std::max(1.0, std::abs(expect)))
    throw ConsistencyError("pricing field: integral of H_y does not match terminal increments");
}

std::vector<FieldRow> materialize_rows(const PricingRuleField& field, std::span<const double> ts) {
  std::vector<FieldRow> rows(ts.size());
  parallel_for(ts.size(), [&](std::size_t k) { rows[k] = field.row_at(ts[k]); });
  return rows;
}

}  // namespace kyleq
