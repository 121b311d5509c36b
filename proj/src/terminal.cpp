#include "kyleq/terminal.hpp"

#include <algorithm>
#include <cmath>

#include "kyleq/cdf.hpp"
#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"

namespace kyleq {

TerminalCondition::TerminalCondition(UniformGrid y, std::vector<double> values,
                                     std::vector<double> slopes, double left_limit,
                                     double right_limit, double left_slope, double right_slope)
    : y_(y),
      v_(std::move(values)),
      s_(std::move(slopes)),
      lo_(left_limit),
      hi_(right_limit),
      lslope_(left_slope),
      rslope_(right_slope) {
  if (v_.size() != y_.n || s_.size() != y_.n)
    throw ParamError("terminal condition: value/slope arrays must match the y-grid");
  double vmax = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i > 0 && v_[i] < v_[i - 1] - 1e-14)
      throw ParamError("terminal condition: values must be nondecreasing");
    if (s_[i] < 0.0) throw ParamError("terminal condition: slopes must be nonnegative");
    vmax = std::max(vmax, std::abs(v_[i]));
  }
  h_inf_ = std::max({vmax, std::abs(lo_), std::abs(hi_)});
  if (!(v_.back() > v_.front()))
    throw ParamError("terminal condition: must not be constant");
  // Absolute continuity on the grid: the value increment equals the
  // integral of the grid derivative.
  const double inc = v_.back() - v_.front();
  const double integ = simpson(s_, y_.dx);
  if (std::abs(integ - inc) > 1e-4 * std::max(1.0, std::abs(inc)) + 1e-8)
    throw ParamError("terminal condition: grid slopes inconsistent with value increments");
  std::vector<double> xs(y_.n);
  for (std::size_t i = 0; i < y_.n; ++i) xs[i] = y_[i];
  // Strictly increase duplicated plateaus by a negligible amount so the
  // monotone-cubic inverse stays well defined.
  std::vector<double> vv = v_;
  for (std::size_t i = 1; i < vv.size(); ++i)
    if (!(vv[i] > vv[i - 1])) vv[i] = vv[i - 1] + 1e-300 + 1e-16 * std::abs(vv[i - 1]);
  interp_ = MonotoneCubic(std::move(xs), std::move(vv));
}

double TerminalCondition::operator()(double x) const {
  if (x < y_.front()) return lo_ + lslope_ * (x - y_.front());
  if (x > y_.back()) return hi_ + rslope_ * (x - y_.back());
  return interp_(x);
}

double TerminalCondition::slope(double x) const {
  if (x < y_.front()) return lslope_;
  if (x > y_.back()) return rslope_;
  return std::max(interp_.deriv(x), 0.0);
}

double TerminalCondition::invert(double v) const {
  if (!(v > v_.front() && v < v_.back()))
    throw RangeError("terminal condition: value outside the open grid range of h");
  return interp_.invert(v);
}

TerminalCondition terminal_from_cdf(const Cdf& P, const ValueMap& f) {
  const UniformGrid& y = P.y;
  constexpr double kClamp = 1e-12;
  std::vector<double> h(y.n), hp(y.n);
  std::size_t warnings = 0;
  double prev = -1.0;
  for (std::size_t i = 0; i < y.n; ++i) {
    double p = P.P[i];
    if (p < prev) throw ParamError("terminal map: input distribution function is not monotone");
    prev = p;
    if (p < kClamp || p > 1.0 - kClamp) {
      p = std::clamp(p, kClamp, 1.0 - kClamp);
      if (i > 0 && i + 1 < y.n) ++warnings;  // interior clamps are worth flagging
    }
    const double x = norm_cdf_inv(p);
    h[i] = f.value(x);
    // h'(y) = f'(x) P'(y) / phi(x), the chain rule through the quantile map.
    hp[i] = f.slope(x) * std::max(P.Pprime[i], 0.0) / norm_pdf(x);
  }
  TerminalCondition out(y, std::move(h), std::move(hp), f.lower_limit(), f.upper_limit());
  out.set_clamp_warnings(warnings);
  return out;
}

}  // namespace kyleq
