#include "kyleq/model.hpp"

#include <cmath>

#include "kyleq/errors.hpp"
#include "kyleq/gaussian.hpp"

namespace kyleq {

ModelParams build_params(double sigma, double rho, int n_mm, ValueMap f) {
  if (!(sigma > 0.0)) throw ParamError("model.sigma: noise volatility must be positive");
  if (!(rho > 0.0)) throw ParamError("model.rho: market-maker risk aversion must be positive");
  if (n_mm < 2) throw ParamError("model.n_mm: at least two market makers are required");
  f.validate();

  ModelParams p;
  p.sigma = sigma;
  p.rho = rho;
  p.n_mm = n_mm;
  p.f = std::move(f);
  p.c = sigma * sigma * rho / (2.0 * n_mm);
  p.big_c = p.f.f_inf() * std::sqrt(2.0 / (sigma * sigma * kPi));
  p.c_star = std::exp(rho * p.f.f_inf() / n_mm * std::sqrt(2.0 / kPi) * sigma);
  const double alt = std::exp(2.0 * p.c * p.big_c);
  if (std::abs(alt - p.c_star) > 1e-12 * p.c_star)
    throw ConsistencyError("derived constants: the two c_star expressions disagree");
  return p;
}

void GridSpec::validate() const {
  if (!(y_max > 0.0)) throw ParamError("grid.y_max: must be positive");
  if (n_y < 41 || n_y % 2 == 0) throw ParamError("grid.n_y: must be odd and at least 41");
  if (n_t < 20) throw ParamError("grid.n_t: must be at least 20");
  if (!(eps_terminal > 0.0) || !(eps_terminal < 1e3 / static_cast<double>(n_t)))
    throw ParamError("grid.eps_terminal: must lie in (0, 1e3/n_t)");
  const double steps = eps_terminal * static_cast<double>(n_t);
  if (std::abs(steps - std::round(steps)) > 1e-9 || std::round(steps) < 1.0)
    throw ParamError("grid.eps_terminal: must coincide with a time node (multiple of 1/n_t)");
  if (n_z < 11) throw ParamError("grid.n_z: must be at least 11");
}

GridSpec GridSpec::defaults_for(double sigma) {
  GridSpec g;
  g.y_max = 8.0 * sigma;
  return g;
}

TimeMesh TimeMesh::build(const GridSpec& grid, double refine_start, double shrink, double eps_min) {
  if (!(refine_start > 0.0 && refine_start < 1.0) || !(shrink > 0.0 && shrink < 1.0) ||
      !(eps_min > 0.0 && eps_min < 1.0 - refine_start))
    throw ParamError("time mesh: invalid refinement parameters");
  TimeMesh m;
  const double dt = grid.dt();
  for (std::size_t j = 0; j * dt < refine_start - 0.5 * dt; ++j)
    m.t.push_back(static_cast<double>(j) * dt);
  m.t.push_back(refine_start);
  double u = 1.0 - refine_start;
  while (u * shrink > eps_min * (1.0 + 1e-9)) {
    u *= shrink;
    m.t.push_back(1.0 - u);
  }
  if (1.0 - eps_min > m.t.back() + 1e-12) m.t.push_back(1.0 - eps_min);
  m.t.push_back(1.0);
  return m;
}

}  // namespace kyleq
