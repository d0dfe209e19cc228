#include "qflow/pme_flow.hpp"

#include <algorithm>
#include <cmath>

#include "qflow/errors.hpp"

namespace qflow {

double evolve_sigma(double sigma0, double h, double q) {
  if (!(sigma0 > 0.0)) throw InvalidParameter("evolve_sigma: sigma0 must be positive");
  if (!(h >= 0.0)) throw InvalidParameter("evolve_sigma: h must be non-negative");
  if (h == 0.0) return sigma0;
  const double k = 3.0 - q;
  return std::pow(h + std::pow(sigma0, k), 1.0 / k);
}

double sigma_sq_gap(double sigma0, double h, double q) {
  if (!(sigma0 > 0.0)) throw InvalidParameter("sigma_sq_gap: sigma0 must be positive");
  if (!(h >= 0.0)) throw InvalidParameter("sigma_sq_gap: h must be non-negative");
  const double k = 3.0 - q;
  // (h + s^k)^{2/k} - s^2 = s^2 (exp((2/k) log1p(h / s^k)) - 1)
  return sigma0 * sigma0 * std::expm1(2.0 / k * std::log1p(h / std::pow(sigma0, k)));
}

double theta_map_1d(double v, double q) {
  if (!(v > 0.0)) throw InvalidParameter("theta_map_1d: V must be positive");
  return std::pow(v, 2.0 / (3.0 - q));
}

double barenblatt_density(double t, double x, const QParams& p) {
  if (!(t > 0.0)) throw InvalidParameter("barenblatt_density: t must be positive");
  if (p.d != 1) throw InvalidParameter("barenblatt_density: only d == 1 is supported");
  const double one_minus_q = 1.0 - p.q;
  const double bracket = p.barenblatt_a * std::pow(t, -p.d * p.alpha * one_minus_q) -
                         p.barenblatt_b * x * x / t;
  if (bracket <= 0.0) return 0.0;
  return std::pow(bracket, 1.0 / one_minus_q);
}

FlowState FlowState::advanced(double dt) const {
  if (!(dt >= 0.0)) throw InvalidParameter("FlowState::advanced: dt must be non-negative");
  return {evolve(g, dt), t + dt};
}

QGaussian1D evolve(const QGaussian1D& g0, double t) {
  return g0.with_sigma(evolve_sigma(g0.sigma(), t, g0.q()));
}

double pde_residual(const QGaussian1D& g0, double t, const PdeGrid& grid) {
  if (!(t > 0.0)) throw InvalidParameter("pde_residual: t must be positive");
  if (!(grid.dx > 0.0) || !(grid.dt > 0.0) || grid.dt >= t || grid.points < 2 ||
      !(grid.density_floor > 0.0 && grid.density_floor < 1.0)) {
    throw InvalidParameter("pde_residual: degenerate grid");
  }
  const double q = g0.q();
  const QParams& p = g0.params();
  const QGaussian1D now = evolve(g0, t);
  const QGaussian1D before = evolve(g0, t - grid.dt);
  const QGaussian1D after = evolve(g0, t + grid.dt);

  // density > floor * peak  <=>  -C1 y^2 / (2V) > log_q(floor)
  const double y_max = std::sqrt(-2.0 * now.variance() * q_log(grid.density_floor, q) / p.c1);

  if (q < 1.0) {
    // The stencil must stay strictly inside the support at every time level.
    const double reach_x = y_max + grid.dx;
    const double half_now = now.support().hi - now.mu();
    const double half_before = before.support().hi - before.mu();
    if (reach_x >= half_now || y_max >= half_before) {
      throw InvalidParameter("pde_residual: stencil leaves the support");
    }
  }

  const auto pressure = [&](double x) { return std::pow(density_1d(now, x), 2.0 - q); };
  double worst = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    const double x = now.mu() + y_max * (-1.0 + 2.0 * i / (grid.points - 1));
    const double drho_dt = (density_1d(after, x) - density_1d(before, x)) / (2.0 * grid.dt);
    const double lap = (pressure(x + grid.dx) - 2.0 * pressure(x) + pressure(x - grid.dx)) /
                       (grid.dx * grid.dx);
    worst = std::max(worst, std::abs(drho_dt - lap));
  }
  return worst;
}

}  // namespace qflow
