#pragma once

#include "qflow/qgaussian.hpp"
#include "qflow/qmath.hpp"

namespace qflow {

/// Shape scale after running the porous medium flow for time h:
/// sigma_h = (h + sigma0^{3-q})^{1/(3-q)}. q == 1 gives the heat flow.
double evolve_sigma(double sigma0, double h, double q);

/// sigma_h^2 - sigma0^2, evaluated without cancellation for small h.
double sigma_sq_gap(double sigma0, double h, double q);

/// The one-dimensional covariance map Theta(V) = V^{2/(3-q)}.
double theta_map_1d(double v, double q);

/// Barenblatt source solution [A t^{-d alpha (1-q)} - B x^2 / t]_+^{1/(1-q)} for d == 1.
/// Throws InvalidParameter for t <= 0 or p.d != 1.
double barenblatt_density(double t, double x, const QParams& p);

/// A q-Gaussian carried by the exact flow, together with its elapsed time.
struct FlowState {
  QGaussian1D g;
  double t = 0.0;

  /// Evolves by dt >= 0; evolving by s then u equals evolving by s + u.
  FlowState advanced(double dt) const;
};

/// Evolves g0 forward by t under the exact semigroup.
QGaussian1D evolve(const QGaussian1D& g0, double t);

/// Finite-difference stencil for pde_residual.
struct PdeGrid {
  double dx = 1e-2;
  double dt = 1e-2;
  /// Number of evaluation points across the interior region.
  int points = 41;
  /// Interior region: points where the density exceeds this fraction of the peak.
  double density_floor = 1e-3;
};

/// Max over interior points of |d_t rho - d_xx rho^{2-q}| for the exact family
/// started at g0, with both derivatives taken by central differences at time t.
/// Throws InvalidParameter for a degenerate grid (non-positive steps, dt >= t,
/// fewer than 2 points, or a stencil that leaves the support).
double pde_residual(const QGaussian1D& g0, double t, const PdeGrid& grid);

}  // namespace qflow
