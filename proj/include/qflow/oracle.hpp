#pragma once

// Independent verification layer.
//
// Nothing here evaluates a closed-form entropy, relative entropy or minimiser.
// Integrals are computed by adaptive quadrature of the densities themselves;
// minimisers are found by direct search. The results are what the closed forms
// in qgaussian.hpp / functionals.hpp are tested against.

#include <functional>
#include <span>
#include <string>

#include "qflow/qgaussian.hpp"

namespace qflow::oracle {

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  /// Maximum refinement depth of each one-dimensional rule.
  int max_subdivisions = 15;
  /// Semi-infinite pieces are integrated exactly (double-exponential map, no
  /// truncation); their error estimate must stay below this bound.
  double tail_mass_bound = 1e-12;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool tolerance_met = true;
  /// How unbounded pieces were handled, e.g. "exact support" or "exp-sinh tails".
  std::string truncation;
};

/// Integrates f over `support`, splitting at `breakpoints` (points outside the
/// support are ignored). Finite pieces use tanh-sinh, which tolerates endpoint
/// singularities; infinite pieces use exp-sinh. Throws InvalidParameter for an
/// empty support or non-positive tolerances.
QuadratureResult integrate_1d(const std::function<double(double)>& f, SupportInterval support,
                              const QuadratureConfig& cfg, std::span<const double> breakpoints = {});

/// An ellipse {x : <x - center, shape^{-1} (x - center)> <= radius_sq}.
struct Ellipse {
  Vec2 center;
  Sym2 shape;
  double radius_sq = 0.0;
};

/// Plane integral of f in the polar frame x = center + L (r cos phi, r sin phi),
/// L L^T = frame_shape. For each ray the radial integral runs over [0, r_max],
/// split where the ray crosses any of `boundaries`; r_max is the farthest such
/// crossing, or +infinity when `bounded` is false.
QuadratureResult integrate_2d(const std::function<double(double, double)>& f, Vec2 center,
                              const Sym2& frame_shape, std::span<const Ellipse> boundaries,
                              bool bounded, const QuadratureConfig& cfg);

/// Closure of the support of a bivariate m-Gaussian when m < 1.
Ellipse support_ellipse(const MBivariate& b);

/// How log_m of a reference density is read where that density vanishes (m < 1 only).
enum class LogConvention {
  /// log_m(0) = -1/(1-m): the density itself.
  kDensity,
  /// The quadratic potential of the m-exponential family, continued past the
  /// support. Coincides with kDensity wherever the density is positive.
  kPotential,
};

/// Which of the two algebraically equal integrands of H_m to integrate.
enum class RelEntropyForm {
  /// (1/(2-m)) [f log f - g log g - (2-m) log g (f - g)], one plane integral.
  kBregman,
  /// (1/(2-m)) [f log f + (1-m) g log g - (2-m) f log g], three plane integrals.
  kSplit,
};

/// H_m(Q || P) by plane quadrature. Throws OutsideVerifiedRange unless m is in
/// (0,1) U (1,3/2); reports (does not throw) when the tolerance is not met.
QuadratureResult m_rel_entropy_quad(const MBivariate& q, const MBivariate& p,
                                    const QuadratureConfig& cfg,
                                    LogConvention convention = LogConvention::kDensity,
                                    RelEntropyForm form = RelEntropyForm::kSplit);

/// Tsallis entropy E_q(g) = int g log_q g by quadrature.
QuadratureResult tsallis_entropy_quad(const QGaussian1D& g, const QuadratureConfig& cfg);

/// Central moment int (x - mu)^k g(x) dx for k = 0, 1, 2 by quadrature.
QuadratureResult moment_quad(const QGaussian1D& g, int k, const QuadratureConfig& cfg);

/// E_m of a bivariate m-Gaussian by plane quadrature.
QuadratureResult bivariate_entropy_quad(const MBivariate& b, const QuadratureConfig& cfg);

struct ThetaSearchConfig {
  QuadratureConfig quadrature{1e-13, 1e-15, 15, 1e-12};
  int grid_points = 41;
  double theta_tol = 1e-9;
  // Family members rarely have nested supports when m < 1; see LogConvention.
  LogConvention convention = LogConvention::kPotential;
};

struct ThetaMinimum {
  double theta = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool tolerance_met = true;
};

/// Minimises theta -> H_m(N_m(nu1, xi1^2, nu2, xi2^2, theta) || P) over (-1, 1)
/// by a grid scan followed by golden-section search. xi1, xi2 are standard
/// deviations. Throws NumericalError when the objective is flat across the grid.
ThetaMinimum minimize_theta(const MBivariate& p, double nu1, double xi1, double nu2, double xi2,
                            const ThetaSearchConfig& cfg = {});

/// H(Q||P) - H(Q*||P) - H(Q||Q*), all by quadrature.
QuadratureResult pythagorean_defect(const MBivariate& p, const MBivariate& qstar,
                                    const MBivariate& q, const QuadratureConfig& cfg,
                                    LogConvention convention = LogConvention::kDensity);

struct GridSearchConfig {
  int rounds = 3;
  int points = 101;
};

struct GridMinimum {
  double mu = 0.0;
  double sigma = 0.0;
  double value = 0.0;
  /// Grid spacing of the final round in mu and sigma.
  double mu_resolution = 0.0;
  double sigma_resolution = 0.0;
};

/// Brute-force minimisation of kh(., g0, h) over (mu, sigma) by nested grid
/// refinement around (mu0, sigma0).
GridMinimum minimize_kh_grid(const QGaussian1D& g0, double h, const GridSearchConfig& cfg = {});

}  // namespace qflow::oracle
