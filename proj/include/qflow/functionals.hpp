#pragma once

#include <optional>
#include <vector>

#include "qflow/qgaussian.hpp"

namespace qflow {

/// Root of eta^q / (1 - eta^2) = sigma0^q sigma^{2-q} / (sigma_h^2 - sigma0^2) in (0, 1).
struct EtaSolve {
  double eta = 0.0;
  /// 1 - eta, carried separately because eta -> 1 as h -> 0.
  double one_minus_eta = 0.0;
  /// LHS / RHS - 1 at the returned root.
  double residual = 0.0;
  int iterations = 0;
};

/// Constants of the expansion of J_h. `a` is absent when the bivariate
/// constants C0(m, 2), C1(m, 2) do not exist (q >= 4/3, i.e. m >= 3/2).
struct GammaCoefficients {
  std::optional<double> a;
  double b = 0.0;
  double sigma0 = 0.0;
  double q = 0.0;
};

/// W_2^2 between two q-Gaussians of the same q: C (sigma1 - sigma2)^2 + (mu1 - mu2)^2.
double wasserstein2_sq(const QGaussian1D& g1, const QGaussian1D& g2);

/// Tsallis entropy difference E_q(g) - E_q(g0).
double entropy_diff(const QGaussian1D& g, const QGaussian1D& g0);

/// JKO functional K_h(g, g0) = W_2^2(g, g0) / (4h) + (E_q(g) - E_q(g0)) / 2.
double kh(const QGaussian1D& g, const QGaussian1D& g0, double h);

/// Solves for eta_h given the flowed scale sigma_h > sigma0.
EtaSolve solve_eta(double sigma, double sigma0, double sigma_h, double q);
/// Same equation, parametrised by gap = sigma_h^2 - sigma0^2 > 0.
EtaSolve solve_eta_gap(double sigma, double sigma0, double gap, double q);

/// Reference coupling Q_{0->h} = N_m(mu0, C sigma0^2, mu0, C sigma_h^2, sigma0 / sigma_h).
MBivariate q0h(const QGaussian1D& g0, double h);

/// Optimal coupling Q* = N_m(mu0, C sigma0^2, mu, C sigma^2, eta_h) of the theta-family.
MBivariate qstar(const QGaussian1D& g, const QGaussian1D& g0, double h);

/// J_h(g | g0) = min over the theta-family of H_m(Q || Q_{0->h}), in closed form.
/// Throws InvalidParameter for h <= 0, mismatched q, or q >= 4/3.
double jh(const QGaussian1D& g, const QGaussian1D& g0, double h);

/// Constants a(q, sigma0) and b(q, sigma0). Throws InvalidParameter for q outside (0,1) U (1,5/3).
GammaCoefficients coefficients(double q, double sigma0);

/// a (sigma_h^2 - sigma0^2)^{1/q} J_h(g | g0); converges to W_2^2(g, g0).
double rescaled_first(const QGaussian1D& g, const QGaussian1D& g0, double h);
/// a b gap^{(1-q)/q} J_h - b W_2^2 / gap; converges to E_q(g) - E_q(g0).
double rescaled_second(const QGaussian1D& g, const QGaussian1D& g0, double h);
/// a b gap^{(1-q)/q} J_h - W_2^2 / (2h).
double rescaled_third(const QGaussian1D& g, const QGaussian1D& g0, double h);
/// rescaled_third - rescaled_second = (b / gap - 1 / (2h)) W_2^2, evaluated
/// directly. Non-negative when q < 1.
double rescaled_third_excess(const QGaussian1D& g, const QGaussian1D& g0, double h);

/// F_h = 2 eta^q / (1 + eta) (sigma0/sigma)^{1-q} + q log_q(sigma0 / (sigma eta)) - 1.
double f_h(const QGaussian1D& g, const QGaussian1D& g0, double h);
/// F_h in its defining form 2 sigma0 sigma (1-eta) / gap + 2 log_m((sigma0/(sigma eta))^{1/(3-m)}) - 1.
double f_h_raw(const QGaussian1D& g, const QGaussian1D& g0, double h);
/// F = log_q(sigma0 / sigma).
double f_limit(const QGaussian1D& g, const QGaussian1D& g0);

/// One minimizing-movement step: argmin of kh(., g0, h) over the q-Gaussian family.
QGaussian1D jko_step(const QGaussian1D& g0, double h);

/// g0 followed by `steps` JKO iterates.
std::vector<QGaussian1D> jko_trajectory(const QGaussian1D& g0, double h, int steps);

}  // namespace qflow
