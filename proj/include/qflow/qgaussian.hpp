#pragma once

#include "qflow/qmath.hpp"

namespace qflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
  bool positive_definite() const { return xx > 0.0 && det() > 0.0; }
  /// Throws DomainError when the matrix is not positive definite.
  Sym2 inverse() const;
  /// <v, M v>
  double quadratic(Vec2 v) const { return xx * v.x * v.x + 2.0 * xy * v.x * v.y + yy * v.y * v.y; }
};

/// Trace of A^{-1} B for symmetric positive definite A.
double trace_inv_product(const Sym2& a, const Sym2& b);

/// Closure of {x : density > 0}. Endpoints are +-infinity for heavy-tailed (q > 1) measures.
struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool bounded() const;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// The one-dimensional q-Gaussian N_q(mu, C sigma^2).
///
/// `sigma` is the shape scale: the variance of the measure is C * sigma^2 with
/// C = params.variance_scale. This is the parametrisation in which the porous
/// medium flow acts by sigma^{3-q} -> sigma^{3-q} + t.
class QGaussian1D {
 public:
  /// Throws InvalidParameter unless sigma > 0 and params.d == 1.
  QGaussian1D(double mu, double sigma, const QParams& params);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  const QParams& params() const { return params_; }
  double q() const { return params_.q; }

  double variance() const { return params_.variance_scale * sigma_ * sigma_; }
  /// Standard deviation sqrt(C) * sigma.
  double stddev() const;
  SupportInterval support() const;
  double peak_density() const;

  QGaussian1D with_sigma(double sigma) const { return {mu_, sigma, params_}; }
  QGaussian1D with_mu(double mu) const { return {mu, sigma_, params_}; }

 private:
  double mu_;
  double sigma_;
  QParams params_;
};

/// The bivariate m-Gaussian N_m(mu1, s1^2, mu2, s2^2, theta) with covariance
/// [[s1^2, theta s1 s2], [theta s1 s2, s2^2]]. Entries are raw covariance
/// entries; no C-scaling is applied here.
class MBivariate {
 public:
  /// Throws InvalidParameter unless s1, s2 > 0 and |theta| < 1, and when the
  /// bivariate constants for m are undefined (m >= 3/2 or m == 1).
  MBivariate(double m, double mu1, double s1, double mu2, double s2, double theta);

  double m() const { return mparams_.q; }
  const QParams& mparams() const { return mparams_; }
  double mu1() const { return mu1_; }
  double mu2() const { return mu2_; }
  double s1() const { return s1_; }
  double s2() const { return s2_; }
  double theta() const { return theta_; }

  Vec2 mean() const { return {mu1_, mu2_}; }
  Sym2 covariance() const { return {s1_ * s1_, theta_ * s1_ * s2_, s2_ * s2_}; }

  /// False when m <= 0: the closed forms still evaluate, but the
  /// quadrature cross-checks only cover m in (0, 1) U (1, 3/2).
  bool verified_range() const { return mparams_.admissible; }
  /// Throws OutsideVerifiedRange when !verified_range().
  void require_verified_range() const;

  MBivariate with_theta(double theta) const { return {m(), mu1_, s1_, mu2_, s2_, theta}; }

 private:
  QParams mparams_;
  double mu1_;
  double s1_;
  double mu2_;
  double s2_;
  double theta_;
};

/// (C0 / sqrt(C sigma^2)) exp_q(-C1 (x - mu)^2 / (2 C sigma^2)); exactly 0 off the support.
double density_1d(const QGaussian1D& g, double x);

/// Bivariate m-Gaussian density; exactly 0 outside the elliptical support when m < 1.
double density_2d(const MBivariate& b, double x, double y);

/// E_m(N_m(mu, Sigma)) - E_m(N_m(mu, V)) in dimension mp.d, given det Sigma and det V.
/// Throws DomainError for non-positive determinants.
double entropy_diff_closed(const QParams& mp, double det_sigma, double det_v);

/// m-relative entropy H_m(N_m(mu_a, Sigma_a) || N_m(mu_b, Sigma_b)), d = 1.
/// Arguments are means and variances. Throws DomainError for non-positive variances.
double m_rel_entropy_closed(const QParams& mp, double mu_a, double var_a, double mu_b, double var_b);

/// m-relative entropy between two bivariate m-Gaussians (mp.d == 2).
/// Throws DomainError when either covariance is not positive definite.
double m_rel_entropy_closed(const QParams& mp, Vec2 mu_a, const Sym2& sigma_a, Vec2 mu_b,
                            const Sym2& sigma_b);

/// Convenience overload on MBivariate values (both must share m).
double m_rel_entropy_closed(const MBivariate& a, const MBivariate& b);

}  // namespace qflow
