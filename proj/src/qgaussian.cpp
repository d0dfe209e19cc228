#include "qflow/qgaussian.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {

Sym2 Sym2::inverse() const {
  const double d = det();
  if (!(xx > 0.0 && d > 0.0)) throw DomainError("matrix is not positive definite");
  return {yy / d, -xy / d, xx / d};
}

double trace_inv_product(const Sym2& a, const Sym2& b) {
  const Sym2 ai = a.inverse();
  return ai.xx * b.xx + 2.0 * ai.xy * b.xy + ai.yy * b.yy;
}

bool SupportInterval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

QGaussian1D::QGaussian1D(double mu, double sigma, const QParams& params)
    : mu_(mu), sigma_(sigma), params_(params) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("QGaussian1D: sigma must be positive and finite");
  }
  if (!std::isfinite(mu)) throw InvalidParameter("QGaussian1D: mu must be finite");
  if (params.d != 1) throw InvalidParameter("QGaussian1D: params must have d == 1");
}

double QGaussian1D::stddev() const { return std::sqrt(params_.variance_scale) * sigma_; }

SupportInterval QGaussian1D::support() const {
  const double inf = std::numeric_limits<double>::infinity();
  if (params_.q > 1.0) return {-inf, inf};
  // 1 - (1-q) C1 y^2 / (2V) >= 0
  const double half_width = std::sqrt(2.0 * variance() / ((1.0 - params_.q) * params_.c1));
  return {mu_ - half_width, mu_ + half_width};
}

double QGaussian1D::peak_density() const { return params_.c0 / stddev(); }

MBivariate::MBivariate(double m, double mu1, double s1, double mu2, double s2, double theta)
    : mparams_(make_params(m, 2, RangePolicy::kExtended)),
      mu1_(mu1),
      s1_(s1),
      mu2_(mu2),
      s2_(s2),
      theta_(theta) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw InvalidParameter("MBivariate: s1, s2 must be positive");
  if (!(std::abs(theta) < 1.0)) throw InvalidParameter("MBivariate: |theta| must be < 1");
}

void MBivariate::require_verified_range() const {
  if (!verified_range()) {
    throw OutsideVerifiedRange("bivariate m-Gaussian with m = " + std::to_string(m()) +
                               " is outside the verified range (0,1) U (1,3/2)");
  }
}

double density_1d(const QGaussian1D& g, double x) {
  const QParams& p = g.params();
  const double v = g.variance();
  const double dx = x - g.mu();
  return p.c0 / std::sqrt(v) * q_exp(-p.c1 * dx * dx / (2.0 * v), p.q);
}

double density_2d(const MBivariate& b, double x, double y) {
  const QParams& p = b.mparams();
  const double one_minus_t2 = 1.0 - b.theta() * b.theta();
  const double u = (x - b.mu1()) / b.s1();
  const double w = (y - b.mu2()) / b.s2();
  const double form = (u * u + w * w - 2.0 * b.theta() * u * w) / one_minus_t2;
  const double norm = p.c0 / (b.s1() * b.s2() * std::sqrt(one_minus_t2));
  return norm * q_exp(-0.5 * p.c1 * form, p.q);
}

double entropy_diff_closed(const QParams& mp, double det_sigma, double det_v) {
  if (!(det_sigma > 0.0) || !(det_v > 0.0)) {
    throw DomainError("entropy_diff_closed: determinants must be positive");
  }
  const double m = mp.q;
  const double sqrt_v = std::sqrt(det_v);
  return (2.0 - m) * mp.c1 * std::pow(mp.c0 / sqrt_v, 1.0 - m) *
         q_log(sqrt_v / std::sqrt(det_sigma), m);
}

namespace {

// (1/2) C1 (C0 / sqrt(det V))^{1-m} [tr(V^-1 S) + <dmu, V^-1 dmu> + 2 log_m(sqrt(det V / det S)) - d]
double m_rel_entropy_from_invariants(const QParams& mp, double trace_term, double mahalanobis,
                                     double det_sigma, double det_v) {
  const double m = mp.q;
  const double sqrt_v = std::sqrt(det_v);
  const double bracket = trace_term + mahalanobis +
                         2.0 * q_log(sqrt_v / std::sqrt(det_sigma), m) - static_cast<double>(mp.d);
  return 0.5 * mp.c1 * std::pow(mp.c0 / sqrt_v, 1.0 - m) * bracket;
}

}  // namespace

double m_rel_entropy_closed(const QParams& mp, double mu_a, double var_a, double mu_b,
                            double var_b) {
  if (mp.d != 1) throw InvalidParameter("m_rel_entropy_closed: scalar overload needs d == 1");
  if (!(var_a > 0.0) || !(var_b > 0.0)) {
    throw DomainError("m_rel_entropy_closed: variances must be positive");
  }
  const double dm = mu_a - mu_b;
  return m_rel_entropy_from_invariants(mp, var_a / var_b, dm * dm / var_b, var_a, var_b);
}

double m_rel_entropy_closed(const QParams& mp, Vec2 mu_a, const Sym2& sigma_a, Vec2 mu_b,
                            const Sym2& sigma_b) {
  if (mp.d != 2) throw InvalidParameter("m_rel_entropy_closed: matrix overload needs d == 2");
  if (!sigma_a.positive_definite() || !sigma_b.positive_definite()) {
    throw DomainError("m_rel_entropy_closed: covariance is not positive definite");
  }
  const Vec2 dm{mu_a.x - mu_b.x, mu_a.y - mu_b.y};
  return m_rel_entropy_from_invariants(mp, trace_inv_product(sigma_b, sigma_a),
                                       sigma_b.inverse().quadratic(dm), sigma_a.det(),
                                       sigma_b.det());
}

double m_rel_entropy_closed(const MBivariate& a, const MBivariate& b) {
  if (a.m() != b.m()) throw InvalidParameter("m_rel_entropy_closed: mismatched m");
  return m_rel_entropy_closed(a.mparams(), a.mean(), a.covariance(), b.mean(), b.covariance());
}

}  // namespace qflow
