#include "qflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qflow/detail/brent.hpp"
#include "qflow/errors.hpp"
#include "qflow/pme_flow.hpp"

namespace qflow {

namespace {

void require_same_q(const QGaussian1D& a, const QGaussian1D& b, const char* where) {
  if (a.q() != b.q()) throw InvalidParameter(std::string(where) + ": mismatched q");
}

void require_positive_h(double h, const char* where) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidParameter(std::string(where) + ": h must be positive");
  }
}

// Constants of the bivariate reference measure; m = 3 - 2/q.
QParams bivariate_params(double q) { return make_params(3.0 - 2.0 / q, 2, RangePolicy::kExtended); }

struct Expansion {
  double gap;  // sigma_h^2 - sigma0^2
  EtaSolve eta;
};

Expansion expand(const QGaussian1D& g, const QGaussian1D& g0, double h, const char* where) {
  require_same_q(g, g0, where);
  require_positive_h(h, where);
  const double gap = sigma_sq_gap(g0.sigma(), h, g.q());
  return {gap, solve_eta_gap(g.sigma(), g0.sigma(), gap, g.q())};
}

}  // namespace

double wasserstein2_sq(const QGaussian1D& g1, const QGaussian1D& g2) {
  require_same_q(g1, g2, "wasserstein2_sq");
  const double ds = g1.sigma() - g2.sigma();
  const double dm = g1.mu() - g2.mu();
  return g1.params().variance_scale * ds * ds + dm * dm;
}

double entropy_diff(const QGaussian1D& g, const QGaussian1D& g0) {
  require_same_q(g, g0, "entropy_diff");
  const QParams& p = g.params();
  const double q = p.q;
  const double scale = p.c0 / (g0.sigma() * std::sqrt(p.variance_scale));
  return (2.0 - q) * p.c1 * std::pow(scale, 1.0 - q) * q_log(g0.sigma() / g.sigma(), q);
}

double kh(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  require_positive_h(h, "kh");
  return wasserstein2_sq(g, g0) / (4.0 * h) + 0.5 * entropy_diff(g, g0);
}

EtaSolve solve_eta(double sigma, double sigma0, double sigma_h, double q) {
  if (!(sigma_h > sigma0)) throw InvalidParameter("solve_eta: requires sigma_h > sigma0");
  return solve_eta_gap(sigma, sigma0, (sigma_h - sigma0) * (sigma_h + sigma0), q);
}

// The left-hand side eta^q / (1 - eta^2) increases strictly from 0 to +inf on
// (0, 1), so the root is unique. Near eta = 1 the unknown is u = 1 - eta so
// that u keeps full relative precision as h -> 0.
EtaSolve solve_eta_gap(double sigma, double sigma0, double gap, double q) {
  if (!(sigma > 0.0) || !(sigma0 > 0.0)) throw InvalidParameter("solve_eta: scales must be positive");
  if (!(gap > 0.0) || !std::isfinite(gap)) throw InvalidParameter("solve_eta: gap must be positive");
  const double log_rhs = q * std::log(sigma0) + (2.0 - q) * std::log(sigma) - std::log(gap);

  EtaSolve out;
  if (log_rhs >= std::log(2.0)) {
    const auto f = [&](double u) {
      return q * std::log1p(-u) - std::log(u) - std::log(2.0 - u) - log_rhs;
    };
    const double lo = 0.125 * std::exp(-log_rhs);
    const auto r = detail::brent_root(f, lo, 0.5, 0.0);
    out.one_minus_eta = r.root;
    out.eta = 1.0 - r.root;
    out.residual = std::expm1(-r.value);
    out.iterations = r.iterations;
  } else {
    const auto f = [&](double eta) {
      return q * std::log(eta) - std::log1p(-eta) - std::log1p(eta) - log_rhs;
    };
    const double lo = std::pow(0.25 * std::exp(std::min(log_rhs, 0.0)), 1.0 / q);
    if (!(lo > 0.0)) throw NumericalError("solve_eta: right-hand side underflows");
    const auto r = detail::brent_root(f, lo, 15.0 / 16.0, 0.0);
    out.eta = r.root;
    out.one_minus_eta = 1.0 - r.root;
    out.residual = std::expm1(r.value);
    out.iterations = r.iterations;
  }
  out.residual = std::abs(out.residual);
  return out;
}

MBivariate q0h(const QGaussian1D& g0, double h) {
  require_positive_h(h, "q0h");
  const double m = 3.0 - 2.0 / g0.q();
  const double root_c = std::sqrt(g0.params().variance_scale);
  const double sigma_h = evolve_sigma(g0.sigma(), h, g0.q());
  return {m, g0.mu(), root_c * g0.sigma(), g0.mu(), root_c * sigma_h, g0.sigma() / sigma_h};
}

MBivariate qstar(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  const Expansion e = expand(g, g0, h, "qstar");
  const double m = 3.0 - 2.0 / g0.q();
  const double root_c = std::sqrt(g0.params().variance_scale);
  return {m, g0.mu(), root_c * g0.sigma(), g.mu(), root_c * g.sigma(), e.eta.eta};
}

double jh(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  const Expansion e = expand(g, g0, h, "jh");
  const QParams mp = bivariate_params(g.q());
  const double m = mp.q;
  const double c = g.params().variance_scale;
  const double s = g.sigma();
  const double s0 = g0.sigma();
  const double ds = s - s0;
  const double dm = g.mu() - g0.mu();
  const double log_term =
      2.0 * q_log(std::pow(s0 / (s * e.eta.eta), 1.0 / (3.0 - m)), m);
  const double bracket = ds * ds / e.gap + 2.0 * s0 * s * e.eta.one_minus_eta / e.gap +
                         dm * dm / (c * e.gap) + log_term - 1.0;
  const double prefactor =
      0.5 * mp.c1 * std::pow(mp.c0 / (c * s0 * std::sqrt(e.gap)), 1.0 - m);
  return prefactor * bracket;
}

GammaCoefficients coefficients(double q, double sigma0) {
  if (!(sigma0 > 0.0)) throw InvalidParameter("coefficients: sigma0 must be positive");
  const QParams p = make_params(q, 1);
  const double c = p.variance_scale;

  GammaCoefficients out;
  out.q = q;
  out.sigma0 = sigma0;
  out.b = (2.0 - q) * p.c1 / c * std::pow(p.c0 / (sigma0 * std::sqrt(c)), 1.0 - q);
  const double m = 3.0 - 2.0 / q;
  if (m < 1.5) {
    const QParams mp = make_params(m, 2, RangePolicy::kExtended);
    out.a = 2.0 * c / mp.c1 * std::pow(mp.c0 / (c * sigma0), m - 1.0);
  }
  return out;
}

namespace {

double require_a(const GammaCoefficients& k) {
  if (!k.a) {
    throw InvalidParameter("coefficient a does not exist for q = " + std::to_string(k.q) +
                           " (needs q < 4/3)");
  }
  return *k.a;
}

}  // namespace

double rescaled_first(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  require_positive_h(h, "rescaled_first");
  const GammaCoefficients k = coefficients(g0.q(), g0.sigma());
  const double gap = sigma_sq_gap(g0.sigma(), h, g0.q());
  return require_a(k) * std::pow(gap, 1.0 / g0.q()) * jh(g, g0, h);
}

// a b gap^{(1-q)/q} J_h = b C (bracket of J_h), and subtracting b W_2^2 / gap
// removes the two leading terms exactly, leaving b C F_h.
double rescaled_second(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  const GammaCoefficients k = coefficients(g0.q(), g0.sigma());
  require_a(k);
  return k.b * g0.params().variance_scale * f_h(g, g0, h);
}

namespace {

// a x - ((1 + x)^a - 1), without the cancellation of the direct form for small x.
double binomial_remainder(double x, double a) {
  if (x >= 0.5) return a * x - std::expm1(a * std::log1p(x));
  // -sum_{k>=2} binom(a, k) x^k
  double coef = a * (a - 1.0) / 2.0;
  double power = x * x;
  double sum = 0.0;
  for (int k = 2; k < 200; ++k) {
    const double term = coef * power;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    coef *= (a - k) / (k + 1.0);
    power *= x;
  }
  return -sum;
}

}  // namespace

double rescaled_third_excess(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  require_same_q(g, g0, "rescaled_third_excess");
  require_positive_h(h, "rescaled_third_excess");
  const double q = g0.q();
  const double s0 = g0.sigma();
  const double k = 3.0 - q;
  const double gap = sigma_sq_gap(s0, h, q);
  // With x = h / s0^k: 2 h b = (2/k) s0^2 x and gap = s0^2 ((1 + x)^{2/k} - 1), so
  // b / gap - 1 / (2h) = s0^2 R(x) / (2 h gap) with R the binomial remainder.
  const double x = h / std::pow(s0, k);
  const double weight = s0 * s0 * binomial_remainder(x, 2.0 / k) / (2.0 * h * gap);
  return weight * wasserstein2_sq(g, g0);
}

double rescaled_third(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  return rescaled_second(g, g0, h) + rescaled_third_excess(g, g0, h);
}

double f_h(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  const Expansion e = expand(g, g0, h, "f_h");
  const double q = g.q();
  const double eta = e.eta.eta;
  const double ratio = g0.sigma() / g.sigma();
  return 2.0 * std::pow(eta, q) / (1.0 + eta) * std::pow(ratio, 1.0 - q) +
         q * q_log(ratio / eta, q) - 1.0;
}

double f_h_raw(const QGaussian1D& g, const QGaussian1D& g0, double h) {
  const Expansion e = expand(g, g0, h, "f_h_raw");
  const double m = 3.0 - 2.0 / g.q();
  const double s = g.sigma();
  const double s0 = g0.sigma();
  return 2.0 * s0 * s * e.eta.one_minus_eta / e.gap +
         2.0 * q_log(std::pow(s0 / (s * e.eta.eta), 1.0 / (3.0 - m)), m) - 1.0;
}

double f_limit(const QGaussian1D& g, const QGaussian1D& g0) {
  require_same_q(g, g0, "f_limit");
  return q_log(g0.sigma() / g.sigma(), g.q());
}

// The mu-part of K_h is a detached quadratic, so mu* = mu0. In sigma, K_h is
// strictly convex and stationary where sigma - sigma0 = h b sigma0^{1-q} sigma^{q-2}.
QGaussian1D jko_step(const QGaussian1D& g0, double h) {
  require_positive_h(h, "jko_step");
  const double q = g0.q();
  const double s0 = g0.sigma();
  const double drift = h * coefficients(q, s0).b * std::pow(s0, 1.0 - q);
  const auto stationarity = [&](double s) { return s - s0 - drift * std::pow(s, q - 2.0); };
  const double hi = s0 + drift * std::pow(s0, q - 2.0);
  const auto r = detail::brent_root(stationarity, s0, hi, 0.0);
  const QGaussian1D next = g0.with_sigma(r.root);

  // second derivative of K_h in sigma: C/(2h) + (C b (2-q)/2) sigma0^{1-q} sigma^{q-3}
  const double c = g0.params().variance_scale;
  const double curvature =
      c / (2.0 * h) + 0.5 * c * (2.0 - q) * (drift / h) * std::pow(r.root, q - 3.0);
  if (!(curvature > 0.0) || kh(next, g0, h) > 0.0) {
    throw NumericalError("jko_step: stationary point is not a minimum");
  }
  return next;
}

std::vector<QGaussian1D> jko_trajectory(const QGaussian1D& g0, double h, int steps) {
  if (steps < 1) throw InvalidParameter("jko_trajectory: steps must be >= 1");
  std::vector<QGaussian1D> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(g0);
  for (int n = 0; n < steps; ++n) out.push_back(jko_step(out.back(), h));
  return out;
}

}  // namespace qflow
