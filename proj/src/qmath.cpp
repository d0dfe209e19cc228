#include "qflow/qmath.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "qflow/errors.hpp"

namespace qflow {

double q_exp(double t, double q) {
  if (q == 1.0) return std::exp(t);
  const double x = (1.0 - q) * t;
  const double exponent = 1.0 / (1.0 - q);
  if (x > -1.0) return std::exp(exponent * std::log1p(x));
  // [1 + x]_+ == 0 here.
  return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double q_log(double t, double q) {
  if (!(t > 0.0)) {
    throw DomainError("q_log: argument must be positive, got " + std::to_string(t));
  }
  if (q == 1.0) return std::log(t);
  return std::expm1((1.0 - q) * std::log(t)) / (1.0 - q);
}

double c1_constant(double q, int d) {
  const double denom = 2.0 + (d + 2) * (1.0 - q);
  if (!(denom > 0.0)) {
    throw InvalidParameter("C1(q, d) is not positive for q = " + std::to_string(q));
  }
  return 2.0 / denom;
}

// Gamma ratios go through Boost's tgamma_delta_ratio, which evaluates
// Gamma(a) / Gamma(a + delta) with the lanczos13m53 approximation for double
// and stays accurate when a is large (q close to 1).
double c0_constant(double q, int d) {
  const double half_d = 0.5 * d;
  const double c1 = c1_constant(q, d);
  double gamma_ratio = 0.0;
  double base = 0.0;
  if (q < 1.0) {
    const double a = (2.0 - q) / (1.0 - q);
    if (!(a > 0.0)) throw InvalidParameter("C0: Gamma argument is not positive");
    // Gamma(a + d/2) / Gamma(a)
    gamma_ratio = 1.0 / boost::math::tgamma_delta_ratio(a, half_d);
    base = (1.0 - q) * c1 / (2.0 * std::numbers::pi);
  } else if (q > 1.0) {
    const double a = 1.0 / (q - 1.0);
    if (!(a - half_d > 0.0)) throw InvalidParameter("C0: Gamma argument is not positive");
    // Gamma(a) / Gamma(a - d/2)
    gamma_ratio = 1.0 / boost::math::tgamma_delta_ratio(a - half_d, half_d);
    base = (q - 1.0) * c1 / (2.0 * std::numbers::pi);
  } else {
    throw InvalidParameter("C0: q = 1 is the Gaussian limit, not a q-Gaussian");
  }
  return gamma_ratio * std::pow(base, half_d);
}

bool in_admissible_set(double q, int d) {
  if (d < 1) return false;
  const double upper = (d + 4.0) / (d + 2.0);
  return (q > 0.0 && q < 1.0) || (q > 1.0 && q < upper);
}

QParams make_params(double q, int d, RangePolicy policy) {
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  if (!std::isfinite(q)) throw InvalidParameter("q must be finite");
  const bool admissible = in_admissible_set(q, d);
  if (!admissible) {
    const bool extended_ok =
        policy == RangePolicy::kExtended && q <= 0.0;
    if (!extended_ok) {
      throw InvalidParameter("q = " + std::to_string(q) +
                             " is outside (0,1) U (1,(d+4)/(d+2)) for d = " + std::to_string(d));
    }
  }

  QParams p;
  p.q = q;
  p.d = d;
  p.m = 3.0 - 2.0 / q;
  p.admissible = admissible;
  p.alpha = 1.0 / (d * (1.0 - q) + 2.0);
  p.c1 = c1_constant(q, d);
  p.c0 = c0_constant(q, d);
  const double one_minus_q = 1.0 - q;
  p.barenblatt_a = std::pow(p.c0, 2.0 * p.alpha * one_minus_q) *
                   std::pow(p.alpha / ((2.0 - q) * p.c1), d * p.alpha * one_minus_q);
  p.barenblatt_b = one_minus_q * p.alpha / (2.0 * (2.0 - q));
  p.variance_scale = (2.0 - q) * p.c1 / p.alpha * p.barenblatt_a;
  return p;
}

}  // namespace qflow
