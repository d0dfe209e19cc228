#pragma once

// q-deformed exponential calculus and the constants of the q-Gaussian family.
//
// Every other module reads its constants from QParams; nothing else in the
// library re-derives C0, C1, alpha, A, B or C.

namespace qflow {

/// exp_q(t) = [1 + (1-q) t]_+^{1/(1-q)}.
///
/// q == 1 is the ordinary exponential. When the bracket is non-positive the
/// result is 0 for q < 1 and +infinity for q > 1 (the convention 0^a = inf
/// for a < 0). Never throws.
double q_exp(double t, double q);

/// log_q(t) = (t^{1-q} - 1) / (1-q); q == 1 is the natural logarithm.
/// Throws DomainError for t <= 0.
double q_log(double t, double q);

/// Normalisation exponent constant C1(q, d) = 2 / (2 + (d+2)(1-q)).
double c1_constant(double q, int d);

/// Normalisation constant C0(q, d) of the q-Gaussian density. The Gamma
/// branch is chosen by q < 1 versus q > 1. Throws InvalidParameter when a
/// Gamma argument would be non-positive or when C1 is not positive.
double c0_constant(double q, int d);

/// True when q lies in (0, 1) U (1, (d+4)/(d+2)).
bool in_admissible_set(double q, int d);

enum class RangePolicy {
  /// q in (0, 1) U (1, (d+4)/(d+2)) only.
  kStrict,
  /// Also accepts q <= 0, where every constant is still finite and positive.
  /// Used for the bivariate constants at m = 3 - 2/q <= 0.
  kExtended,
};

/// Constants of the q-Gaussian family in dimension d, computed once.
struct QParams {
  double q = 0.0;
  int d = 1;
  /// Companion exponent m = 3 - 2/q of the bivariate reference measures.
  double m = 0.0;
  /// Barenblatt self-similarity exponent alpha = 1 / (d(1-q) + 2).
  double alpha = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  /// Barenblatt amplitude A (normalises the source solution to unit mass).
  double barenblatt_a = 0.0;
  /// Barenblatt profile coefficient B = (1-q) alpha / (2 (2-q)).
  double barenblatt_b = 0.0;
  /// Variance scale C: the Barenblatt profile at time t is N_q(0, C t^{2 alpha}).
  double variance_scale = 0.0;
  /// False only for kExtended parameters outside the admissible set.
  bool admissible = true;
};

/// Builds QParams for (q, d). Throws InvalidParameter for q outside the range
/// allowed by `policy`, for d < 1, or when a Gamma argument in C0 is <= 0.
QParams make_params(double q, int d, RangePolicy policy = RangePolicy::kStrict);

}  // namespace qflow
