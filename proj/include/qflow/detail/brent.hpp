#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qflow/errors.hpp"

namespace qflow::detail {

struct RootResult {
  double root = 0.0;
  double value = 0.0;
  int iterations = 0;
};

// Brent's zeroin: bisection safeguarded by secant and inverse quadratic
// interpolation. Requires f(lo) and f(hi) of opposite sign (or one of them 0).
// Terminates when the bracket is narrower than 2 * (4 eps |b| + xtol / 2).
template <class F>
RootResult brent_root(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  if ((fa > 0.0) == (fb > 0.0)) throw NumericalError("brent_root: root is not bracketed");

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 1; iter <= max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double mid = 0.5 * (c - b);
    if (std::abs(mid) <= tol || fb == 0.0) return {b, fb, iter};

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p = 0.0;
      double r = 0.0;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * mid * s;
        r = 1.0 - s;
      } else {
        const double t = fa / fc;
        const double u = fb / fc;
        p = s * (2.0 * mid * t * (t - u) - (b - a) * (u - 1.0));
        r = (t - 1.0) * (u - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        r = -r;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * mid * r - std::abs(tol * r), std::abs(e * r))) {
        e = d;
        d = p / r;
      } else {
        d = mid;
        e = d;
      }
    } else {
      d = mid;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (mid > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw NumericalError("brent_root: no convergence");
}

}  // namespace qflow::detail
