#include <cmath>
#include <limits>

#include "doctest.h"
#include "qflow/errors.hpp"
#include "qflow/pme_flow.hpp"
#include "qflow/qgaussian.hpp"
#include "qflow/qmath.hpp"

using namespace qflow;
using doctest::Approx;

TEST_CASE("q_exp and q_log reduce to exp and log at q = 1") {
  for (const double t : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    CHECK(q_exp(t, 1.0) == std::exp(t));
  }
  for (const double t : {0.1, 1.0, 2.5}) {
    CHECK(q_log(t, 1.0) == std::log(t));
  }
}

TEST_CASE("q_log inverts q_exp on the positive part") {
  for (const double q : {0.2, 0.5, 0.9, 0.999, 1.001, 1.3, 1.6}) {
    for (int i = 0; i <= 60; ++i) {
      const double t = -1.5 + 0.05 * i;
      const double e = q_exp(t, q);
      if (!(e > 0.0) || !std::isfinite(e)) continue;
      CHECK(std::abs(q_log(e, q) - t) <= 1e-13 * std::max(1.0, std::abs(t)));
    }
    for (const double x : {0.05, 0.5, 1.0, 2.0, 7.0}) {
      CHECK(q_exp(q_log(x, q), q) == Approx(x).epsilon(1e-13));
    }
  }
}

TEST_CASE("q_exp cut-off and blow-up conventions") {
  // q < 1: [1 + (1-q) t]_+ = 0 for t <= -1/(1-q)
  CHECK(q_exp(-5.5, 0.8) == 0.0);
  CHECK(q_exp(-100.0, 0.8) == 0.0);
  CHECK(q_exp(-4.9, 0.8) > 0.0);
  // q > 1: the bracket vanishes at t = 1/(q-1)
  CHECK(std::isinf(q_exp(5.5, 1.2)));
  CHECK(std::isinf(q_exp(6.0, 1.2)));
}

TEST_CASE("q_log rejects non-positive arguments") {
  CHECK_THROWS_AS(q_log(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(q_log(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(q_log(std::nan(""), 1.2), DomainError);
}

TEST_CASE("q-logarithm product rule") {
  // log_q(xy) = log_q x + log_q y + (1-q) log_q x log_q y
  for (const double q : {0.3, 0.8, 1.4}) {
    const double x = 1.7;
    const double y = 0.45;
    const double lx = q_log(x, q);
    const double ly = q_log(y, q);
    CHECK(q_log(x * y, q) == Approx(lx + ly + (1.0 - q) * lx * ly).epsilon(1e-14));
  }
}

// Reference values computed independently at 50 digits (mpmath) and frozen.
TEST_CASE("frozen constants") {
  CHECK(c1_constant(0.8, 1) == Approx(10.0 / 13.0).epsilon(1e-15));
  CHECK(c1_constant(0.5, 2) == Approx(0.5).epsilon(1e-15));
  CHECK(c0_constant(0.8, 1) == Approx(0.37539769139070683).epsilon(1e-14));
  CHECK(c0_constant(0.5, 2) == Approx(0.11936620731892150).epsilon(1e-14));

  const QParams p08 = make_params(0.8, 1);
  CHECK(p08.alpha == Approx(1.0 / 2.2).epsilon(1e-15));
  CHECK(p08.variance_scale == Approx(1.593405336470841).epsilon(1e-13));
  CHECK(make_params(1.2, 1).variance_scale == Approx(2.674893497895293).epsilon(1e-13));
  CHECK(make_params(0.5, 1).variance_scale == Approx(1.2149641903211006).epsilon(1e-13));
  CHECK(make_params(1.5, 1).variance_scale == Approx(5.8466656345811305).epsilon(1e-13));
}

TEST_CASE("constant identity C^{1/(2 alpha)} = (2-q) C1 C0^{1-q} / alpha") {
  for (const int d : {1, 2, 3}) {
    for (const double q : {0.05, 0.3, 0.6, 0.9, 0.999, 1.001, 1.1, 1.2}) {
      if (!in_admissible_set(q, d)) continue;
      const QParams p = make_params(q, d);
      const double lhs = std::pow(p.variance_scale, 1.0 / (2.0 * p.alpha));
      const double rhs = (2.0 - q) * p.c1 * std::pow(p.c0, 1.0 - q) / p.alpha;
      CHECK(lhs == Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("constants approach the Gaussian ones as q -> 1") {
  for (const double q : {1.0 - 1e-6, 1.0 + 1e-6}) {
    const QParams p = make_params(q, 1);
    CHECK(p.c1 == Approx(1.0).epsilon(1e-5));
    CHECK(p.c0 == Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-5));
    // heat flow: variance 2t
    CHECK(p.variance_scale == Approx(2.0).epsilon(1e-4));
    CHECK(p.alpha == Approx(0.5).epsilon(1e-5));
  }
}

TEST_CASE("admissible set and range policies") {
  CHECK(in_admissible_set(0.5, 1));
  CHECK_FALSE(in_admissible_set(1.0, 1));
  CHECK_FALSE(in_admissible_set(0.0, 1));
  CHECK(in_admissible_set(1.6, 1));
  CHECK_FALSE(in_admissible_set(5.0 / 3.0, 1));
  CHECK(in_admissible_set(1.4, 2));
  CHECK_FALSE(in_admissible_set(1.5, 2));

  CHECK_THROWS_AS(make_params(1.0, 1), InvalidParameter);
  CHECK_THROWS_AS(make_params(0.0, 1), InvalidParameter);
  CHECK_THROWS_AS(make_params(1.7, 1), InvalidParameter);
  CHECK_THROWS_AS(make_params(0.5, 0), InvalidParameter);
  CHECK_THROWS_AS(make_params(std::nan(""), 1), InvalidParameter);

  const QParams ext = make_params(-0.5, 2, RangePolicy::kExtended);
  CHECK_FALSE(ext.admissible);
  CHECK(ext.c0 > 0.0);
  CHECK(ext.c1 > 0.0);
  CHECK(make_params(0.5, 2).admissible);
  CHECK(make_params(0.8, 1).m == Approx(0.5));
}

TEST_CASE("Barenblatt profile is the q-Gaussian N_q(0, C t^{2 alpha})") {
  for (const double q : {0.3, 0.8, 1.2, 1.5}) {
    const QParams p = make_params(q, 1);
    for (const double t : {0.5, 1.0, 3.0}) {
      const QGaussian1D g(0.0, std::pow(t, p.alpha), p);
      for (const double x : {0.0, 0.4, -1.1, 2.3}) {
        CHECK(barenblatt_density(t, x, p) == Approx(density_1d(g, x)).epsilon(1e-12));
      }
    }
  }
}
