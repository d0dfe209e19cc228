#include <cmath>
#include <random>

#include "doctest.h"
#include "qflow/errors.hpp"
#include "qflow/functionals.hpp"
#include "qflow/oracle.hpp"
#include "qflow/qgaussian.hpp"

using namespace qflow;
using doctest::Approx;

TEST_CASE("Sym2 algebra") {
  const Sym2 a{2.0, 0.5, 1.0};
  const Sym2 ai = a.inverse();
  // A A^{-1} = I
  CHECK(a.xx * ai.xx + a.xy * ai.xy == Approx(1.0));
  CHECK(a.xx * ai.xy + a.xy * ai.yy == Approx(0.0));
  CHECK(a.xy * ai.xy + a.yy * ai.yy == Approx(1.0));
  CHECK(trace_inv_product(a, a) == Approx(2.0));
  CHECK(a.quadratic({1.0, -1.0}) == Approx(2.0));
  CHECK_THROWS_AS(Sym2({1.0, 2.0, 1.0}).inverse(), DomainError);
}

TEST_CASE("QGaussian1D construction and support") {
  const QParams p = make_params(0.6, 1);
  CHECK_THROWS_AS(QGaussian1D(0.0, 0.0, p), InvalidParameter);
  CHECK_THROWS_AS(QGaussian1D(0.0, -1.0, p), InvalidParameter);
  CHECK_THROWS_AS(QGaussian1D(0.0, 1.0, make_params(0.6, 2)), InvalidParameter);

  const QGaussian1D g(0.4, 1.3, p);
  const SupportInterval s = g.support();
  CHECK(s.bounded());
  CHECK(density_1d(g, s.hi) == 0.0);
  CHECK(density_1d(g, s.lo - 0.1) == 0.0);
  CHECK(density_1d(g, s.hi - 1e-6) > 0.0);
  CHECK(g.peak_density() == Approx(density_1d(g, g.mu())));
  CHECK(g.variance() == Approx(p.variance_scale * 1.3 * 1.3));

  const QGaussian1D heavy(0.0, 1.0, make_params(1.3, 1));
  CHECK_FALSE(heavy.support().bounded());
  CHECK(density_1d(heavy, 1e3) > 0.0);
}

TEST_CASE("1D density: unit mass and variance C sigma^2 by quadrature") {
  const oracle::QuadratureConfig cfg;
  for (const double q : {0.1, 0.5, 0.9, 1.1, 1.4, 1.6}) {
    const QGaussian1D g(-0.2, 0.8, make_params(q, 1));
    CHECK(oracle::moment_quad(g, 0, cfg).value == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(oracle::moment_quad(g, 1, cfg).value) < 1e-12);
    CHECK(oracle::moment_quad(g, 2, cfg).value == Approx(g.variance()).epsilon(1e-10));
  }
}

TEST_CASE("bivariate density: mass and covariance by quadrature") {
  const oracle::QuadratureConfig cfg;
  for (const double m : {0.4, 0.8, 1.2, 1.4}) {
    const MBivariate b(m, 0.3, 0.9, -0.5, 1.4, 0.35);
    std::vector<oracle::Ellipse> bound;
    if (m < 1.0) bound.push_back(oracle::support_ellipse(b));
    const auto integrate = [&](auto f) {
      return oracle::integrate_2d(f, b.mean(), b.covariance(), bound, m < 1.0, cfg).value;
    };
    CHECK(integrate([&](double x, double y) { return density_2d(b, x, y); }) ==
          Approx(1.0).epsilon(1e-11));
    const double cxy = integrate([&](double x, double y) {
      return (x - b.mu1()) * (y - b.mu2()) * density_2d(b, x, y);
    });
    CHECK(cxy == Approx(b.covariance().xy).epsilon(1e-9));
    const double cyy =
        integrate([&](double x, double y) { return (y - b.mu2()) * (y - b.mu2()) * density_2d(b, x, y); });
    CHECK(cyy == Approx(b.covariance().yy).epsilon(1e-9));
  }
}

TEST_CASE("MBivariate validation") {
  CHECK_THROWS_AS(MBivariate(0.5, 0, 1, 0, 1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(MBivariate(0.5, 0, -1, 0, 1, 0.0), InvalidParameter);
  CHECK_THROWS_AS(MBivariate(1.5, 0, 1, 0, 1, 0.0), InvalidParameter);
  CHECK_THROWS_AS(MBivariate(1.0, 0, 1, 0, 1, 0.0), InvalidParameter);

  const MBivariate ext(-0.5, 0, 1, 0, 1, 0.2);
  CHECK_FALSE(ext.verified_range());
  CHECK_THROWS_AS(ext.require_verified_range(), OutsideVerifiedRange);
  CHECK(MBivariate(0.5, 0, 1, 0, 1, 0.2).verified_range());
}

TEST_CASE("entropy_diff_closed in d = 1 equals b C log_q(sigma0 / sigma)") {
  for (const double q : {0.2, 0.7, 0.95, 1.05, 1.3, 1.6}) {
    const QParams p = make_params(q, 1);
    const double c = p.variance_scale;
    for (const double s0 : {0.5, 1.0, 2.0}) {
      const double s = 1.37 * s0;
      const double b = coefficients(q, s0).b;
      CHECK(entropy_diff_closed(p, c * s * s, c * s0 * s0) ==
            Approx(b * c * q_log(s0 / s, q)).epsilon(1e-10));
    }
  }
}

TEST_CASE("entropy_diff_closed matches differences of quadrature entropies") {
  const oracle::QuadratureConfig cfg;
  for (const double q : {0.3, 0.8, 1.2, 1.5}) {
    const QParams p = make_params(q, 1);
    const QGaussian1D a(0.0, 1.9, p);
    const QGaussian1D b(1.0, 0.6, p);
    const double quad = oracle::tsallis_entropy_quad(a, cfg).value - oracle::tsallis_entropy_quad(b, cfg).value;
    CHECK(entropy_diff_closed(p, a.variance(), b.variance()) == Approx(quad).epsilon(1e-10));
  }
  CHECK_THROWS_AS(entropy_diff_closed(make_params(0.5, 1), 0.0, 1.0), DomainError);
}

TEST_CASE("m_rel_entropy_closed: zero on the diagonal, positive elsewhere") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const double m : {0.3, 0.8, 1.2, 1.45}) {
    const QParams mp = make_params(m, 2);
    for (int i = 0; i < 25; ++i) {
      const Vec2 ma{u(rng), u(rng)};
      const Vec2 mb{u(rng), u(rng)};
      const Sym2 sa{1.0 + 0.5 * u(rng), 0.3 * u(rng), 1.2 + 0.5 * u(rng)};
      const Sym2 sb{0.9 + 0.5 * u(rng), 0.3 * u(rng), 1.1 + 0.5 * u(rng)};
      CHECK(std::abs(m_rel_entropy_closed(mp, ma, sa, ma, sa)) < 1e-14);
      CHECK(m_rel_entropy_closed(mp, ma, sa, mb, sb) > 0.0);
    }
  }
  const QParams m1 = make_params(0.5, 1);
  CHECK(m_rel_entropy_closed(m1, 0.2, 1.5, 0.2, 1.5) == Approx(0.0));
  CHECK(m_rel_entropy_closed(m1, 0.2, 1.5, 0.0, 1.0) > 0.0);
  CHECK_THROWS_AS(m_rel_entropy_closed(m1, 0.0, -1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(m_rel_entropy_closed(make_params(0.5, 2), 0.0, 1.0, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("m_rel_entropy_closed against quadrature, nested supports") {
  const oracle::QuadratureConfig cfg;
  for (const double m : {0.25, 0.6, 0.95, 1.05, 1.25, 1.45}) {
    const MBivariate q(m, 0.1, 0.7, 0.0, 0.9, 0.2);
    const MBivariate p(m, 0.0, 1.1, 0.1, 1.3, -0.15);
    const double quad = oracle::m_rel_entropy_quad(q, p, cfg).value;
    CHECK(m_rel_entropy_closed(q, p) == Approx(quad).epsilon(1e-9));
  }
}
