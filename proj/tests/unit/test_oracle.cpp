#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "qflow/errors.hpp"
#include "qflow/functionals.hpp"
#include "qflow/oracle.hpp"

using namespace qflow;
using doctest::Approx;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("integrate_1d on elementary integrands") {
  const oracle::QuadratureConfig cfg;
  auto r = oracle::integrate_1d([](double x) { return x * x; }, {0.0, 3.0}, cfg);
  CHECK(r.value == Approx(9.0).epsilon(1e-14));
  CHECK(r.tolerance_met);
  CHECK(r.truncation == "exact support");

  // kink at 1 handled by a breakpoint
  const double cuts[] = {1.0};
  r = oracle::integrate_1d([](double x) { return std::abs(x - 1.0); }, {0.0, 3.0}, cfg, cuts);
  CHECK(r.value == Approx(2.5).epsilon(1e-14));

  // power-law tails
  r = oracle::integrate_1d([](double x) { return 1.0 / (1.0 + x * x); }, {-kInf, kInf}, cfg);
  CHECK(r.value == Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(r.truncation == "exp-sinh tails");
  r = oracle::integrate_1d([](double x) { return std::exp(-x); }, {2.0, kInf}, cfg);
  CHECK(r.value == Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("integrate_1d argument validation") {
  oracle::QuadratureConfig cfg;
  CHECK_THROWS_AS(oracle::integrate_1d([](double) { return 1.0; }, {1.0, 1.0}, cfg), InvalidParameter);
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(oracle::integrate_1d([](double) { return 1.0; }, {0.0, 1.0}, cfg), InvalidParameter);
}

TEST_CASE("integrate_2d: ellipse area and Gaussian mass") {
  const oracle::QuadratureConfig cfg;
  const Sym2 shape{2.0, 0.3, 0.5};
  const oracle::Ellipse e{{0.4, -0.2}, shape, 1.7};
  const double area = std::numbers::pi * e.radius_sq * std::sqrt(shape.det());
  // frame centred off the ellipse centre, rays cross the boundary once
  const oracle::Ellipse bounds[] = {e};
  auto r = oracle::integrate_2d([](double, double) { return 1.0; }, {0.5, 0.0}, Sym2{1.0, 0.0, 1.0},
                                bounds, true, cfg);
  CHECK(r.value == Approx(area).epsilon(1e-11));

  r = oracle::integrate_2d(
      [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); }, {0.0, 0.0},
      Sym2{1.0, 0.0, 1.0}, {}, false, cfg);
  CHECK(r.value == Approx(2.0 * std::numbers::pi).epsilon(1e-12));
  CHECK_THROWS_AS(oracle::integrate_2d([](double, double) { return 1.0; }, {0.0, 0.0},
                                       Sym2{1.0, 0.0, 1.0}, {}, true, cfg),
                  InvalidParameter);
}

TEST_CASE("m_rel_entropy_quad: self-divergence, printed forms, range") {
  const oracle::QuadratureConfig cfg;
  for (const double m : {0.4, 0.9, 1.1, 1.4}) {
    const MBivariate p(m, 0.2, 1.1, -0.3, 0.8, 0.4);
    CHECK(std::abs(oracle::m_rel_entropy_quad(p, p, cfg).value) < 1e-10);

    const MBivariate q(m, 0.25, 0.8, -0.2, 0.6, 0.1);
    const double split = oracle::m_rel_entropy_quad(q, p, cfg).value;
    const double bregman = oracle::m_rel_entropy_quad(q, p, cfg, oracle::LogConvention::kDensity,
                                                      oracle::RelEntropyForm::kBregman)
                               .value;
    CHECK(split == Approx(bregman).epsilon(1e-10));
  }
  const MBivariate ext(-0.5, 0, 1, 0, 1, 0.0);
  CHECK_THROWS_AS(oracle::m_rel_entropy_quad(ext, ext, cfg), OutsideVerifiedRange);
}

TEST_CASE("log conventions coincide for nested supports and differ otherwise") {
  const oracle::QuadratureConfig cfg;
  const double m = 0.5;
  const MBivariate p(m, 0.0, 1.0, 0.0, 1.0, 0.0);
  const MBivariate inner(m, 0.1, 0.5, 0.0, 0.5, 0.2);
  const auto density = oracle::m_rel_entropy_quad(inner, p, cfg, oracle::LogConvention::kDensity);
  const auto potential = oracle::m_rel_entropy_quad(inner, p, cfg, oracle::LogConvention::kPotential);
  CHECK(density.value == Approx(potential.value).epsilon(1e-12));

  // Q sticks out of supp P: only the potential convention reproduces the closed form
  const MBivariate outer(m, 1.0, 0.9, 0.0, 0.5, 0.0);
  const double closed = m_rel_entropy_closed(outer, p);
  CHECK(oracle::m_rel_entropy_quad(outer, p, cfg, oracle::LogConvention::kPotential).value ==
        Approx(closed).epsilon(1e-10));
  CHECK(std::abs(oracle::m_rel_entropy_quad(outer, p, cfg, oracle::LogConvention::kDensity).value -
                 closed) > 1e-6);
}

TEST_CASE("minimize_theta recovers P's own correlation") {
  oracle::ThetaSearchConfig cfg;
  for (const double m : {0.5, 1.2}) {
    const MBivariate p(m, 0.1, 1.0, -0.2, 1.5, 0.4);
    const auto r = oracle::minimize_theta(p, p.mu1(), p.s1(), p.mu2(), p.s2(), cfg);
    CHECK(r.theta == Approx(0.4).epsilon(1e-6));
    CHECK(std::abs(r.value) < 1e-10);
  }
  cfg.grid_points = 2;
  const MBivariate p(0.5, 0, 1, 0, 1, 0.0);
  CHECK_THROWS_AS(oracle::minimize_theta(p, 0, 1, 0, 1, cfg), InvalidParameter);
}

TEST_CASE("minimize_theta solves the theta equation; Pythagorean identity") {
  oracle::ThetaSearchConfig cfg;
  for (const double m : {0.3, 1.2}) {
    const MBivariate p(m, 0.1, 1.0, -0.2, 1.5, 0.4);
    const double nu1 = 0.3, xi1 = 0.8, nu2 = 0.1, xi2 = 1.3;
    const auto r = oracle::minimize_theta(p, nu1, xi1, nu2, xi2, cfg);
    const double k = (3.0 - m) / 2.0;
    const double lhs = r.theta / std::pow(1.0 - r.theta * r.theta, k);
    const double rhs = 0.4 / std::pow(1.0 - 0.16, k) * std::pow(xi1 * xi2 / (1.0 * 1.5), 2.0 - m);
    CHECK(std::abs(lhs - rhs) < 1e-5);

    const MBivariate star(m, nu1, xi1, nu2, xi2, r.theta);
    for (const double th : {-0.8, 0.0, 0.6}) {
      const MBivariate q(m, nu1, xi1, nu2, xi2, th);
      CHECK(std::abs(oracle::pythagorean_defect(p, star, q, cfg.quadrature, cfg.convention).value) <
            1e-6);
    }
  }
}

TEST_CASE("minimize_kh_grid") {
  const QGaussian1D g0(0.5, 1.3, make_params(0.7, 1));
  const auto r = oracle::minimize_kh_grid(g0, 0.05);
  CHECK(r.mu == g0.mu());
  CHECK(r.value <= 0.0);
  CHECK(r.sigma > g0.sigma());
  CHECK(r.sigma_resolution > 0.0);
  CHECK_THROWS_AS(oracle::minimize_kh_grid(g0, 0.0), InvalidParameter);
}
