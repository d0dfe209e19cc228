#include <cmath>
#include <vector>

#include "doctest.h"
#include "qflow/errors.hpp"
#include "qflow/oracle.hpp"
#include "qflow/pme_flow.hpp"

using namespace qflow;
using doctest::Approx;

TEST_CASE("evolve_sigma basics") {
  CHECK(evolve_sigma(1.3, 0.0, 0.8) == 1.3);
  // q = 1 is the heat flow: sigma^2 grows linearly
  CHECK(evolve_sigma(1.0, 0.5, 1.0) == Approx(std::sqrt(1.5)));
  CHECK(evolve_sigma(2.0, 1.0, 0.5) == Approx(std::pow(1.0 + std::pow(2.0, 2.5), 0.4)));
  CHECK_THROWS_AS(evolve_sigma(0.0, 1.0, 0.8), InvalidParameter);
  CHECK_THROWS_AS(evolve_sigma(1.0, -1.0, 0.8), InvalidParameter);
}

TEST_CASE("semigroup property") {
  for (const double q : {0.3, 0.8, 1.2, 1.5}) {
    const QGaussian1D g0(0.4, 0.9, make_params(q, 1));
    const FlowState s0{g0, 0.0};
    const FlowState two = s0.advanced(0.3).advanced(0.45);
    const FlowState one = s0.advanced(0.75);
    CHECK(two.t == Approx(one.t));
    CHECK(two.g.sigma() == Approx(one.g.sigma()).epsilon(1e-14));
    CHECK(two.g.mu() == g0.mu());
  }
}

TEST_CASE("sigma_sq_gap is accurate for tiny h") {
  for (const double q : {0.8, 1.2}) {
    for (const double s0 : {0.5, 1.0, 3.0}) {
      // leading order: gap = 2 s0^{q-1} h / (3-q)
      const double h = 1e-12;
      const double lead = 2.0 * std::pow(s0, q - 1.0) * h / (3.0 - q);
      CHECK(sigma_sq_gap(s0, h, q) == Approx(lead).epsilon(1e-10));
      const double sh = evolve_sigma(s0, 0.3, q);
      CHECK(sigma_sq_gap(s0, 0.3, q) == Approx(sh * sh - s0 * s0).epsilon(1e-13));
    }
  }
}

TEST_CASE("theta_map_1d is the variance update") {
  const double q = 0.7;
  const double v = 2.3;
  CHECK(theta_map_1d(v, q) == Approx(std::pow(v, 2.0 / (3.0 - q))));
  CHECK_THROWS_AS(theta_map_1d(0.0, q), InvalidParameter);
}

TEST_CASE("mass is conserved along the flow") {
  const oracle::QuadratureConfig cfg;
  for (const double q : {0.5, 1.3}) {
    const QGaussian1D g0(0.0, 1.0, make_params(q, 1));
    for (const double t : {0.1, 1.0, 10.0}) {
      CHECK(oracle::moment_quad(evolve(g0, t), 0, cfg).value == Approx(1.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("PDE residual shrinks at second order") {
  for (const double q : {0.8, 1.2}) {
    const QGaussian1D g0(0.0, 1.0, make_params(q, 1));
    std::vector<double> r;
    for (const double step : {0.02, 0.01, 0.005}) {
      PdeGrid grid;
      grid.dx = step;
      grid.dt = step;
      r.push_back(pde_residual(g0, 1.0, grid));
    }
    CHECK(r[0] / r[1] == Approx(4.0).epsilon(0.1));
    CHECK(r[1] / r[2] == Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("pde_residual rejects degenerate grids") {
  const QGaussian1D g0(0.0, 1.0, make_params(0.8, 1));
  PdeGrid grid;
  CHECK_THROWS_AS(pde_residual(g0, 0.0, grid), InvalidParameter);
  grid.dt = 2.0;
  CHECK_THROWS_AS(pde_residual(g0, 1.0, grid), InvalidParameter);
  grid = PdeGrid{};
  grid.points = 1;
  CHECK_THROWS_AS(pde_residual(g0, 1.0, grid), InvalidParameter);
  grid = PdeGrid{};
  grid.dx = 5.0;  // stencil reaches past the support
  CHECK_THROWS_AS(pde_residual(g0, 1.0, grid), InvalidParameter);
}
