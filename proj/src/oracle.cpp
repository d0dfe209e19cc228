#include "qflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "qflow/errors.hpp"
#include "qflow/functionals.hpp"

namespace qflow::oracle {

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Building the abscissa tables is the expensive part of the double-exponential
// rules, so one instance per refinement depth is kept per thread.
tanh_sinh<double>& finite_rule(int depth) {
  thread_local std::map<int, std::unique_ptr<tanh_sinh<double>>> cache;
  auto& slot = cache[depth];
  if (!slot) slot = std::make_unique<tanh_sinh<double>>(static_cast<std::size_t>(depth));
  return *slot;
}

exp_sinh<double>& tail_rule(int depth) {
  thread_local std::map<int, std::unique_ptr<exp_sinh<double>>> cache;
  auto& slot = cache[depth];
  if (!slot) slot = std::make_unique<exp_sinh<double>>(static_cast<std::size_t>(depth));
  return *slot;
}

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.tail_mass_bound > 0.0)) {
    throw InvalidParameter("quadrature tolerances must be positive");
  }
  if (cfg.max_subdivisions < 1) throw InvalidParameter("max_subdivisions must be >= 1");
}

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  bool ok = true;
  bool used_tails = false;

  QuadratureResult result() const {
    QuadratureResult r;
    r.value = value;
    r.error_estimate = error;
    r.tolerance_met = ok && std::isfinite(value);
    r.truncation = used_tails ? "exp-sinh tails" : "exact support";
    return r;
  }
};

void add_finite(Accumulator& acc, const std::function<double(double)>& f, double a, double b,
                const QuadratureConfig& cfg) {
  if (!(b > a)) return;
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  // Mapped onto (-1, 1) by hand; zc is the distance of z to the nearer end
  // (negative on the left), which keeps abscissae next to a and b exact.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto g = [&](double z, double zc) {
    if (z < -0.5) return f(a - half * zc);
    if (z > 0.5) return f(b - half * zc);
    return f(mid + half * z);
  };
  const double v =
      half * finite_rule(cfg.max_subdivisions).integrate(g, cfg.rel_tol, &err, &l1, &levels);
  err *= half;
  l1 *= half;
  acc.value += v;
  acc.error += err;
  if (err > std::max(cfg.rel_tol * l1, cfg.abs_tol)) acc.ok = false;
}

// int_a^inf f (direction +1) or int_-inf^a f (direction -1), via x = a + dir * scale * t.
void add_tail(Accumulator& acc, const std::function<double(double)>& f, double a, int direction,
              double scale, const QuadratureConfig& cfg) {
  const auto g = [&](double t) { return scale * f(a + direction * scale * t); };
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = tail_rule(cfg.max_subdivisions).integrate(g, 0.0, kInf, cfg.rel_tol, &err, &l1, &levels);
  acc.value += v;
  acc.error += err;
  acc.used_tails = true;
  if (err > std::max(cfg.rel_tol * l1, cfg.tail_mass_bound)) acc.ok = false;
}

// Integral over [lo, hi] split at `cuts`; either end may be infinite.
Accumulator integrate_pieces(const std::function<double(double)>& f, double lo, double hi,
                             std::vector<double> cuts, const QuadratureConfig& cfg) {
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double c) { return !(c > lo && c < hi) || !std::isfinite(c); }),
             cuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if ((lo_inf || hi_inf) && cuts.empty()) {
    cuts.push_back(lo_inf ? (hi_inf ? 0.0 : hi - 1.0) : lo + 1.0);
  }
  double scale = 1.0;
  if (cuts.size() > 1) scale = cuts.back() - cuts.front();

  Accumulator acc;
  std::vector<double> nodes;
  nodes.push_back(lo);
  nodes.insert(nodes.end(), cuts.begin(), cuts.end());
  nodes.push_back(hi);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    if (std::isinf(a)) {
      add_tail(acc, f, b, -1, scale, cfg);
    } else if (std::isinf(b)) {
      add_tail(acc, f, a, +1, scale, cfg);
    } else {
      add_finite(acc, f, a, b, cfg);
    }
  }
  return acc;
}

// Lower-triangular factor of a 2x2 SPD matrix.
struct Chol2 {
  double l11;
  double l21;
  double l22;
  double det;
};

Chol2 cholesky(const Sym2& s) {
  if (!s.positive_definite()) throw DomainError("integrate_2d: frame is not positive definite");
  const double l11 = std::sqrt(s.xx);
  const double l21 = s.xy / l11;
  const double l22 = std::sqrt(s.yy - l21 * l21);
  return {l11, l21, l22, l11 * l22};
}

// Positive r with center + r v on the boundary of e.
void ray_crossings(const Ellipse& e, Vec2 center, Vec2 v, std::vector<double>& out) {
  const Sym2 inv = e.shape.inverse();
  const Vec2 d{center.x - e.center.x, center.y - e.center.y};
  const double a = inv.quadratic(v);
  const double b = inv.xx * d.x * v.x + inv.xy * (d.x * v.y + d.y * v.x) + inv.yy * d.y * v.y;
  const double c = inv.quadratic(d) - e.radius_sq;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return;
  const double root = std::sqrt(disc);
  // numerically stable pair of roots of a r^2 + 2 b r + c
  const double t = -(b + std::copysign(root, b));
  const double r1 = t / a;
  const double r2 = t != 0.0 ? c / t : 0.0;
  if (r1 > 0.0) out.push_back(r1);
  if (r2 > 0.0) out.push_back(r2);
}

// Weight function value phi(f) = f log_m f, with phi(0) = 0.
double f_log_f(double f, double m) {
  if (!(f > 0.0)) return 0.0;
  return f * q_log(f, m);
}

// log_m of the density of b at (x, y). The potential form
// log_m(n exp_m(s)) = log_m n + s n^{1-m} is affine in the quadratic form and
// defined everywhere; under kDensity it is floored at log_m(0) = -1/(1-m).
class LogDensity {
 public:
  LogDensity(const MBivariate& b, LogConvention convention)
      : b_(b),
        inv_(b.covariance().inverse()),
        c1_(b.mparams().c1),
        log_norm_(q_log(b.mparams().c0 / std::sqrt(b.covariance().det()), b.m())),
        slope_(std::pow(b.mparams().c0 / std::sqrt(b.covariance().det()), 1.0 - b.m())),
        floor_(b.m() < 1.0 && convention == LogConvention::kDensity ? -1.0 / (1.0 - b.m())
                                                                     : -kInf) {}

  double operator()(double x, double y) const {
    const Vec2 d{x - b_.mu1(), y - b_.mu2()};
    const double s = -0.5 * c1_ * inv_.quadratic(d);
    return std::max(log_norm_ + s * slope_, floor_);
  }

 private:
  MBivariate b_;
  Sym2 inv_;
  double c1_;
  double log_norm_;
  double slope_;
  double floor_;
};

Ellipse frame_of(const MBivariate& b) { return {b.mean(), b.covariance(), 0.0}; }

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, SupportInterval support,
                              const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  validate(cfg);
  if (!(support.hi > support.lo)) throw InvalidParameter("integrate_1d: empty support");
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  return integrate_pieces(f, support.lo, support.hi, std::move(cuts), cfg).result();
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, Vec2 center,
                              const Sym2& frame_shape, std::span<const Ellipse> boundaries,
                              bool bounded, const QuadratureConfig& cfg) {
  validate(cfg);
  if (bounded && boundaries.empty()) {
    throw InvalidParameter("integrate_2d: a bounded domain needs at least one boundary");
  }
  const Chol2 l = cholesky(frame_shape);

  Accumulator total;
  bool inner_ok = true;
  bool inner_tails = false;
  std::vector<double> crossings;
  const auto angular = [&](double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const Vec2 v{l.l11 * c, l.l21 * c + l.l22 * s};
    crossings.clear();
    for (const Ellipse& e : boundaries) ray_crossings(e, center, v, crossings);
    double r_max = kInf;
    if (bounded) {
      if (crossings.empty()) return 0.0;
      r_max = *std::max_element(crossings.begin(), crossings.end());
    }
    const std::function<double(double)> radial = [&](double r) {
      return r * f(center.x + r * v.x, center.y + r * v.y);
    };
    const Accumulator a = integrate_pieces(radial, 0.0, r_max, crossings, cfg);
    inner_ok = inner_ok && a.ok;
    inner_tails = inner_tails || a.used_tails;
    return a.value;
  };

  double err = 0.0;
  double l1 = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(
      angular, 0.0, kTwoPi, static_cast<unsigned>(cfg.max_subdivisions), cfg.rel_tol, &err, &l1);
  total.value = l.det * v;
  total.error = l.det * err;
  total.ok = inner_ok && err <= std::max(cfg.rel_tol * l1, cfg.abs_tol);
  total.used_tails = inner_tails;
  return total.result();
}

Ellipse support_ellipse(const MBivariate& b) {
  if (!(b.m() < 1.0)) throw InvalidParameter("support_ellipse: support is bounded only for m < 1");
  // 1 - (1-m) C1 <x, S^-1 x> / 2 >= 0
  return {b.mean(), b.covariance(), 2.0 / ((1.0 - b.m()) * b.mparams().c1)};
}

QuadratureResult m_rel_entropy_quad(const MBivariate& q, const MBivariate& p,
                                    const QuadratureConfig& cfg, LogConvention convention,
                                    RelEntropyForm form) {
  if (q.m() != p.m()) throw InvalidParameter("m_rel_entropy_quad: mismatched m");
  q.require_verified_range();
  const double m = q.m();
  const bool bounded = m < 1.0;
  const LogDensity log_p(p, convention);

  std::vector<Ellipse> supports;
  if (bounded) supports = {support_ellipse(q), support_ellipse(p)};

  const auto fq = [&](double x, double y) { return density_2d(q, x, y); };
  const auto fp = [&](double x, double y) { return density_2d(p, x, y); };

  if (form == RelEntropyForm::kBregman) {
    const auto integrand = [&](double x, double y) {
      const double a = fq(x, y);
      const double b = fp(x, y);
      const double lg = log_p(x, y);
      const double cross = (a == b) ? 0.0 : lg * (a - b);
      return (f_log_f(a, m) - f_log_f(b, m) - (2.0 - m) * cross) / (2.0 - m);
    };
    const Ellipse frame = frame_of(p);
    return integrate_2d(integrand, frame.center, frame.shape, supports, bounded, cfg);
  }

  // Three plane integrals, each in the frame of the density that weights it.
  const std::span<const Ellipse> own_q = bounded ? std::span<const Ellipse>(supports.data(), 1)
                                                 : std::span<const Ellipse>();
  const std::span<const Ellipse> own_p = bounded ? std::span<const Ellipse>(supports.data() + 1, 1)
                                                 : std::span<const Ellipse>();
  const QuadratureResult i_qq = integrate_2d([&](double x, double y) { return f_log_f(fq(x, y), m); },
                                             q.mean(), q.covariance(), own_q, bounded, cfg);
  const QuadratureResult i_pp = integrate_2d([&](double x, double y) { return f_log_f(fp(x, y), m); },
                                             p.mean(), p.covariance(), own_p, bounded, cfg);
  // Weighted by q. Under kDensity log_m p has a kink on the boundary of supp p,
  // so those crossings become breakpoints; the integrand vanishes off supp q,
  // so the farthest crossing is a safe end for each ray.
  const bool kinked = bounded && convention == LogConvention::kDensity;
  const QuadratureResult i_qp = integrate_2d(
      [&](double x, double y) {
        const double a = fq(x, y);
        return a > 0.0 ? a * log_p(x, y) : 0.0;
      },
      q.mean(), q.covariance(), kinked ? std::span<const Ellipse>(supports) : own_q, bounded, cfg);

  QuadratureResult out;
  out.value = (i_qq.value + (1.0 - m) * i_pp.value - (2.0 - m) * i_qp.value) / (2.0 - m);
  out.error_estimate = (i_qq.error_estimate + std::abs(1.0 - m) * i_pp.error_estimate +
                        (2.0 - m) * i_qp.error_estimate) /
                       (2.0 - m);
  out.tolerance_met = i_qq.tolerance_met && i_pp.tolerance_met && i_qp.tolerance_met;
  out.truncation = i_qq.truncation;
  return out;
}

QuadratureResult tsallis_entropy_quad(const QGaussian1D& g, const QuadratureConfig& cfg) {
  const double q = g.q();
  const double cuts[] = {g.mu() - g.stddev(), g.mu(), g.mu() + g.stddev()};
  return integrate_1d([&](double x) { return f_log_f(density_1d(g, x), q); }, g.support(), cfg,
                      cuts);
}

QuadratureResult moment_quad(const QGaussian1D& g, int k, const QuadratureConfig& cfg) {
  if (k < 0 || k > 2) throw InvalidParameter("moment_quad: k must be 0, 1 or 2");
  const double cuts[] = {g.mu() - g.stddev(), g.mu(), g.mu() + g.stddev()};
  return integrate_1d(
      [&](double x) {
        const double d = x - g.mu();
        const double w = k == 0 ? 1.0 : (k == 1 ? d : d * d);
        return w * density_1d(g, x);
      },
      g.support(), cfg, cuts);
}

QuadratureResult bivariate_entropy_quad(const MBivariate& b, const QuadratureConfig& cfg) {
  b.require_verified_range();
  const bool bounded = b.m() < 1.0;
  std::vector<Ellipse> supports;
  if (bounded) supports.push_back(support_ellipse(b));
  return integrate_2d([&](double x, double y) { return f_log_f(density_2d(b, x, y), b.m()); },
                      b.mean(), b.covariance(), supports, bounded, cfg);
}

ThetaMinimum minimize_theta(const MBivariate& p, double nu1, double xi1, double nu2, double xi2,
                            const ThetaSearchConfig& cfg) {
  if (cfg.grid_points < 3) throw InvalidParameter("minimize_theta: need at least 3 grid points");
  if (!(cfg.theta_tol > 0.0)) throw InvalidParameter("minimize_theta: theta_tol must be positive");
  p.require_verified_range();

  ThetaMinimum out;
  const auto objective = [&](double theta) {
    const MBivariate q(p.m(), nu1, xi1, nu2, xi2, theta);
    const QuadratureResult r = m_rel_entropy_quad(q, p, cfg.quadrature, cfg.convention);
    ++out.evaluations;
    out.tolerance_met = out.tolerance_met && r.tolerance_met;
    return r.value;
  };

  const int n = cfg.grid_points;
  const auto node = [&](int i) { return -1.0 + 2.0 * (i + 1) / (n + 1); };
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = objective(node(i));
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  if (!(*hi_it - *lo_it > 1e-14 * std::max(1.0, std::abs(*lo_it)))) {
    throw NumericalError("minimize_theta: objective is flat in theta");
  }
  const int best = static_cast<int>(lo_it - values.begin());
  double a = best == 0 ? -1.0 + 1e-12 : node(best - 1);
  double b = best == n - 1 ? 1.0 - 1e-12 : node(best + 1);

  // golden-section search on [a, b]
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > cfg.theta_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  if (f1 <= f2) {
    out.theta = x1;
    out.value = f1;
  } else {
    out.theta = x2;
    out.value = f2;
  }

  // Value comparisons stall near sqrt(quadrature eps) in theta. Finish with
  // Newton steps on a five-point derivative, whose error is O(delta^4).
  const double lo = best == 0 ? -1.0 + 1e-12 : node(best - 1);
  const double hi = best == n - 1 ? 1.0 - 1e-12 : node(best + 1);
  for (int it = 0; it < 4; ++it) {
    const double t = out.theta;
    const double delta = std::min(1e-3, (1.0 - std::abs(t)) / 4.0);
    const double fm2 = objective(t - 2.0 * delta);
    const double fm = objective(t - delta);
    const double f0 = objective(t);
    const double fp = objective(t + delta);
    const double fp2 = objective(t + 2.0 * delta);
    const double slope = (fm2 - 8.0 * fm + 8.0 * fp - fp2) / (12.0 * delta);
    const double curvature = (-fm2 + 16.0 * fm - 30.0 * f0 + 16.0 * fp - fp2) / (12.0 * delta * delta);
    if (!(curvature > 0.0)) break;
    const double next = t - slope / curvature;
    if (!(next > lo && next < hi)) break;
    out.theta = next;
    out.value = objective(next);
    if (std::abs(next - t) < cfg.theta_tol) break;
  }
  return out;
}

QuadratureResult pythagorean_defect(const MBivariate& p, const MBivariate& qstar,
                                    const MBivariate& q, const QuadratureConfig& cfg,
                                    LogConvention convention) {
  const QuadratureResult h_qp = m_rel_entropy_quad(q, p, cfg, convention);
  const QuadratureResult h_sp = m_rel_entropy_quad(qstar, p, cfg, convention);
  const QuadratureResult h_qs = m_rel_entropy_quad(q, qstar, cfg, convention);
  QuadratureResult out;
  out.value = h_qp.value - h_sp.value - h_qs.value;
  out.error_estimate = h_qp.error_estimate + h_sp.error_estimate + h_qs.error_estimate;
  out.tolerance_met = h_qp.tolerance_met && h_sp.tolerance_met && h_qs.tolerance_met;
  out.truncation = h_qp.truncation;
  return out;
}

GridMinimum minimize_kh_grid(const QGaussian1D& g0, double h, const GridSearchConfig& cfg) {
  if (!(h > 0.0)) throw InvalidParameter("minimize_kh_grid: h must be positive");
  if (cfg.rounds < 1 || cfg.points < 3) throw InvalidParameter("minimize_kh_grid: degenerate grid");

  const double window = 2.0 * h * std::pow(g0.sigma(), g0.q() - 2.0);
  double mu_c = g0.mu();
  double sigma_c = g0.sigma();
  double mu_half = window;
  double sigma_half = window;
  GridMinimum out{mu_c, sigma_c, 0.0, 0.0, 0.0};
  const double sigma_floor = 0.5 * g0.sigma();
  for (int round = 0; round < cfg.rounds; ++round) {
    const double mu_step = 2.0 * mu_half / (cfg.points - 1);
    const double sigma_step = 2.0 * sigma_half / (cfg.points - 1);
    double best = kInf;
    double best_mu = mu_c;
    double best_sigma = sigma_c;
    for (int i = 0; i < cfg.points; ++i) {
      const double mu = mu_c - mu_half + i * mu_step;
      for (int j = 0; j < cfg.points; ++j) {
        const double sigma = sigma_c - sigma_half + j * sigma_step;
        if (sigma < sigma_floor) continue;
        const double v = kh(QGaussian1D(mu, sigma, g0.params()), g0, h);
        if (v < best) {
          best = v;
          best_mu = mu;
          best_sigma = sigma;
        }
      }
    }
    mu_c = best_mu;
    sigma_c = best_sigma;
    out = {best_mu, best_sigma, best, mu_step, sigma_step};
    mu_half = mu_step;
    sigma_half = sigma_step;
  }
  return out;
}

}  // namespace qflow::oracle
