#include "qflow/experiments.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "json.hpp"

#include "qflow/errors.hpp"
#include "qflow/functionals.hpp"
#include "qflow/number_format.hpp"
#include "qflow/pme_flow.hpp"

namespace qflow {

namespace {

using Json = nlohmann::ordered_json;

double parse_number(std::string_view s, const char* what) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InvalidParameter(std::string("h-grid: cannot parse ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::string gamma_canonical(int statement, const RunConfig& c) {
  std::ostringstream os;
  os << kGammaCsvSchema << ";statement=" << statement << ";q=" << format_double(c.q)
     << ";sigma0=" << format_double(c.sigma0) << ";mu0=" << format_double(c.mu0)
     << ";mu=" << format_double(c.mu) << ";sigma=" << format_double(c.sigma)
     << ";h_grid=" << format_double(c.h_grid.start) << ':' << format_double(c.h_grid.stop) << ':'
     << c.h_grid.points;
  return os.str();
}

std::string jko_canonical(const RunConfig& c, int steps, double h) {
  std::ostringstream os;
  os << kJkoCsvSchema << ";q=" << format_double(c.q) << ";sigma0=" << format_double(c.sigma0)
     << ";mu0=" << format_double(c.mu0) << ";h=" << format_double(h) << ";steps=" << steps;
  return os.str();
}

Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

void HGrid::validate() const {
  if (!(stop > 0.0) || !std::isfinite(start)) {
    throw InvalidParameter("h-grid: values must be positive and finite");
  }
  if (!(start > stop)) throw InvalidParameter("h-grid: START must exceed STOP (decreasing grid)");
  if (points < 2) throw InvalidParameter("h-grid: need at least 2 points");
}

std::vector<double> HGrid::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  // base 10 so that decade grids land exactly on 1e-k
  const double log_start = std::log10(start);
  const double span = std::log10(stop) - log_start;
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, log_start + span * i / (points - 1));
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

HGrid parse_h_grid(std::string_view spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos || spec.find(':', c2 + 1) != std::string_view::npos) {
    throw InvalidParameter("h-grid: expected START:STOP:N, got '" + std::string(spec) + "'");
  }
  HGrid g;
  g.start = parse_number(spec.substr(0, c1), "START");
  g.stop = parse_number(spec.substr(c1 + 1, c2 - c1 - 1), "STOP");
  const std::string_view n = spec.substr(c2 + 1);
  const auto r = std::from_chars(n.data(), n.data() + n.size(), g.points);
  if (r.ec != std::errc() || r.ptr != n.data() + n.size()) {
    throw InvalidParameter("h-grid: cannot parse N '" + std::string(n) + "'");
  }
  g.validate();
  return g;
}

ConvergenceTable cmd_gamma(int statement, const RunConfig& cfg) {
  if (statement < 1 || statement > 3) throw InvalidParameter("statement must be 1, 2 or 3");
  if (statement == 3 && !(cfg.q < 1.0)) {
    throw InvalidParameter("statement 3 holds only for 0 < q < 1");
  }
  const QParams p = make_params(cfg.q, 1);
  const QGaussian1D g0(cfg.mu0, cfg.sigma0, p);
  const QGaussian1D g(cfg.mu, cfg.sigma, p);
  if (!coefficients(cfg.q, cfg.sigma0).a) {
    throw InvalidParameter("coefficient a needs q < 4/3");
  }
  const std::vector<double> hs = cfg.h_grid.values();

  ConvergenceTable t;
  t.statement = statement;
  t.config = cfg;
  t.input_hash = fnv1a64(gamma_canonical(statement, cfg));
  const MBivariate coupling = q0h(g0, hs.front());
  if (!coupling.verified_range()) {
    t.warnings.push_back("m = " + format_double(coupling.m()) +
                         " is outside the normalizable range (0,1) U (1,3/2); values are the "
                         "closed-form continuation of J_h");
  }
  const double limit = statement == 1 ? wasserstein2_sq(g, g0) : entropy_diff(g, g0);
  for (const double h : hs) {
    ConvergenceRow row;
    row.h = h;
    row.limit = limit;
    if (statement == 1) {
      row.value = rescaled_first(g, g0, h);
    } else if (statement == 2) {
      row.value = rescaled_second(g, g0, h);
    } else {
      row.value = rescaled_third(g, g0, h);
      row.one_sided_gap = rescaled_third_excess(g, g0, h);
    }
    row.abs_error = std::abs(row.value - row.limit);
    t.rows.push_back(row);
  }
  return t;
}

JkoTable cmd_jko(const RunConfig& cfg, int steps, double h) {
  if (steps < 1) throw InvalidParameter("steps must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParameter("h must be positive");
  const QGaussian1D g0(cfg.mu0, cfg.sigma0, make_params(cfg.q, 1));
  JkoTable t;
  t.config = cfg;
  t.h = h;
  t.steps = steps;
  t.input_hash = fnv1a64(jko_canonical(cfg, steps, h));
  const std::vector<QGaussian1D> path = jko_trajectory(g0, h, steps);
  for (int n = 0; n <= steps; ++n) {
    const QGaussian1D& g = path[static_cast<std::size_t>(n)];
    JkoRow row;
    row.n = n;
    row.mu = g.mu();
    row.sigma = g.sigma();
    row.sigma_exact = evolve_sigma(cfg.sigma0, n * h, cfg.q);
    row.abs_error = std::abs(row.sigma - row.sigma_exact);
    t.rows.push_back(row);
  }
  return t;
}

std::string to_csv(const ConvergenceTable& t) {
  const RunConfig& c = t.config;
  std::ostringstream os;
  os << "# schema: " << kGammaCsvSchema << '\n';
  os << "# statement=" << t.statement << " q=" << format_double(c.q)
     << " sigma0=" << format_double(c.sigma0) << " mu0=" << format_double(c.mu0)
     << " mu=" << format_double(c.mu) << " sigma=" << format_double(c.sigma)
     << " input_hash=" << hex64(t.input_hash) << '\n';
  for (const std::string& w : t.warnings) os << "# warning: " << w << '\n';
  os << "h,value,limit,abs_error";
  if (t.statement == 3) os << ",one_sided_gap";
  os << '\n';
  for (const ConvergenceRow& r : t.rows) {
    os << format_double(r.h) << ',' << format_double(r.value) << ',' << format_double(r.limit)
       << ',' << format_double(r.abs_error);
    if (r.one_sided_gap) os << ',' << format_double(*r.one_sided_gap);
    os << '\n';
  }
  return os.str();
}

std::string to_json(const ConvergenceTable& t) {
  const RunConfig& c = t.config;
  Json doc;
  doc["schema"] = kGammaJsonSchema;
  doc["metadata"] = {
      {"statement", t.statement},
      {"q", c.q},
      {"sigma0", c.sigma0},
      {"mu0", c.mu0},
      {"mu", c.mu},
      {"sigma", c.sigma},
      {"h_grid", {{"start", c.h_grid.start}, {"stop", c.h_grid.stop}, {"points", c.h_grid.points}}},
      {"input_hash", hex64(t.input_hash)},
      {"warnings", t.warnings},
  };
  Json columns = Json::array({"h", "value", "limit", "abs_error"});
  if (t.statement == 3) columns.push_back("one_sided_gap");
  doc["columns"] = columns;
  Json rows = Json::array();
  for (const ConvergenceRow& r : t.rows) {
    Json row = {{"h", json_number(r.h)},
                {"value", json_number(r.value)},
                {"limit", json_number(r.limit)},
                {"abs_error", json_number(r.abs_error)}};
    if (r.one_sided_gap) row["one_sided_gap"] = json_number(*r.one_sided_gap);
    rows.push_back(row);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string to_csv(const JkoTable& t) {
  const RunConfig& c = t.config;
  std::ostringstream os;
  os << "# schema: " << kJkoCsvSchema << '\n';
  os << "# q=" << format_double(c.q) << " sigma0=" << format_double(c.sigma0)
     << " mu0=" << format_double(c.mu0) << " h=" << format_double(t.h) << " steps=" << t.steps
     << " input_hash=" << hex64(t.input_hash) << '\n';
  os << "n,mu,sigma,sigma_exact,abs_error\n";
  for (const JkoRow& r : t.rows) {
    os << r.n << ',' << format_double(r.mu) << ',' << format_double(r.sigma) << ','
       << format_double(r.sigma_exact) << ',' << format_double(r.abs_error) << '\n';
  }
  return os.str();
}

std::string to_json(const JkoTable& t) {
  const RunConfig& c = t.config;
  Json doc;
  doc["schema"] = kJkoJsonSchema;
  doc["metadata"] = {{"q", c.q},         {"sigma0", c.sigma0}, {"mu0", c.mu0},
                     {"h", t.h},         {"steps", t.steps},   {"input_hash", hex64(t.input_hash)}};
  doc["columns"] = Json::array({"n", "mu", "sigma", "sigma_exact", "abs_error"});
  Json rows = Json::array();
  for (const JkoRow& r : t.rows) {
    rows.push_back({{"n", r.n},
                    {"mu", json_number(r.mu)},
                    {"sigma", json_number(r.sigma)},
                    {"sigma_exact", json_number(r.sigma_exact)},
                    {"abs_error", json_number(r.abs_error)}});
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string params_json(const QParams& p) {
  Json doc = {{"q", p.q},
              {"d", p.d},
              {"m", p.m},
              {"alpha", p.alpha},
              {"c1", p.c1},
              {"c0", p.c0},
              {"barenblatt_a", p.barenblatt_a},
              {"barenblatt_b", p.barenblatt_b},
              {"variance_scale", p.variance_scale},
              {"admissible", p.admissible}};
  return doc.dump(2) + "\n";
}

}  // namespace qflow
