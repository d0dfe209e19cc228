#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qflow/errors.hpp"
#include "qflow/experiments.hpp"
#include "qflow/functionals.hpp"
#include "qflow/oracle.hpp"
#include "qflow/pme_flow.hpp"
#include "qflow/verify.hpp"

namespace py = pybind11;
using namespace qflow;

PYBIND11_MODULE(_qflow, m) {
  m.doc() = "q-Gaussian porous medium flow: constants, closed forms and the quadrature oracle";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<OutsideVerifiedRange>(m, "OutsideVerifiedRange", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("q_exp", &q_exp, py::arg("t"), py::arg("q"));
  m.def("q_log", &q_log, py::arg("t"), py::arg("q"));

  py::class_<QParams>(m, "QParams")
      .def_readonly("q", &QParams::q)
      .def_readonly("d", &QParams::d)
      .def_readonly("m", &QParams::m)
      .def_readonly("alpha", &QParams::alpha)
      .def_readonly("c1", &QParams::c1)
      .def_readonly("c0", &QParams::c0)
      .def_readonly("barenblatt_a", &QParams::barenblatt_a)
      .def_readonly("barenblatt_b", &QParams::barenblatt_b)
      .def_readonly("variance_scale", &QParams::variance_scale)
      .def_readonly("admissible", &QParams::admissible);
  m.def("make_params", [](double q, int d) { return make_params(q, d); }, py::arg("q"),
        py::arg("d") = 1);

  py::class_<QGaussian1D>(m, "QGaussian1D")
      .def(py::init([](double mu, double sigma, double q) {
             return QGaussian1D(mu, sigma, make_params(q, 1));
           }),
           py::arg("mu"), py::arg("sigma"), py::arg("q"))
      .def_property_readonly("mu", &QGaussian1D::mu)
      .def_property_readonly("sigma", &QGaussian1D::sigma)
      .def_property_readonly("q", &QGaussian1D::q)
      .def_property_readonly("params", &QGaussian1D::params)
      .def("variance", &QGaussian1D::variance)
      .def("density", [](const QGaussian1D& g, double x) { return density_1d(g, x); })
      .def("__repr__", [](const QGaussian1D& g) {
        return "QGaussian1D(mu=" + std::to_string(g.mu()) + ", sigma=" + std::to_string(g.sigma()) +
               ", q=" + std::to_string(g.q()) + ")";
      });

  m.def("evolve_sigma", &evolve_sigma, py::arg("sigma0"), py::arg("h"), py::arg("q"));
  m.def("wasserstein2_sq", &wasserstein2_sq);
  m.def("entropy_diff", &entropy_diff);
  m.def("kh", &kh);
  m.def("jh", &jh);
  m.def("rescaled_first", &rescaled_first);
  m.def("rescaled_second", &rescaled_second);
  m.def("rescaled_third", &rescaled_third);
  m.def("jko_step", &jko_step);
  m.def(
      "coefficients",
      [](double q, double sigma0) {
        const GammaCoefficients k = coefficients(q, sigma0);
        py::dict d;
        d["a"] = k.a ? py::cast(*k.a) : py::none();
        d["b"] = k.b;
        return d;
      },
      py::arg("q"), py::arg("sigma0"));

  m.def(
      "mass_quad",
      [](const QGaussian1D& g) { return oracle::moment_quad(g, 0, {}).value; },
      "Total mass of g by adaptive quadrature.");

  m.def(
      "gamma_table",
      [](int statement, double q, double sigma0, double mu0, double mu, double sigma,
         const std::string& h_grid, const std::string& format) {
        RunConfig cfg;
        cfg.q = q;
        cfg.sigma0 = sigma0;
        cfg.mu0 = mu0;
        cfg.mu = mu;
        cfg.sigma = sigma;
        cfg.h_grid = parse_h_grid(h_grid);
        const ConvergenceTable t = cmd_gamma(statement, cfg);
        if (format == "csv") return to_csv(t);
        if (format == "json") return to_json(t);
        throw InvalidParameter("format must be csv or json");
      },
      py::arg("statement"), py::arg("q"), py::arg("sigma0") = 1.0, py::arg("mu0") = 0.0,
      py::arg("mu") = 0.3, py::arg("sigma") = 1.4, py::arg("h_grid") = "1e-1:1e-6:11",
      py::arg("format") = "json");

  m.def(
      "verify",
      [](const std::string& scope) {
        const auto s = parse_scope(scope);
        if (!s) throw InvalidParameter("unknown scope '" + scope + "'");
        VerifyOptions opts;
        opts.scope = *s;
        return to_json(cmd_verify(opts));
      },
      py::arg("scope") = "all");
}
