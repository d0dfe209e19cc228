// qflow: Gamma-expansion tables, JKO trajectories, oracle verification.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "qflow/errors.hpp"
#include "qflow/experiments.hpp"
#include "qflow/verify.hpp"

namespace {

constexpr int kUsageError = 2;

int write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "qflow: cannot write " << path << '\n';
    return kUsageError;
  }
  return 0;
}

const std::map<std::string, qflow::OutputFormat> kFormats = {{"csv", qflow::OutputFormat::kCsv},
                                                             {"json", qflow::OutputFormat::kJson}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Gaussian porous medium flow: Gamma expansion and JKO experiments"};
  // "--h" is the JKO step size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "qflow 0.1.0");

  qflow::RunConfig cfg;
  std::string h_grid_spec = "1e-1:1e-6:11";
  std::string out_path;
  int statement = 1;

  auto* gamma = app.add_subcommand("gamma", "Rescaled J_h against its Gamma-limit on an h-grid");
  gamma->add_option("--statement", statement, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
  gamma->add_option("--q", cfg.q, "q in (0,1) U (1,4/3)")->required();
  gamma->add_option("--sigma0", cfg.sigma0, "initial scale")->default_val(1.0);
  gamma->add_option("--mu0", cfg.mu0, "initial mean")->default_val(0.0);
  gamma->add_option("--mu", cfg.mu, "target mean")->default_val(0.3);
  gamma->add_option("--sigma", cfg.sigma, "target scale")->default_val(1.4);
  gamma->add_option("--h-grid", h_grid_spec, "START:STOP:N, geometric and decreasing")
      ->default_val(h_grid_spec);
  gamma->add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_val("csv");
  gamma->add_option("--out", out_path, "output file (default stdout)");

  double h = 0.1;
  int steps = 5;
  auto* jko = app.add_subcommand("jko", "JKO iterates against the exact flow");
  jko->add_option("--q", cfg.q, "q in (0,1) U (1,5/3)")->required();
  jko->add_option("--sigma0", cfg.sigma0, "initial scale")->default_val(1.0);
  jko->add_option("--mu0", cfg.mu0, "initial mean")->default_val(0.0);
  jko->add_option("--h", h, "step size")->required();
  jko->add_option("--steps", steps, "number of steps")->required();
  jko->add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_val("csv");
  jko->add_option("--out", out_path, "output file (default stdout)");

  std::string scope = "all";
  qflow::VerifyOptions vopts;
  auto* verify = app.add_subcommand("verify", "Closed forms against the quadrature oracle");
  verify->add_option("--scope", scope, "all, qmath, qgaussian or functionals")
      ->check(CLI::IsMember({"all", "qmath", "qgaussian", "functionals"}))
      ->default_val("all");
  verify->add_option("--rel-tol", vopts.quadrature.rel_tol, "quadrature relative tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--inject-c0-perturbation", vopts.c0_perturbation,
                     "scale C0 by (1 + EPS) in every check (fault injection)");
  verify->add_option("--out", out_path, "output file (default stdout)");

  int dim = 1;
  auto* constants = app.add_subcommand("const", "Dump the constants of the q-Gaussian family");
  constants->add_option("--q", cfg.q, "q")->required();
  constants->add_option("--d", dim, "dimension")->default_val(1)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gamma) {
      cfg.h_grid = qflow::parse_h_grid(h_grid_spec);
      const qflow::ConvergenceTable t = qflow::cmd_gamma(statement, cfg);
      return write_output(
          cfg.format == qflow::OutputFormat::kCsv ? qflow::to_csv(t) : qflow::to_json(t), out_path);
    }
    if (*jko) {
      const qflow::JkoTable t = qflow::cmd_jko(cfg, steps, h);
      return write_output(
          cfg.format == qflow::OutputFormat::kCsv ? qflow::to_csv(t) : qflow::to_json(t), out_path);
    }
    if (*verify) {
      vopts.scope = *qflow::parse_scope(scope);
      const qflow::VerifyReport r = qflow::cmd_verify(vopts);
      const int io = write_output(qflow::to_json(r), out_path);
      if (io != 0) return io;
      return r.all_passed() ? 0 : 1;
    }
    if (*constants) {
      return write_output(qflow::params_json(qflow::make_params(cfg.q, dim)), "");
    }
  } catch (const qflow::InvalidParameter& e) {
    std::cerr << "qflow: " << e.what() << '\n';
    return kUsageError;
  } catch (const qflow::DomainError& e) {
    std::cerr << "qflow: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "qflow: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}
