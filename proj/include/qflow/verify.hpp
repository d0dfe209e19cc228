#pragma once

// The `qflow verify` suite: closed forms checked against the oracle.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qflow/oracle.hpp"

namespace qflow {

enum class VerifyScope { kAll, kQmath, kQgaussian, kFunctionals };

/// "all", "qmath", "qgaussian" or "functionals".
std::optional<VerifyScope> parse_scope(std::string_view name);
std::string_view scope_name(VerifyScope s);

struct VerifyOptions {
  VerifyScope scope = VerifyScope::kAll;
  oracle::QuadratureConfig quadrature{1e-12, 1e-15, 15, 1e-12};
  /// Fault injection: every QParams used by the checks has C0 scaled by (1 + this).
  double c0_perturbation = 0.0;
};

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  /// Worst deviation observed and the tolerance it was held to.
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  VerifyScope scope = VerifyScope::kAll;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Runs every check in scope. Checks that throw are recorded as failures.
VerifyReport cmd_verify(const VerifyOptions& opts);

inline constexpr std::string_view kVerifyJsonSchema = "qflow.verify/1";

std::string to_json(const VerifyReport& r);

}  // namespace qflow
