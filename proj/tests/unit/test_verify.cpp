#include <set>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qflow/verify.hpp"

using namespace qflow;

TEST_CASE("scope names") {
  for (const char* s : {"all", "qmath", "qgaussian", "functionals"}) {
    REQUIRE(parse_scope(s).has_value());
    CHECK(scope_name(*parse_scope(s)) == s);
  }
  CHECK_FALSE(parse_scope("oracle").has_value());
  CHECK_FALSE(parse_scope("").has_value());
}

TEST_CASE("the default suite passes") {
  const VerifyReport r = cmd_verify({});
  CHECK(r.checks.size() >= 12);
  for (const CheckResult& c : r.checks) {
    INFO(c.module << "/" << c.name << " measured " << c.measured << " tol " << c.tolerance << " "
                  << c.detail);
    CHECK(c.passed);
  }
  CHECK(r.all_passed());

  const auto doc = nlohmann::json::parse(to_json(r));
  CHECK(doc["schema"] == "qflow.verify/1");
  CHECK(doc["passed"] == true);
  CHECK(doc["checks"].size() == r.checks.size());
}

TEST_CASE("scope filtering runs only the named module") {
  for (const auto scope : {VerifyScope::kQmath, VerifyScope::kQgaussian, VerifyScope::kFunctionals}) {
    VerifyOptions opts;
    opts.scope = scope;
    const VerifyReport r = cmd_verify(opts);
    CHECK_FALSE(r.checks.empty());
    for (const CheckResult& c : r.checks) CHECK(c.module == scope_name(scope));
  }
}

TEST_CASE("perturbing C0 by 1e-3 fails the constant identity") {
  VerifyOptions opts;
  opts.scope = VerifyScope::kQmath;
  opts.c0_perturbation = 1e-3;
  const VerifyReport r = cmd_verify(opts);
  CHECK_FALSE(r.all_passed());
  std::set<std::string> failed;
  for (const CheckResult& c : r.checks) {
    if (!c.passed) failed.insert(c.name);
  }
  CHECK(failed.count("constant_identity") == 1);

  opts.scope = VerifyScope::kQgaussian;
  std::set<std::string> failed_measure;
  for (const CheckResult& c : cmd_verify(opts).checks) {
    if (!c.passed) failed_measure.insert(c.name);
  }
  CHECK(failed_measure.count("unit_mass") == 1);
}
