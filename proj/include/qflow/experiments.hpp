#pragma once

// Experiment tables behind the `qflow gamma` and `qflow jko` commands.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qflow/qmath.hpp"

namespace qflow {

/// Geometric grid of step sizes from `start` down to `stop`.
struct HGrid {
  double start = 1e-1;
  double stop = 1e-6;
  int points = 11;

  /// Throws InvalidParameter unless start > stop > 0 and points >= 2.
  void validate() const;
  /// Strictly decreasing values; the endpoints are exactly start and stop.
  std::vector<double> values() const;
};

/// Parses "START:STOP:N". Throws InvalidParameter on malformed input.
HGrid parse_h_grid(std::string_view spec);

enum class OutputFormat { kCsv, kJson };

struct RunConfig {
  double q = 0.8;
  double sigma0 = 1.0;
  double mu0 = 0.0;
  double mu = 0.3;
  double sigma = 1.4;
  HGrid h_grid;
  OutputFormat format = OutputFormat::kCsv;
};

struct ConvergenceRow {
  double h = 0.0;
  double value = 0.0;
  double limit = 0.0;
  double abs_error = 0.0;
  /// Statement 3 only: rescaled_third - rescaled_second.
  std::optional<double> one_sided_gap;
};

struct ConvergenceTable {
  int statement = 1;
  RunConfig config;
  /// Descending h.
  std::vector<ConvergenceRow> rows;
  /// FNV-1a digest of the canonical input description.
  std::uint64_t input_hash = 0;
  /// Set when the bivariate couplings (m = 3 - 2/q) are not normalizable, i.e.
  /// q <= 2/3. The values are then the closed-form continuation of J_h.
  std::vector<std::string> warnings;
};

/// Evaluates the rescaled functional of `statement` (1, 2 or 3) on the h-grid.
/// Throws InvalidParameter for an unknown statement, statement 3 with q >= 1,
/// statements needing the coefficient a when q >= 4/3, or an invalid config.
ConvergenceTable cmd_gamma(int statement, const RunConfig& cfg);

struct JkoRow {
  int n = 0;
  double mu = 0.0;
  double sigma = 0.0;
  double sigma_exact = 0.0;
  double abs_error = 0.0;
};

struct JkoTable {
  RunConfig config;
  double h = 0.0;
  int steps = 0;
  std::vector<JkoRow> rows;
  std::uint64_t input_hash = 0;
};

/// JKO iterates from N_q(mu0, C sigma0^2) next to the exact flow at t = n h.
JkoTable cmd_jko(const RunConfig& cfg, int steps, double h);

inline constexpr std::string_view kGammaCsvSchema = "qflow.gamma.csv/1";
inline constexpr std::string_view kGammaJsonSchema = "qflow.gamma/1";
inline constexpr std::string_view kJkoCsvSchema = "qflow.jko.csv/1";
inline constexpr std::string_view kJkoJsonSchema = "qflow.jko/1";

std::string to_csv(const ConvergenceTable& t);
std::string to_json(const ConvergenceTable& t);
std::string to_csv(const JkoTable& t);
std::string to_json(const JkoTable& t);

/// All fields of QParams as a JSON object.
std::string params_json(const QParams& p);

}  // namespace qflow
