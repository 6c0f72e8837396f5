#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lehmerlab/modcore.hpp"

namespace lehmerlab {

enum class ExperimentKind { CountScaling, CharsumMoments, DiscrepancyScan, HullScan, HScan };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

struct ModulusRange {
  u64 min = 5;
  u64 max = 100;
  bool primes_only = true;

  /// Ascending list of moduli; throws ConfigError when empty.
  std::vector<u64> moduli() const;
};

/// The congruence system swept over the modulus range. A box or region, when
/// present, restricts the count; otherwise the full torus is used.
struct InstanceTemplate {
  unsigned k = 2;
  std::vector<u64> a{2, 3, 5};
  std::vector<i64> b{1, 1, 1};
  std::optional<std::string> box;
  std::optional<std::string> region;
  bool joint = false;
};

/// The progression {K+1 <= n <= K+L, n = b (mod a)} with L = floor(length_fraction * q).
struct ProgressionTemplate {
  i64 start = 0;
  std::string length_fraction = "1/2";
  i64 step = 1;
  i64 offset = 0;
};

struct BudgetLimits {
  double enumeration = 4e9;
  double discrepancy_exact = 8.3e10;
  std::uint64_t discrepancy_samples = 100'000;
  std::uint64_t monte_carlo_samples = 1'000'000;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::CountScaling;
  ModulusRange range;
  InstanceTemplate instance;
  ProgressionTemplate progression;
  std::vector<int> r_values{1, 2, 3};
  std::string output = "experiment.csv";
  std::uint64_t seed = 20080101;
  BudgetLimits budget;
  /// Worker threads for rows; 0 selects the hardware concurrency.
  unsigned threads = 0;
  /// Multiplier in the transfer-bound check of discrepancy-scan.
  double transfer_constant = 10.0;
};

/// Reads a config; every missing key takes the default above. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
/// Every field, defaults included.
nlohmann::json config_to_json(const ExperimentConfig& config);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the residuals in log space.
  double residual = 0.0;
  std::size_t rows = 0;
};

/// Least squares of log y against log x over rows with y > 0. Needs at least 5 such rows.
ExponentFit fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr int kCsvSchemaVersion = 1;

std::vector<std::string> csv_columns(ExperimentKind kind);

struct ExperimentRow {
  u64 q = 0;
  bool skipped = false;
  std::string skip_reason;
  /// Values for the columns after schema_version, experiment, q.
  std::vector<std::string> fields;
  /// The library call (and equivalent command line) that reproduces the row.
  std::string call;
  std::string command;
  /// Values used by the fit: x and y (the latter is |error| or q - H(q)).
  double fit_x = 0.0;
  double fit_y = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  std::optional<ExponentFit> fit;
  nlohmann::json summary;

  std::string csv() const;
  nlohmann::json sidecar() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes the CSV to config.output and the sidecar next to it (extension .json).
/// Throws std::runtime_error on I/O failure.
void write_report(const ExperimentReport& report);

std::string sidecar_path(const std::string& csv_path);

/// Shortest round-trip decimal form, independent of locale.
std::string format_double(double x);

}  // namespace lehmerlab
