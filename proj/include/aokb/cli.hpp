#pragma once

// Batch driver behind the aokb command line tool.

#include "aokb/okounkov.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace aokb {

/// Relative tolerances the reports are judged against.
struct Tolerances {
  double identity_count = 0.10;   // hull term vs count term
  double identity_volume = 0.25;  // hull term vs h0 / k^2
  double counting_ratio = 0.50;   // last gap / gap at k = 2
  double bc_finite = 0.10;        // finite body vs hull of Lambda
  double bc_archimedean = 0.25;   // archimedean body vs h0 / k^2

  nlohmann::json to_json() const;
  static Tolerances from_json(const nlohmann::json& j);
};

struct RunConfig {
  std::string command;  // verify-filtration | body | bc-compare
  std::vector<std::string> fields{"Q"};
  std::string bundle = "box:1,1";
  long p = 2;
  std::string point = "0";
  std::string z0 = "0";
  int k_max = 10;
  int k = 8;
  int grid = 32;
  int instances = 200;
  std::uint64_t seed = 42;
  std::string radius_factor = "1";
  std::uint64_t budget = 100'000'000;
  /// Scheduling only; not part of the recorded configuration.
  int workers = 0;
  std::string csv_path;
  std::string json_path;
  std::string svg_path;
  Tolerances tolerances;

  /// Everything except workers and output paths.
  nlohmann::json to_json() const;
  /// Keys as in to_json plus "csv", "json", "svg", "workers"; present keys
  /// replace the current values. Throws ConfigError.
  void apply_json(const nlohmann::json& j);
  /// Throws ConfigError on out-of-range values.
  void validate() const;
  EnumerationOptions enumeration() const { return {budget, workers}; }
};

/// "box:w0,w1,..." or "fs:level:lambda".
SurfaceBundle parse_bundle(const std::string& spec);
/// "0", "5", "inf".
FlagData parse_flag(long p, const std::string& point);
GenericFlag parse_generic(const std::string& z0);

enum ExitCode { kExitOk = 0, kExitViolation = 1, kExitConfig = 2, kExitBudget = 3 };

struct RunOutput {
  int exit_code = kExitOk;
  nlohmann::json json;
  std::string csv;
  std::string svg;
};

RunOutput cmd_verify_filtration(const RunConfig& cfg);
RunOutput cmd_body(const RunConfig& cfg);
RunOutput cmd_bc_compare(const RunConfig& cfg);
/// Dispatches on cfg.command; config errors become exit code 2.
RunOutput run(const RunConfig& cfg);

/// Writes the outputs named in cfg (JSON to stdout when no path is given).
/// Returns false when a file cannot be written.
bool write_outputs(const RunConfig& cfg, const RunOutput& out, std::string& error);

/// CSV column documentation for --help.
extern const char* const kSuiteCsvHelp;

}  // namespace aokb
