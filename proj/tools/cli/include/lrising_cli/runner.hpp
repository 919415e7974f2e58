#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrising/report.hpp"
#include "lrising_cli/config.hpp"

namespace lrising::cli {

/// One ladder point: its inputs, its scalars and anything table-shaped.
struct Point {
  std::optional<double> beta;
  std::optional<long> L;
  std::map<std::string, Measurement> scalars;
  nlohmann::json detail = nlohmann::json::object();
};

struct RunResult {
  ExperimentConfig config;
  std::vector<Point> points;
  /// False when a run-level check failed (contours round trip, probe verdicts are not counted).
  bool ok = true;
  std::vector<std::string> messages;
  double wall_clock_seconds = 0.0;

  /// The persisted record. `with_clock = false` drops the only
  /// non-deterministic field.
  nlohmann::json record(bool with_clock = true) const;
  std::string record_line(bool with_clock = true) const;
  /// Header "beta,L,quantity,value,std_error,method"; reals as %.12e.
  std::string csv() const;
};

std::string tool_version();

/// Executes the configured subcommand. Throws ConfigError for settings the
/// command cannot use, CapacityError for oversize exact requests.
RunResult run(const ExperimentConfig& config);

/// `contours --decompose`: decomposes the configuration in `text` and
/// round-trips it through the family text format.
RunResult decompose(const ExperimentConfig& config, const std::string& text);

}  // namespace lrising::cli
