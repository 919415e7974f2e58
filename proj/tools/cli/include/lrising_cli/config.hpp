#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrising/coupling.hpp"
#include "lrising/mcmc.hpp"
#include "lrising/report.hpp"

namespace lrising::cli {

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration. `field` is the dotted path of the offending key
/// (empty for document-level problems such as a JSON syntax error).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Command { Enumerate, Sample, Contours, Landau, Interface, Probe };
enum class ProbeKind { Decimation, G, Wetting, Shift, GsStep, Percus, Rigidity };
enum class OutputFormat { Json, Csv, Both };

const char* command_name(Command c);
const char* probe_name(ProbeKind p);
Command parse_command(const std::string& name);
ProbeKind parse_probe(const std::string& name);

struct BoundaryBlock {
  /// plus, minus, free, alternating or dobrushin.
  std::string type = "plus";
  /// 1d Dobrushin: - left of `split`, + from `split` on.
  long split = 0;
  /// 2d Dobrushin: + on rows >= height.
  long height = 0;
};

struct SamplerBlock {
  std::size_t replicas = 8;
  std::size_t sweeps = 20000;
  std::size_t burn_in = 2000;
  mcmc::Rule rule = mcmc::Rule::HeatBath;
};

/// Probe geometry beyond L. Zero means "probe default".
struct GeometryBlock {
  long N = 0;
  long n = 0;
  long window = 0;
  int alternating_sign = 1;
};

struct ExperimentConfig {
  Command command = Command::Enumerate;
  std::optional<ProbeKind> probe;

  int dimension = 1;
  CouplingSpec coupling = PowerLaw{1.0, 1.5, {}};
  std::vector<double> betas{1.0};
  /// Half-widths, or the ladder for fits (landau, shift, gs-step).
  std::vector<long> lengths{3};
  /// Explicit 1d interval overriding the half-width.
  std::optional<std::pair<long, long>> interval;
  double field = 0.0;
  BoundaryBlock boundary;

  Method method = Method::Exact;
  SamplerBlock sampler;
  GeometryBlock geometry;

  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::string output;
  OutputFormat format = OutputFormat::Json;

  /// "enumerate", "probe decimation", ...
  std::string name() const;
};

/// Defaults for a subcommand as a complete schema-v1 document.
nlohmann::json default_document(Command command, std::optional<ProbeKind> probe = std::nullopt);

/// Reads a JSON file; syntax errors carry line and column.
nlohmann::json read_document(const std::string& path);

/// Overlays `user` on `base`. Top-level blocks merge key by key, except
/// model.coupling and boundary, which replace the default wholesale.
nlohmann::json overlay(nlohmann::json base, const nlohmann::json& user);

/// Validates every key (unknown keys are errors) and builds the config.
ExperimentConfig parse_config(const nlohmann::json& document);

/// Fully resolved document; parse_config(to_document(c)) reproduces c.
nlohmann::json to_document(const ExperimentConfig& config);

/// Annotated template printed by --explain.
std::string explain_text();

}  // namespace lrising::cli
