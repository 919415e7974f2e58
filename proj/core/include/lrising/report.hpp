#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lrising {

/// Serializes with sorted object keys, no whitespace, and every floating
/// point number printed as %.12e. Non-finite numbers become null.
std::string canonical_json(const nlohmann::json& value);

/// Formats one number the way canonical_json does.
std::string format_real(double value);

enum class Method { Exact, Mcmc };
const char* method_name(Method m);

struct Measurement {
  double value = 0.0;
  Method method = Method::Exact;
  /// Zero for exact values.
  double std_error = 0.0;
};

struct ProbeReport {
  std::string probe;
  std::map<std::string, double> parameters;
  std::map<std::string, Measurement> scalars;
  std::map<std::string, std::vector<Measurement>> profiles;
  std::map<std::string, bool> verdicts;
  std::vector<std::string> warnings;

  void set(const std::string& name, double value, Method method = Method::Exact, double std_error = 0.0) {
    scalars[name] = Measurement{value, method, std_error};
  }
  void set(const std::string& name, const Measurement& m) { scalars[name] = m; }
  /// Throws ContractError for unknown names.
  double value(const std::string& name) const;
  bool verdict(const std::string& name) const;

  nlohmann::json to_json() const;
  std::string canonical() const { return canonical_json(to_json()); }
};

}  // namespace lrising
