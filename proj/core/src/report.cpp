#include "lrising/report.hpp"

#include <cmath>
#include <cstdio>

#include "lrising/errors.hpp"

namespace lrising {
namespace {

void quote(std::string& out, const std::string& s) {
  out += nlohmann::json(s).dump();
}

void write(std::string& out, const nlohmann::json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ',';
        first = false;
        quote(out, it.key());
        out += ':';
        write(out, it.value());
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        write(out, v[i]);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::number_float:
      out += format_real(v.get<double>());
      break;
    default:
      out += v.dump();
  }
}

}  // namespace

std::string format_real(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", value);
  return buf;
}

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  write(out, value);
  return out;
}

const char* method_name(Method m) { return m == Method::Exact ? "exact" : "mcmc"; }

double ProbeReport::value(const std::string& name) const {
  auto it = scalars.find(name);
  require(it != scalars.end(), "report has no scalar named " + name);
  return it->second.value;
}

bool ProbeReport::verdict(const std::string& name) const {
  auto it = verdicts.find(name);
  require(it != verdicts.end(), "report has no verdict named " + name);
  return it->second;
}

namespace {

nlohmann::json measurement_json(const Measurement& m) {
  nlohmann::json j{{"value", m.value}, {"method", method_name(m.method)}};
  if (m.method == Method::Mcmc) j["std_error"] = m.std_error;
  return j;
}

}  // namespace

nlohmann::json ProbeReport::to_json() const {
  nlohmann::json j;
  j["probe"] = probe;
  j["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : parameters) j["parameters"][k] = v;
  j["scalars"] = nlohmann::json::object();
  for (const auto& [k, m] : scalars) j["scalars"][k] = measurement_json(m);
  j["profiles"] = nlohmann::json::object();
  for (const auto& [k, list] : profiles) {
    auto arr = nlohmann::json::array();
    for (const auto& m : list) arr.push_back(measurement_json(m));
    j["profiles"][k] = arr;
  }
  j["verdicts"] = nlohmann::json::object();
  for (const auto& [k, v] : verdicts) j["verdicts"][k] = v;
  j["warnings"] = warnings;
  return j;
}

}  // namespace lrising
