#include "lrising_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "lrising/errors.hpp"

namespace lrising::cli {
namespace {

using nlohmann::json;

const std::vector<std::pair<Command, const char*>> kCommands = {
    {Command::Enumerate, "enumerate"}, {Command::Sample, "sample"},       {Command::Contours, "contours"},
    {Command::Landau, "landau"},       {Command::Interface, "interface"}, {Command::Probe, "probe"}};

const std::vector<std::pair<ProbeKind, const char*>> kProbes = {
    {ProbeKind::Decimation, "decimation"}, {ProbeKind::G, "g"},
    {ProbeKind::Wetting, "wetting"},       {ProbeKind::Shift, "shift"},
    {ProbeKind::GsStep, "gs-step"},        {ProbeKind::Percus, "percus"},
    {ProbeKind::Rigidity, "rigidity"}};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Typed access to one JSON object. Every key read is remembered so that
// finish() can reject the rest.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(join(path_, key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long integer(const std::string& key) { return as_integer(raw(key), join(path_, key)); }
  long integer(const std::string& key, long fallback) { return has(key) ? integer(key) : fallback; }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

  Block child(const std::string& key) { return Block(raw(key), join(path_, key)); }

  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
  }

  static long as_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == static_cast<double>(static_cast<long>(d))) return static_cast<long>(d);
    }
    throw ConfigError(where, "expected an integer");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::size_t count_field(Block& b, const std::string& key, std::size_t fallback, std::size_t minimum) {
  const long v = b.integer(key, static_cast<long>(fallback));
  if (v < static_cast<long>(minimum))
    throw ConfigError(b.path(key), "must be at least " + std::to_string(minimum));
  return static_cast<std::size_t>(v);
}

template <class T, class Parse>
std::vector<T> scalar_or_list(const json& v, const std::string& where, Parse parse) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(where, "ladder must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse(v[i], where + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(parse(v, where));
  }
  return out;
}

double parse_beta(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  const double b = v.get<double>();
  if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError(where, "inverse temperature must be finite and >= 0");
  return b;
}

long parse_length(const json& v, const std::string& where) {
  const long L = Block::as_integer(v, where);
  if (L < 1) throw ConfigError(where, "must be a positive integer");
  return L;
}

double positive(Block& b, const std::string& key, double fallback) {
  const double v = b.number(key, fallback);
  if (!(v >= 0.0)) throw ConfigError(b.path(key), "coupling strengths must be >= 0");
  return v;
}

CouplingSpec parse_coupling(Block b) {
  const std::string type = b.text("type");
  CouplingSpec spec = NearestNeighbor{};
  if (type == "nearest_neighbor") {
    spec = NearestNeighbor{positive(b, "J", 1.0)};
  } else if (type == "power_law") {
    PowerLaw p;
    p.J = positive(b, "J", 1.0);
    p.alpha = b.number("alpha");
    if (b.has("j1")) p.j1 = positive(b, "j1", 1.0);
    spec = p;
  } else if (type == "isotropic_mixed") {
    spec = IsotropicMixed{positive(b, "J_nn", 1.0), b.number("alpha")};
  } else if (type == "anisotropic") {
    AnisotropicAxes a;
    a.J_h = positive(b, "J_h", 1.0);
    a.alpha_h = b.number("alpha_h");
    if (b.has("vertical")) {
      Block v = b.child("vertical");
      const std::string vt = v.text("type");
      if (vt == "nearest_neighbor")
        a.vertical = VerticalNearestNeighbor{positive(v, "J", 1.0)};
      else if (vt == "power_law")
        a.vertical = VerticalPowerLaw{positive(v, "J", 1.0), v.number("alpha")};
      else
        throw ConfigError(v.path("type"), "expected nearest_neighbor or power_law, got '" + vt + "'");
      v.finish();
    }
    spec = a;
  } else {
    throw ConfigError(b.path("type"),
                      "expected nearest_neighbor, power_law, isotropic_mixed or anisotropic, got '" + type + "'");
  }
  b.finish();
  return spec;
}

json coupling_document(const CouplingSpec& spec) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NearestNeighbor>) {
          return {{"type", "nearest_neighbor"}, {"J", c.J}};
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          json j{{"type", "power_law"}, {"J", c.J}, {"alpha", c.alpha}};
          if (c.j1) j["j1"] = *c.j1;
          return j;
        } else if constexpr (std::is_same_v<T, IsotropicMixed>) {
          return {{"type", "isotropic_mixed"}, {"J_nn", c.J_nn}, {"alpha", c.alpha}};
        } else {
          json v = std::visit(
              [](const auto& w) -> json {
                using W = std::decay_t<decltype(w)>;
                if constexpr (std::is_same_v<W, VerticalNearestNeighbor>)
                  return {{"type", "nearest_neighbor"}, {"J", w.J}};
                else
                  return {{"type", "power_law"}, {"J", w.J}, {"alpha", w.alpha}};
              },
              c.vertical);
          return {{"type", "anisotropic"}, {"J_h", c.J_h}, {"alpha_h", c.alpha_h}, {"vertical", v}};
        }
      },
      spec.variant());
}

}  // namespace

const char* command_name(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

const char* probe_name(ProbeKind p) {
  for (const auto& [k, n] : kProbes)
    if (k == p) return n;
  return "?";
}

Command parse_command(const std::string& name) {
  for (const auto& [k, n] : kCommands)
    if (name == n) return k;
  throw ConfigError("command", "unknown command '" + name + "'");
}

ProbeKind parse_probe(const std::string& name) {
  for (const auto& [k, n] : kProbes)
    if (name == n) return k;
  throw ConfigError("probe", "unknown probe '" + name + "'");
}

std::string ExperimentConfig::name() const {
  std::string s = command_name(command);
  if (probe) s += std::string(" ") + probe_name(*probe);
  return s;
}

json default_document(Command command, std::optional<ProbeKind> probe) {
  json coupling{{"type", "power_law"}, {"J", 1.0}, {"alpha", 1.5}};
  json model{{"dimension", 1}, {"coupling", coupling}, {"beta", 1.0}, {"L", 3}, {"field", 0.0}};
  json boundary{{"type", "plus"}};
  json geometry = json::object();
  std::string method = "exact";

  switch (command) {
    case Command::Enumerate:
      break;
    case Command::Sample:
      method = "mcmc";
      model["L"] = 8;
      break;
    case Command::Contours:
      model["beta"] = 2.0;
      break;
    case Command::Landau:
      model["L"] = json::array({8, 16, 32, 64, 128});
      model["beta"] = 0.0;
      break;
    case Command::Interface:
      model["beta"] = 3.0;
      model["L"] = 6;
      boundary = {{"type", "dobrushin"}};
      break;
    case Command::Probe:
      if (!probe) throw ConfigError("probe", "probe kind required");
      switch (*probe) {
        case ProbeKind::Decimation:
          model["beta"] = 4.0;
          model["L"] = 2;
          break;
        case ProbeKind::G:
          model["beta"] = 4.0;
          model["L"] = 2;
          geometry = {{"N", 16}, {"n", 20}};
          break;
        case ProbeKind::Wetting:
          model["coupling"]["alpha"] = 1.6;
          model["beta"] = 4.0;
          model["L"] = 4;
          geometry = {{"N", 8}};
          break;
        case ProbeKind::Shift:
          model["dimension"] = 2;
          model["coupling"]["alpha"] = 2.5;
          model["beta"] = 0.0;
          model["L"] = json::array({64, 128, 256, 512, 1024, 2048});
          break;
        case ProbeKind::GsStep:
          model["dimension"] = 2;
          model["coupling"]["alpha"] = 2.5;
          model["beta"] = 0.0;
          model["L"] = json::array({64, 128, 256});
          break;
        case ProbeKind::Percus:
        case ProbeKind::Rigidity:
          model["dimension"] = 2;
          model["coupling"] = {{"type", "anisotropic"},
                               {"J_h", 1.0},
                               {"alpha_h", 1.5},
                               {"vertical", {{"type", "nearest_neighbor"}, {"J", 1.0}}}};
          model["beta"] = 3.0;
          model["L"] = 1;
          boundary = {{"type", "dobrushin"}};
          break;
      }
      break;
  }

  json doc{{"schema", kSchemaVersion},
           {"command", command_name(command)},
           {"model", model},
           {"boundary", boundary},
           {"method", method},
           {"sampler", {{"replicas", 8}, {"sweeps", 20000}, {"burn_in", 2000}, {"rule", "heat_bath"}}},
           {"geometry", geometry},
           {"seed", 1},
           {"workers", 0},
           {"output", "results.jsonl"},
           {"format", "json"}};
  if (probe) doc["probe"] = probe_name(*probe);
  return doc;
}

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("", path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": invalid JSON (" +
                              e.what() + ")");
  }
}

json overlay(json base, const json& user) {
  if (!user.is_object()) throw ConfigError("", "config document must be a JSON object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string& key = it.key();
    const bool mergeable = key == "model" || key == "sampler" || key == "geometry";
    if (mergeable && it->is_object() && base.contains(key) && base[key].is_object()) {
      for (auto jt = it->begin(); jt != it->end(); ++jt) base[key][jt.key()] = *jt;
      if (key == "model" && it->contains("interval") && !it->contains("L")) base[key].erase("L");
    } else {
      base[key] = *it;
    }
  }
  return base;
}

ExperimentConfig parse_config(const json& document) {
  Block root(document, "");
  ExperimentConfig c;

  const long schema = root.integer("schema");
  if (schema != kSchemaVersion)
    throw ConfigError("schema", "unsupported schema version " + std::to_string(schema) + " (expected 1)");

  c.command = parse_command(root.text("command"));
  if (c.command == Command::Probe) {
    c.probe = parse_probe(root.text("probe"));
  } else if (root.has("probe")) {
    throw ConfigError("probe", "only valid with the probe command");
  }

  {
    Block model = root.child("model");
    const long d = model.integer("dimension", 1);
    if (d != 1 && d != 2) throw ConfigError(model.path("dimension"), "must be 1 or 2");
    c.dimension = static_cast<int>(d);
    c.coupling = parse_coupling(model.child("coupling"));
    try {
      c.coupling.validate(c.dimension);
    } catch (const ContractError& e) {
      throw ConfigError(model.path("coupling"), e.what());
    }
    c.betas = scalar_or_list<double>(model.raw("beta"), model.path("beta"), parse_beta);
    if (model.has("interval")) {
      const json& iv = model.raw("interval");
      if (!iv.is_array() || iv.size() != 2) throw ConfigError(model.path("interval"), "expected [lo, hi]");
      const long lo = Block::as_integer(iv[0], model.path("interval") + "[0]");
      const long hi = Block::as_integer(iv[1], model.path("interval") + "[1]");
      if (lo > hi) throw ConfigError(model.path("interval"), "lo must not exceed hi");
      if (c.dimension != 1) throw ConfigError(model.path("interval"), "only for dimension 1");
      c.interval = std::make_pair(lo, hi);
      if (model.has("L")) throw ConfigError(model.path("L"), "give either L or interval, not both");
      c.lengths = {hi - lo + 1};
    } else {
      c.lengths = scalar_or_list<long>(model.raw("L"), model.path("L"), parse_length);
    }
    c.field = model.number("field", 0.0);
    model.finish();
  }

  {
    Block b = root.child("boundary");
    c.boundary.type = b.text("type");
    static const std::set<std::string> kinds{"plus", "minus", "free", "alternating", "dobrushin"};
    if (!kinds.count(c.boundary.type))
      throw ConfigError(b.path("type"), "expected plus, minus, free, alternating or dobrushin, got '" +
                                            c.boundary.type + "'");
    c.boundary.split = b.integer("split", 0);
    c.boundary.height = b.integer("height", 0);
    b.finish();
  }

  const std::string method = root.text("method", "exact");
  if (method == "exact")
    c.method = Method::Exact;
  else if (method == "mcmc")
    c.method = Method::Mcmc;
  else
    throw ConfigError("method", "expected exact or mcmc, got '" + method + "'");

  if (root.has("sampler")) {
    Block s = root.child("sampler");
    c.sampler.replicas = count_field(s, "replicas", c.sampler.replicas, 1);
    c.sampler.sweeps = count_field(s, "sweeps", c.sampler.sweeps, 1);
    c.sampler.burn_in = count_field(s, "burn_in", c.sampler.burn_in, 0);
    if (c.sampler.burn_in >= c.sampler.sweeps)
      throw ConfigError(s.path("burn_in"), "must be smaller than sweeps");
    const std::string rule = s.text("rule", "heat_bath");
    if (rule == "heat_bath")
      c.sampler.rule = mcmc::Rule::HeatBath;
    else if (rule == "metropolis")
      c.sampler.rule = mcmc::Rule::Metropolis;
    else
      throw ConfigError(s.path("rule"), "expected heat_bath or metropolis, got '" + rule + "'");
    s.finish();
  }

  if (root.has("geometry")) {
    Block g = root.child("geometry");
    c.geometry.N = g.integer("N", 0);
    c.geometry.n = g.integer("n", 0);
    c.geometry.window = g.integer("window", 0);
    const long sign = g.integer("alternating_sign", 1);
    if (sign != 1 && sign != -1) throw ConfigError(g.path("alternating_sign"), "must be +1 or -1");
    c.geometry.alternating_sign = static_cast<int>(sign);
    if (c.geometry.N < 0 || c.geometry.n < 0 || c.geometry.window < 0)
      throw ConfigError(g.path("N"), "geometry sizes must be >= 0");
    g.finish();
  }

  if (root.has("seed")) {
    const json& s = root.raw("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0))
      throw ConfigError("seed", "expected an unsigned 64-bit integer");
    c.seed = s.get<std::uint64_t>();
  }
  c.workers = count_field(root, "workers", 0, 0);
  c.output = root.text("output", "results.jsonl");
  const std::string format = root.text("format", "json");
  if (format == "json")
    c.format = OutputFormat::Json;
  else if (format == "csv")
    c.format = OutputFormat::Csv;
  else if (format == "both")
    c.format = OutputFormat::Both;
  else
    throw ConfigError("format", "expected json, csv or both, got '" + format + "'");
  root.finish();
  return c;
}

json to_document(const ExperimentConfig& c) {
  json model{{"dimension", c.dimension}, {"coupling", coupling_document(c.coupling)}, {"field", c.field}};
  model["beta"] = c.betas.size() == 1 ? json(c.betas[0]) : json(c.betas);
  if (c.interval)
    model["interval"] = json::array({c.interval->first, c.interval->second});
  else
    model["L"] = c.lengths.size() == 1 ? json(c.lengths[0]) : json(c.lengths);

  json doc{{"schema", kSchemaVersion},
           {"command", command_name(c.command)},
           {"model", model},
           {"boundary", {{"type", c.boundary.type}, {"split", c.boundary.split}, {"height", c.boundary.height}}},
           {"method", method_name(c.method)},
           {"sampler",
            {{"replicas", c.sampler.replicas},
             {"sweeps", c.sampler.sweeps},
             {"burn_in", c.sampler.burn_in},
             {"rule", c.sampler.rule == mcmc::Rule::HeatBath ? "heat_bath" : "metropolis"}}},
           {"geometry",
            {{"N", c.geometry.N},
             {"n", c.geometry.n},
             {"window", c.geometry.window},
             {"alternating_sign", c.geometry.alternating_sign}}},
           {"seed", c.seed},
           {"workers", c.workers},
           {"output", c.output},
           {"format", c.format == OutputFormat::Json ? "json" : (c.format == OutputFormat::Csv ? "csv" : "both")}};
  if (c.probe) doc["probe"] = probe_name(*c.probe);
  return doc;
}

std::string explain_text() {
  return R"(Config schema v1 (JSON, no comments). Annotated template:

{
  "schema": 1,                          required, must be 1
  "command": "probe",                   enumerate | sample | contours | landau | interface | probe
  "probe": "decimation",                probe only: decimation | g | wetting | shift | gs-step | percus | rigidity
  "model": {
    "dimension": 1,                     1 or 2
    "coupling": {                       replaces the default block entirely
      "type": "power_law",              nearest_neighbor {J} | power_law {J, alpha, j1?}
                                        | isotropic_mixed {J_nn, alpha}
                                        | anisotropic {J_h, alpha_h, vertical: {type, J, alpha?}}
      "J": 1.0,
      "alpha": 1.5                      required for power_law and isotropic_mixed
    },
    "beta": 4.0,                        number or ladder [b1, b2, ...]
    "L": 2,                             half-width or ladder; fit ladder for landau/shift, radii for gs-step
    "interval": [0, 1],                 1d only, instead of L: explicit volume [lo, hi]
    "field": 0.0                        homogeneous external field
  },
  "boundary": {"type": "plus"},         plus | minus | free | alternating | dobrushin {split, height}
  "method": "exact",                    exact (<= 24 free sites) | mcmc
  "sampler": {"replicas": 8, "sweeps": 20000, "burn_in": 2000, "rule": "heat_bath"},
  "geometry": {"N": 16, "n": 20, "window": 0, "alternating_sign": 1},
                                        probe geometry; 0 selects the probe default
  "seed": 1,                            master seed; replica r uses derive_seed(seed, r)
  "workers": 0,                         0 = all cores
  "output": "results.jsonl",            results log (one JSON record per run, append only)
  "format": "json"                      json | csv | both (csv goes next to the log, .csv suffix)
}

Command line flags --seed, --workers, --out, --format, --L, --alpha and --beta
override the file. Unknown keys are rejected.
)";
}

}  // namespace lrising::cli
