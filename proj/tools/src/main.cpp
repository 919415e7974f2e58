#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrising/errors.hpp"
#include "lrising_cli/config.hpp"
#include "lrising_cli/runner.hpp"
#include "lrising_cli/store.hpp"
#include "lrising_cli/verify.hpp"

namespace {

using namespace lrising;
using namespace lrising::cli;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitInvariant = 4;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
  std::string format;
  std::vector<long> L;
  std::optional<double> alpha;
  std::vector<double> beta;
  std::string decompose;
  bool quick = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config (schema v1)");
  app->add_option("--seed", f.seed, "master seed (u64)");
  app->add_option("--workers", f.workers, "worker threads, 0 = all cores");
  app->add_option("--out", f.out, "results log (JSONL)");
  app->add_option("--format", f.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app->add_option("--L", f.L, "half-width or ladder, comma separated")->delimiter(',');
  app->add_option("--alpha", f.alpha, "decay exponent");
  app->add_option("--beta", f.beta, "inverse temperature or ladder, comma separated")->delimiter(',');
}

json build_document(Command command, std::optional<ProbeKind> probe, const Flags& f) {
  json doc = default_document(command, probe);
  if (!f.config.empty()) {
    const json user = read_document(f.config);
    if (!user.is_object()) throw ConfigError("", "config document must be a JSON object");
    if (user.contains("command") && user["command"] != doc["command"])
      throw ConfigError("command", "config is for '" + user["command"].dump() + "', not '" +
                                       std::string(command_name(command)) + "'");
    if (probe && user.contains("probe") && user["probe"] != doc["probe"])
      throw ConfigError("probe", "config is for probe " + user["probe"].dump());
    doc = overlay(std::move(doc), user);
  }
  if (f.seed) doc["seed"] = *f.seed;
  if (f.workers) doc["workers"] = *f.workers;
  if (!f.out.empty()) doc["output"] = f.out;
  if (!f.format.empty()) doc["format"] = f.format;
  if (!f.L.empty()) {
    doc["model"].erase("interval");
    doc["model"]["L"] = f.L.size() == 1 ? json(f.L[0]) : json(f.L);
  }
  if (!f.beta.empty()) doc["model"]["beta"] = f.beta.size() == 1 ? json(f.beta[0]) : json(f.beta);
  if (f.alpha) {
    json& c = doc["model"]["coupling"];
    const std::string type = c.value("type", "");
    if (type == "anisotropic")
      c["alpha_h"] = *f.alpha;
    else if (type == "power_law" || type == "isotropic_mixed")
      c["alpha"] = *f.alpha;
    else
      throw ConfigError("model.coupling.type", "--alpha needs a power-law coupling, got '" + type + "'");
  }
  return doc;
}

std::string theta_key(std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p[%03zu]", j);
  return buf;
}

void print_summary(const RunResult& r, std::ostream& out) {
  out << r.config.name() << " (" << r.points.size() << " point" << (r.points.size() == 1 ? "" : "s") << ")\n";
  for (const auto& p : r.points) {
    out << " ";
    if (p.beta) out << " beta=" << format_real(*p.beta);
    if (p.L) out << " L=" << *p.L;
    if (!p.beta && !p.L) out << " summary";
    out << '\n';
    for (const auto& [k, m] : p.scalars) {
      char buf[160];
      if (m.method == Method::Mcmc)
        std::snprintf(buf, sizeof buf, "    %-32s %s +- %s (mcmc)\n", k.c_str(), format_real(m.value).c_str(),
                      format_real(m.std_error).c_str());
      else
        std::snprintf(buf, sizeof buf, "    %-32s %s\n", k.c_str(), format_real(m.value).c_str());
      out << buf;
    }
    if (p.detail.contains("theta")) {
      out << "    theta             probability\n";
      const auto& th = p.detail["theta"];
      for (std::size_t j = 0; j < th.size(); ++j)
        out << "    " << format_real(th[j].get<double>()) << "  "
            << format_real(p.scalars.at(theta_key(j)).value) << '\n';
    }
    if (p.detail.contains("family")) out << "  family:\n" << p.detail["family"].get<std::string>();
  }
  for (const auto& m : r.messages) out << "  ! " << m << '\n';
}

std::filesystem::path csv_path(const std::string& log) {
  std::filesystem::path p(log);
  if (p.extension() == ".jsonl") p.replace_extension(".csv");
  else p += ".csv";
  return p;
}

void persist(const RunResult& r) {
  const auto fmt = r.config.format;
  if (fmt != OutputFormat::Csv) {
    ResultsStore store(r.config.output);
    if (store.scan().quarantined_bytes)
      std::cerr << "warning: moved " << store.scan().quarantined_bytes << " bytes of a corrupt trailing record to "
                << store.quarantine_path().string() << '\n';
    if (store.scan().corrupt_interior)
      std::cerr << "warning: " << store.scan().corrupt_interior << " malformed line(s) inside "
                << store.path().string() << " left untouched\n";
    store.append(r.record_line());
    store.flush();
    std::cout << "record appended to " << store.path().string() << '\n';
  }
  if (fmt != OutputFormat::Json) {
    const auto path = csv_path(r.config.output);
    std::ofstream csv(path);
    csv << r.csv();
    if (!csv) throw std::runtime_error("cannot write " + path.string());
    std::cout << "table written to " << path.string() << '\n';
  }
}

int execute(Command command, std::optional<ProbeKind> probe, const Flags& f) {
  const ExperimentConfig config = parse_config(build_document(command, probe, f));
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  if (!f.decompose.empty()) {
    std::ifstream in(f.decompose);
    if (!in) throw ConfigError("--decompose", "cannot open '" + f.decompose + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    r = decompose(config, buf.str());
  } else {
    r = run(config);
  }
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_summary(r, std::cout);
  persist(r);
  return r.ok ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrising: long-range Ising experiments (exact enumeration, Monte Carlo, contour geometry)"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  bool explain = false;
  app.add_flag("--explain", explain, "print an annotated config template and exit");
  app.set_version_flag("--version", tool_version());

  Flags flags;
  std::optional<Command> chosen;
  std::optional<ProbeKind> chosen_probe;

  const std::vector<std::pair<Command, const char*>> plain{
      {Command::Enumerate, "exact partition function and moments"},
      {Command::Sample, "replica Monte Carlo estimates"},
      {Command::Contours, "triangle decomposition (exhaustive, or --decompose FILE)"},
      {Command::Landau, "excess-energy exponent fit"},
      {Command::Interface, "interface point law under Dobrushin boundary"}};
  for (const auto& [cmd, help] : plain) {
    auto* sub = app.add_subcommand(command_name(cmd), help);
    add_common(sub, flags);
    if (cmd == Command::Contours) sub->add_option("--decompose", flags.decompose, "configuration file (site:spin lines)");
    sub->callback([&chosen, c = cmd] { chosen = c; });
  }

  auto* probe = app.add_subcommand("probe", "run one probe");
  probe->require_subcommand(1);
  for (ProbeKind k : {ProbeKind::Decimation, ProbeKind::G, ProbeKind::Wetting, ProbeKind::Shift, ProbeKind::GsStep,
                      ProbeKind::Percus, ProbeKind::Rigidity}) {
    auto* sub = probe->add_subcommand(probe_name(k), std::string(probe_name(k)) + " probe");
    add_common(sub, flags);
    sub->callback([&chosen, &chosen_probe, k] {
      chosen = Command::Probe;
      chosen_probe = k;
    });
  }

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_flag("--quick", flags.quick, "smaller exhaustive sizes (under two minutes)");
  verify->add_option("--seed", flags.seed, "master seed");
  verify->add_option("--workers", flags.workers, "worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (explain) {
    std::cout << explain_text();
    return 0;
  }

  try {
    if (verify->parsed()) {
      VerifyOptions o;
      o.quick = flags.quick;
      o.seed = flags.seed.value_or(1);
      o.workers = flags.workers.value_or(0);
      const auto checks = run_verify(o);
      std::cout << format_checks(checks);
      for (const auto& c : checks)
        if (!c.passed) return kExitInvariant;
      return 0;
    }
    if (!chosen) {
      std::cout << app.help();
      return kExitConfig;
    }
    return execute(*chosen, chosen_probe, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ContractError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
