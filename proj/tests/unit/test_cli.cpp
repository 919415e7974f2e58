#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lrising/contours.hpp"
#include "lrising/probes.hpp"
#include "lrising_cli/config.hpp"
#include "lrising_cli/runner.hpp"
#include "lrising_cli/store.hpp"

using namespace lrising;
using namespace lrising::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lrising_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Exec {
  int code = -1;
  std::string out;
  std::string err;
};

Exec run_exe(const std::string& args, const TempDir& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(LRISING_EXE) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Exec e;
  e.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  e.out = slurp(out);
  e.err = slurp(err);
  return e;
}

ExperimentConfig config_for(Command c, std::optional<ProbeKind> p, const json& user) {
  return parse_config(overlay(default_document(c, p), user));
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  for (std::string line; std::getline(s, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config: defaults parse and round trip") {
  for (Command c : {Command::Enumerate, Command::Sample, Command::Contours, Command::Landau, Command::Interface}) {
    const auto cfg = parse_config(default_document(c));
    CHECK(to_document(cfg) == to_document(parse_config(to_document(cfg))));
  }
  for (ProbeKind p : {ProbeKind::Decimation, ProbeKind::G, ProbeKind::Wetting, ProbeKind::Shift, ProbeKind::GsStep,
                      ProbeKind::Percus, ProbeKind::Rigidity}) {
    const auto cfg = parse_config(default_document(Command::Probe, p));
    CHECK(cfg.probe == p);
    CHECK(to_document(cfg) == to_document(parse_config(to_document(cfg))));
  }
}

TEST_CASE("config: field-level diagnostics") {
  auto doc = default_document(Command::Enumerate);
  doc["model"]["coupling"] = json{{"type", "power_law"}, {"J", 1.0}};
  try {
    parse_config(doc);
    FAIL("missing alpha accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "model.coupling.alpha");
  }

  doc = default_document(Command::Enumerate);
  doc["sampler"]["sweepz"] = 10;
  try {
    parse_config(doc);
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "sampler.sweepz");
  }

  doc = default_document(Command::Enumerate);
  doc["schema"] = 2;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = default_document(Command::Enumerate);
  doc["model"]["beta"] = "hot";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = default_document(Command::Enumerate);
  doc["format"] = "xml";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("config: syntax errors report line and column") {
  TempDir dir;
  write(dir / "bad.json", "{\n  \"schema\": 1,\n  \"seed\": ,\n}\n");
  try {
    read_document((dir / "bad.json").string());
    FAIL("syntax error accepted");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("3:") != std::string::npos);
  }
}

TEST_CASE("config: overlay merges blocks and replaces coupling and boundary") {
  const auto base = default_document(Command::Sample);
  const auto merged = overlay(base, json{{"sampler", {{"sweeps", 123}}}, {"model", {{"beta", 2.5}}}});
  CHECK(merged["sampler"]["sweeps"] == 123);
  CHECK(merged["sampler"]["replicas"] == base["sampler"]["replicas"]);
  CHECK(merged["model"]["beta"] == 2.5);
  CHECK(merged["model"]["coupling"] == base["model"]["coupling"]);
  const auto replaced = overlay(base, json{{"model", {{"coupling", {{"type", "nearest_neighbor"}}}}}});
  CHECK(replaced["model"]["coupling"] == json{{"type", "nearest_neighbor"}});
  CHECK(parse_config(replaced).coupling.get_if<NearestNeighbor>() != nullptr);
}

TEST_CASE("store: append-only, corrupt tail quarantined, interior untouched") {
  TempDir dir;
  const auto log = dir / "runs.jsonl";
  {
    ResultsStore s(log);
    CHECK(s.scan().records == 0);
    s.append(R"({"a":1})");
    s.append(R"({"a":2})");
    s.flush();
  }
  const std::string before = slurp(log);
  CHECK(before == "{\"a\":1}\n{\"a\":2}\n");

  // Interrupted write: unterminated, invalid tail.
  write(log, before + "{\"a\":3,\"b\"");
  {
    ResultsStore s(log);
    CHECK(s.scan().records == 2);
    CHECK(s.scan().quarantined_bytes == 10);
    CHECK(slurp(s.quarantine_path()) .find("{\"a\":3,\"b\"") != std::string::npos);
    CHECK(slurp(log) == before);
    s.append(R"({"a":4})");
    s.flush();
  }
  CHECK(slurp(log).rfind(before, 0) == 0);
  CHECK(lines(slurp(log)).size() == 3);

  // Garbage in the middle is reported and left alone.
  const std::string with_junk = "{\"a\":1}\nnot json\n{\"a\":2}\n";
  write(log, with_junk);
  const auto scan = inspect_log(log);
  CHECK(scan.records == 2);
  CHECK(scan.corrupt_interior == 1);
  {
    ResultsStore s(log);
    CHECK(s.scan().corrupt_interior == 1);
    CHECK(s.scan().quarantined_bytes == 0);
  }
  CHECK(slurp(log) == with_junk);
}

TEST_CASE("store: records land in submission order") {
  TempDir dir;
  const auto log = dir / "order.jsonl";
  {
    ResultsStore s(log);
    for (int i = 0; i < 500; ++i) s.append(json{{"i", i}}.dump());
  }
  const auto ls = lines(slurp(log));
  REQUIRE(ls.size() == 500);
  for (int i = 0; i < 500; ++i) CHECK(json::parse(ls[static_cast<std::size_t>(i)])["i"] == i);
}

TEST_CASE("runner: enumerate on the two-site example gives Z = 5") {
  const auto cfg = config_for(Command::Enumerate, std::nullopt,
                              json{{"model", {{"coupling", {{"type", "nearest_neighbor"}, {"J", 1.0}}},
                                              {"beta", 0.6931471805599453},
                                              {"interval", {0, 1}}}},
                                   {"boundary", {{"type", "free"}}}});
  const auto r = run(cfg);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].scalars.at("z").value == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("runner: records are deterministic and embed the resolved config") {
  const auto cfg = config_for(Command::Sample, std::nullopt,
                              json{{"model", {{"L", 2}, {"beta", {0.5, 1.0}}}},
                                   {"sampler", {{"replicas", 3}, {"sweeps", 300}, {"burn_in", 30}}},
                                   {"seed", 9}});
  const auto a = run(cfg), b = run(cfg);
  CHECK(a.record_line(false) == b.record_line(false));
  const auto rec = a.record(false);
  CHECK(rec["config"] == to_document(cfg));
  CHECK(!rec.contains("wall_clock_seconds"));
  CHECK(rec["seed"] == 9);
  auto other = cfg;
  other.seed = 10;
  CHECK(run(other).record_line(false) != a.record_line(false));
}

TEST_CASE("runner: CSV and JSON carry identical values") {
  const auto cfg = config_for(Command::Probe, ProbeKind::Decimation, json{{"model", {{"beta", {0.0, 2.0}}}}});
  const auto r = run(cfg);
  const auto rec = json::parse(r.record_line());
  std::map<std::string, std::string> from_json;
  for (const auto& p : rec["points"]) {
    const std::string beta = p.contains("beta") && !p["beta"].is_null() ? format_real(p["beta"].get<double>()) : "";
    for (const auto& [k, v] : p["scalars"].items()) from_json[beta + "|" + k] = format_real(v["value"].get<double>());
  }
  const auto ls = lines(r.csv());
  REQUIRE(!ls.empty());
  CHECK(ls[0] == "beta,L,quantity,value,std_error,method");
  std::size_t matched = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream s(ls[i]);
    for (std::string c; std::getline(s, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() >= 4);
    const auto it = from_json.find(cells[0] + "|" + cells[2]);
    REQUIRE(it != from_json.end());
    CHECK(it->second == cells[3]);
    ++matched;
  }
  CHECK(matched == from_json.size());
}

TEST_CASE("runner: decimation probe reproduces the module value") {
  const auto cfg = config_for(Command::Probe, ProbeKind::Decimation, json::object());
  const auto r = run(cfg);
  REQUIRE(r.points.size() == 1);
  const auto direct = probes::decimation_probe(1.5, 4.0, probes::DecimationGeometry{2, 0, 1});
  CHECK(r.points[0].scalars.at("gap").value == direct.value("gap"));
}

TEST_CASE("runner: interface law table is symmetric") {
  const auto cfg = config_for(Command::Interface, std::nullopt, json{{"model", {{"L", 6}, {"beta", 3.0}}}});
  const auto r = run(cfg);
  REQUIRE(r.points.size() == 1);
  const auto& sc = r.points[0].scalars;
  std::vector<double> p;
  for (const auto& [k, m] : sc)
    if (k.rfind("p[", 0) == 0) p.push_back(m.value);
  REQUIRE(p.size() == 14);
  for (std::size_t j = 0; j < 14; ++j) CHECK(std::abs(p[j] - p[13 - j]) < 1e-12);
}

TEST_CASE("executable: exit codes and outputs") {
  TempDir dir;
  const std::string out = " --out " + (dir / "log.jsonl").string();

  auto ok = run_exe("enumerate --L 1 --beta 1" + out, dir);
  CHECK(ok.code == 0);
  CHECK(inspect_log(dir / "log.jsonl").records == 1);

  write(dir / "missing_alpha.json", R"({"model": {"coupling": {"type": "power_law", "J": 1.0}}})");
  auto bad = run_exe("enumerate --config " + (dir / "missing_alpha.json").string() + out, dir);
  CHECK(bad.code == 2);
  CHECK(bad.err.find("model.coupling.alpha") != std::string::npos);

  write(dir / "unknown.json", R"({"modle": {}})");
  CHECK(run_exe("enumerate --config " + (dir / "unknown.json").string() + out, dir).code == 2);
  CHECK(run_exe("enumerate --bogus" + out, dir).code == 2);
  CHECK(run_exe("enumerate --L 20" + out, dir).code == 3);

  auto csv = run_exe("probe decimation --beta 0,2 --format both" + out, dir);
  CHECK(csv.code == 0);
  CHECK(fs::exists(dir / "log.csv"));
  CHECK(lines(slurp(dir / "log.csv"))[0] == "beta,L,quantity,value,std_error,method");

  auto iface = run_exe("interface --L 6 --alpha 1.5 --beta 3" + out, dir);
  CHECK(iface.code == 0);
  CHECK(iface.out.find("theta") != std::string::npos);

  CHECK(run_exe("--version", dir).code == 0);
  CHECK(run_exe("--explain", dir).out.find("schema") != std::string::npos);
}

TEST_CASE("executable: contours --decompose round trips a configuration file") {
  TempDir dir;
  const auto vol = Volume::line(4);
  const Configuration sigma({1, -1, -1, 1, 1, -1, 1, -1, -1});
  write(dir / "config.txt", contours::write_configuration(vol, sigma, "dobrushin"));
  auto e = run_exe("contours --decompose " + (dir / "config.txt").string() + " --out " + (dir / "d.jsonl").string(), dir);
  CHECK(e.code == 0);
  CHECK(e.out.find("interface=") != std::string::npos);
  const auto rec = json::parse(lines(slurp(dir / "d.jsonl")).back());
  CHECK(rec["ok"] == true);
}

TEST_CASE("executable: same seed gives byte-identical records apart from the clock") {
  TempDir dir;
  const std::string args = "sample --L 2 --beta 1 --seed 4 --workers 2 --out " + (dir / "s.jsonl").string();
  write(dir / "cfg.json", R"({"sampler": {"replicas": 2, "sweeps": 400, "burn_in": 40}})");
  const std::string with_cfg = args + " --config " + (dir / "cfg.json").string();
  REQUIRE(run_exe(with_cfg, dir).code == 0);
  REQUIRE(run_exe(with_cfg, dir).code == 0);
  auto ls = lines(slurp(dir / "s.jsonl"));
  REQUIRE(ls.size() == 2);
  auto a = json::parse(ls[0]), b = json::parse(ls[1]);
  a.erase("wall_clock_seconds");
  b.erase("wall_clock_seconds");
  CHECK(canonical_json(a) == canonical_json(b));
}
