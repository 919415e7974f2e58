#include "lrising_cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "lrising/contours.hpp"
#include "lrising/errors.hpp"
#include "lrising/exact.hpp"
#include "lrising/mcmc.hpp"
#include "lrising/parallel.hpp"
#include "lrising/probes.hpp"
#include "lrising/rng.hpp"

#ifndef LRISING_VERSION
#define LRISING_VERSION "0.0.0"
#endif

namespace lrising::cli {
namespace {

using nlohmann::json;

// Exhaustive contour sweeps stay well below the enumeration cap: every
// configuration is decomposed and rebuilt.
constexpr std::size_t kMaxContourSites = 20;

Measurement exact_value(double v) { return Measurement{v, Method::Exact, 0.0}; }

// "name[007]": zero padded so that keys sort in index order.
std::string indexed(const std::string& name, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "[%03zu]", i);
  return name + buf;
}

Volume volume_for(const ExperimentConfig& c, long L) {
  if (c.dimension == 2) return Volume::box(L);
  if (c.interval) return Volume::interval(c.interval->first, c.interval->second);
  return Volume::line(L);
}

BoundaryCondition boundary_for(const ExperimentConfig& c) {
  const auto& t = c.boundary.type;
  if (t == "plus") return BoundaryCondition::plus();
  if (t == "minus") return BoundaryCondition::minus();
  if (t == "free") return BoundaryCondition::free();
  if (t == "alternating") return BoundaryCondition::alternating();
  return c.dimension == 1 ? BoundaryCondition::dobrushin_1d(c.boundary.split)
                          : BoundaryCondition::dobrushin_2d(c.boundary.height);
}

ModelParams params_for(const ExperimentConfig& c, double beta) {
  ModelParams p;
  p.beta = beta;
  p.coupling = c.coupling;
  if (c.field != 0.0) p.field.value = c.field;
  return p;
}

std::size_t centre_index(const Volume& v) {
  if (auto i = v.index(Site{0, 0})) return *i;
  return 0;
}

// Index of the right neighbour of the centre, if inside.
std::optional<std::size_t> neighbour_index(const Volume& v) {
  const Site c = v.site(centre_index(v));
  return v.index(Site{c.x1 + 1, c.x2});
}

double power_alpha(const ExperimentConfig& c, const char* what) {
  if (auto* p = c.coupling.get_if<PowerLaw>()) return p->alpha;
  if (auto* m = c.coupling.get_if<IsotropicMixed>()) return m->alpha;
  throw ConfigError("model.coupling.type", std::string(what) + " needs a power_law coupling");
}

void require_dimension(const ExperimentConfig& c, int d, const char* what) {
  if (c.dimension != d)
    throw ConfigError("model.dimension", std::string(what) + " runs in dimension " + std::to_string(d));
}

probes::McmcSettings mcmc_for(const ExperimentConfig& c, std::size_t point, std::size_t workers) {
  probes::McmcSettings s;
  s.replicas = c.sampler.replicas;
  s.sweeps = c.sampler.sweeps;
  s.burn_in = c.sampler.burn_in;
  s.rule = c.sampler.rule;
  s.seed = derive_seed(c.seed, point);
  s.workers = workers;
  return s;
}

struct Job {
  double beta;
  long L;
};

std::vector<Job> grid(const ExperimentConfig& c) {
  std::vector<Job> jobs;
  for (double b : c.betas)
    for (long L : c.lengths) jobs.push_back({b, L});
  return jobs;
}

// Runs f over the (beta, L) grid. With several points the pool is spent on
// points and each point runs single threaded; results never depend on this.
template <class F>
std::vector<Point> fan_out(const ExperimentConfig& c, F f) {
  const auto jobs = grid(c);
  const std::size_t inner = jobs.size() > 1 ? 1 : c.workers;
  const std::size_t outer = jobs.size() > 1 ? c.workers : 1;
  return parallel_map(jobs.size(), outer, [&](std::size_t i) {
    Point p = f(jobs[i], i, inner);
    p.beta = jobs[i].beta;
    p.L = jobs[i].L;
    return p;
  });
}

void add_report(Point& p, const ProbeReport& r) {
  for (const auto& [k, m] : r.scalars) p.scalars[k] = m;
  for (const auto& [k, list] : r.profiles)
    for (std::size_t i = 0; i < list.size(); ++i) p.scalars[indexed(k, i)] = list[i];
  for (const auto& [k, v] : r.verdicts) p.scalars["verdict." + k] = exact_value(v ? 1.0 : 0.0);
  p.detail["report"] = r.to_json();
}

// ---- commands ---------------------------------------------------------------

std::vector<Point> run_enumerate(const ExperimentConfig& c) {
  return fan_out(c, [&](const Job& job, std::size_t, std::size_t workers) {
    const Volume vol = volume_for(c, job.L);
    const GibbsModel model(vol, params_for(c, job.beta), boundary_for(c));
    const std::size_t ci = centre_index(vol);
    const auto ni = neighbour_index(vol);
    const std::size_t n = vol.size();
    const auto sums = exact::enumerate_weighted(
        model, {},
        [&](std::span<const Spin> s, std::span<double> out) {
          double m = 0.0;
          for (Spin v : s) m += v;
          out[0] = s[ci];
          out[1] = ni ? double(s[ci] * s[*ni]) : 0.0;
          out[2] = m / double(n);
        },
        3, exact::EnumerationOptions{workers});
    Point p;
    p.scalars["log_z"] = exact_value(sums.log_z);
    p.scalars["z"] = exact_value(std::exp(sums.log_z));
    p.scalars["spin_centre"] = exact_value(sums.averages[0]);
    if (ni) p.scalars["pair_centre"] = exact_value(sums.averages[1]);
    p.scalars["magnetization"] = exact_value(sums.averages[2]);
    p.detail["volume"] = vol.describe();
    return p;
  });
}

std::vector<Point> run_sample(const ExperimentConfig& c) {
  return fan_out(c, [&](const Job& job, std::size_t index, std::size_t workers) {
    const Volume vol = volume_for(c, job.L);
    const GibbsModel model(vol, params_for(c, job.beta), boundary_for(c));
    const std::size_t ci = centre_index(vol);
    const auto ni = neighbour_index(vol);
    std::vector<Observable> obs{Observable::spin(ci), Observable::magnetization()};
    if (ni) obs.push_back(Observable::pair(ci, *ni));
    mcmc::ReplicaPlan plan;
    plan.replicas = c.sampler.replicas;
    plan.sweeps = c.sampler.sweeps;
    plan.burn_in = c.sampler.burn_in;
    plan.rule = c.sampler.rule;
    plan.master_seed = derive_seed(c.seed, index);
    plan.workers = workers;
    const auto initials = mcmc::mixed_initials(vol.size(), plan.master_seed);
    const auto res = mcmc::run_replicas(model, obs, plan, initials);
    Point p;
    const char* names[] = {"spin_centre", "magnetization", "pair_centre"};
    json tau = json::object();
    for (std::size_t k = 0; k < obs.size(); ++k) {
      p.scalars[names[k]] = Measurement{res.merged[k].mean, Method::Mcmc, res.merged[k].std_error};
      tau[names[k]] = res.merged[k].tau;
    }
    p.detail["tau"] = tau;
    p.detail["volume"] = vol.describe();
    p.detail["seed"] = plan.master_seed;
    return p;
  });
}

std::vector<Point> run_contours(const ExperimentConfig& c) {
  require_dimension(c, 1, "contours");
  const auto& t = c.boundary.type;
  if (t == "free" || t == "alternating")
    throw ConfigError("boundary.type", "contours need plus, minus or dobrushin");
  const auto* pl = c.coupling.get_if<PowerLaw>();
  return fan_out(c, [&](const Job& job, std::size_t, std::size_t) {
    const Volume vol = volume_for(c, job.L);
    const std::size_t n = vol.size();
    if (n > kMaxContourSites)
      throw CapacityError("exhaustive contour sweep is limited to " + std::to_string(kMaxContourSites) +
                          " sites, got " + std::to_string(n));
    const BoundaryCondition bc = boundary_for(c);
    const GibbsModel model(vol, params_for(c, job.beta), bc);
    const bool bound = pl && pl->alpha > contours::alpha_star() && pl->alpha <= 2.0;
    const double kap = bound ? contours::kappa(pl->alpha) : 0.0;

    std::set<std::string> families;
    std::size_t failures = 0, violations = 0, most = 0, total = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    std::vector<Spin> s(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i & 1U) ? Spin{-1} : Spin{1};
      const auto fam = contours::triangles(vol, s, bc);
      const Configuration back = contours::reconstruct(fam, bc, vol);
      if (!std::equal(s.begin(), s.end(), back.spins().begin())) ++failures;
      families.insert(contours::write_family(fam));
      if (contours::triangle_separation_violations(fam) > 0) ++violations;
      most = std::max(most, fam.triangles.size());
      total += fam.triangles.size();
      if (bound)
        for (std::size_t k = 0; k < fam.triangles.size(); ++k) {
          const double need = kap * std::pow(double(fam.triangles[k].length()), 2.0 - pl->alpha);
          min_ratio = std::min(min_ratio, contours::removal_cost(model, fam, k) / need);
        }
    }
    const double count = std::ldexp(1.0, static_cast<int>(n));
    Point p;
    p.scalars["configurations"] = exact_value(count);
    p.scalars["round_trip_failures"] = exact_value(double(failures));
    p.scalars["distinct_families"] = exact_value(double(families.size()));
    p.scalars["max_triangles"] = exact_value(double(most));
    p.scalars["mean_triangles"] = exact_value(double(total) / count);
    p.scalars["configs_with_close_triangles"] = exact_value(double(violations));
    if (bound) p.scalars["min_removal_ratio"] = exact_value(min_ratio);
    if (job.beta > std::log(3.0) / 2.0) p.scalars["peierls_bound"] = exact_value(contours::peierls_entropy_bound(job.beta));
    return p;
  });
}

std::vector<Point> run_landau(const ExperimentConfig& c) {
  require_dimension(c, 1, "landau");
  const double alpha = power_alpha(c, "landau");
  std::vector<Point> points;
  for (long L : c.lengths) {
    Point p;
    p.L = L;
    p.scalars["excess_energy"] = exact_value(excess_energy(Volume::line(L), c.coupling));
    points.push_back(p);
  }
  const PowerFit fit = contours::landau_fit(alpha, c.lengths);
  Point s;
  s.scalars["exponent"] = exact_value(fit.exponent);
  s.scalars["amplitude"] = exact_value(fit.amplitude);
  s.scalars["offset"] = exact_value(fit.offset);
  s.scalars["relative_residual"] = exact_value(fit.relative_residual);
  s.scalars["expected_exponent"] = exact_value(2.0 - alpha);
  points.push_back(s);
  return points;
}

std::vector<Point> run_interface(const ExperimentConfig& c) {
  require_dimension(c, 1, "interface");
  if (c.interval) throw ConfigError("model.interval", "interface needs a symmetric volume; use L");
  return fan_out(c, [&](const Job& job, std::size_t, std::size_t) {
    const Volume vol = Volume::line(job.L);
    const auto law = exact::interface_distribution(vol, params_for(c, job.beta), boundary_for(c));
    Point p;
    double mass = 0.0, asym = 0.0;
    const std::size_t m = law.probabilities.size();
    for (std::size_t j = 0; j < m; ++j) {
      p.scalars[indexed("p", j)] = exact_value(law.probabilities[j]);
      mass += law.probabilities[j];
      asym = std::max(asym, std::abs(law.probabilities[j] - law.probabilities[m - 1 - j]));
    }
    p.scalars["total_mass"] = exact_value(mass);
    p.scalars["symmetry_residual"] = exact_value(asym);
    p.detail["theta"] = law.grid;
    return p;
  });
}

std::vector<Point> run_probe(const ExperimentConfig& c) {
  const ProbeKind kind = *c.probe;
  const auto& g = c.geometry;
  switch (kind) {
    case ProbeKind::Decimation:
    case ProbeKind::G:
    case ProbeKind::Wetting: {
      require_dimension(c, 1, probe_name(kind));
      const double alpha = power_alpha(c, probe_name(kind));
      return fan_out(c, [&](const Job& job, std::size_t i, std::size_t workers) {
        ProbeReport r;
        const auto mc = mcmc_for(c, i, workers);
        if (kind == ProbeKind::Decimation)
          r = probes::decimation_probe(alpha, job.beta, {job.L, g.N, g.alternating_sign}, c.method, mc);
        else if (kind == ProbeKind::G)
          r = probes::g_probe(alpha, job.beta, {job.L, g.N ? g.N : 16, g.n ? g.n : 20}, c.method, mc);
        else
          r = probes::wetting_probe(alpha, job.beta, {g.N ? g.N : 8, job.L, g.window}, c.method, mc);
        Point p;
        add_report(p, r);
        return p;
      });
    }
    case ProbeKind::Shift: {
      const double alpha = power_alpha(c, "shift");
      const auto e = probes::dobrushin_shift_energy(alpha, c.lengths);
      std::vector<Point> points;
      for (std::size_t i = 0; i < e.lengths.size(); ++i) {
        Point p;
        p.L = e.lengths[i];
        p.scalars["shift_bound"] = exact_value(e.values[i]);
        points.push_back(p);
      }
      Point s;
      s.scalars["exponent"] = exact_value(e.fit.exponent);
      s.scalars["expected_exponent"] = exact_value(3.0 - alpha);
      s.scalars["relative_residual"] = exact_value(e.fit.relative_residual);
      points.push_back(s);
      return points;
    }
    case ProbeKind::GsStep: {
      const double alpha = power_alpha(c, "gs-step");
      std::vector<Point> points;
      std::optional<probes::StepEnergy> prev;
      bool converged = true;
      for (long R : c.lengths) {
        const auto e = probes::gs_step_energy(alpha, R);
        Point p;
        p.L = R;
        p.scalars["value"] = exact_value(e.value);
        p.scalars["tail_bound"] = exact_value(e.tail_bound);
        p.scalars["limit"] = exact_value(e.limit);
        p.scalars["reflection_residual"] = exact_value(e.reflection_residual);
        p.scalars["half_line_term"] = exact_value(e.half_line_term);
        if (prev) converged = converged && std::abs(e.value - prev->value) <= prev->tail_bound;
        prev = e;
        points.push_back(p);
      }
      Point s;
      s.scalars["verdict.converges_under_doubling"] = exact_value(converged ? 1.0 : 0.0);
      points.push_back(s);
      return points;
    }
    case ProbeKind::Percus: {
      require_dimension(c, 2, "percus");
      std::vector<Point> points;
      for (long L : c.lengths) {
        const auto t = probes::percus_transform(c.coupling, Volume::box(L));
        Point p;
        p.L = L;
        p.scalars["identity_cases_direct"] = exact_value(t.identity_cases_direct);
        p.scalars["identity_cases_cross"] = exact_value(t.identity_cases_cross);
        p.scalars["min_pair_coupling"] = exact_value(t.min_pair_coupling);
        p.scalars["verdict.couplings_nonnegative"] = exact_value(t.couplings_nonnegative ? 1.0 : 0.0);
        p.scalars["terms"] = exact_value(double(t.terms.size()));
        if (t.hamiltonian_deviation) p.scalars["hamiltonian_deviation"] = exact_value(*t.hamiltonian_deviation);
        points.push_back(p);
      }
      return points;
    }
    case ProbeKind::Rigidity:
      require_dimension(c, 2, "rigidity");
      return fan_out(c, [&](const Job& job, std::size_t i, std::size_t workers) {
        Point p;
        add_report(p, probes::rigidity_check(c.coupling, job.beta, job.L, c.method, mcmc_for(c, i, workers)));
        return p;
      });
  }
  return {};
}

json measurement_json(const Measurement& m) {
  json j{{"value", m.value}, {"method", method_name(m.method)}};
  if (m.method == Method::Mcmc) j["std_error"] = m.std_error;
  return j;
}

}  // namespace

std::string tool_version() { return LRISING_VERSION; }

json RunResult::record(bool with_clock) const {
  json pts = json::array();
  for (const auto& p : points) {
    json j;
    if (p.beta) j["beta"] = *p.beta;
    if (p.L) j["L"] = *p.L;
    j["scalars"] = json::object();
    for (const auto& [k, m] : p.scalars) j["scalars"][k] = measurement_json(m);
    if (!p.detail.empty()) j["detail"] = p.detail;
    pts.push_back(j);
  }
  json r{{"schema", kSchemaVersion}, {"tool", "lrising"},          {"tool_version", tool_version()},
         {"command", config.name()}, {"config", to_document(config)}, {"seed", config.seed},
         {"ok", ok},                 {"messages", messages},          {"points", pts}};
  if (with_clock) r["wall_clock_seconds"] = wall_clock_seconds;
  return r;
}

std::string RunResult::record_line(bool with_clock) const { return canonical_json(record(with_clock)); }

std::string RunResult::csv() const {
  std::ostringstream out;
  out << "beta,L,quantity,value,std_error,method\n";
  for (const auto& p : points)
    for (const auto& [k, m] : p.scalars) {
      out << (p.beta ? format_real(*p.beta) : "") << ',' << (p.L ? std::to_string(*p.L) : "") << ',' << k << ','
          << format_real(m.value) << ',' << format_real(m.std_error) << ',' << method_name(m.method) << '\n';
    }
  return out.str();
}

RunResult run(const ExperimentConfig& config) {
  RunResult r;
  r.config = config;
  switch (config.command) {
    case Command::Enumerate:
      r.points = run_enumerate(config);
      break;
    case Command::Sample:
      r.points = run_sample(config);
      break;
    case Command::Contours:
      r.points = run_contours(config);
      for (const auto& p : r.points)
        if (p.scalars.at("round_trip_failures").value != 0.0) {
          r.ok = false;
          r.messages.push_back("decomposition does not round-trip at L=" + std::to_string(*p.L));
        }
      break;
    case Command::Landau:
      r.points = run_landau(config);
      break;
    case Command::Interface:
      r.points = run_interface(config);
      break;
    case Command::Probe:
      r.points = run_probe(config);
      break;
  }
  return r;
}

RunResult decompose(const ExperimentConfig& config, const std::string& text) {
  const auto parsed = contours::read_configuration(text);
  ExperimentConfig c = config;
  c.command = Command::Contours;
  c.dimension = 1;
  c.interval = std::make_pair(parsed.volume.lo(), parsed.volume.hi());
  c.lengths = {parsed.volume.width()};
  if (!parsed.bc_name.empty()) c.boundary.type = parsed.bc_name;
  static const std::set<std::string> kinds{"plus", "minus", "dobrushin"};
  if (!kinds.count(c.boundary.type))
    throw ConfigError("boundary.type", "decomposition needs bc=plus, minus or dobrushin, got '" + c.boundary.type + "'");
  const BoundaryCondition bc = boundary_for(c);

  const auto fam = contours::triangles(parsed.volume, parsed.config, bc);
  const std::string family_text = contours::write_family(fam);
  const auto reread = contours::read_family(family_text);
  const Configuration back = contours::reconstruct(reread, bc, parsed.volume);
  const std::string back_text = contours::write_configuration(parsed.volume, back, c.boundary.type);
  const std::string original = contours::write_configuration(parsed.volume, parsed.config, c.boundary.type);

  RunResult r;
  r.config = c;
  Point p;
  p.detail["volume"] = parsed.volume.describe();
  p.scalars["triangles"] = exact_value(double(fam.triangles.size()));
  p.scalars["round_trip"] = exact_value(back == parsed.config && reread == fam ? 1.0 : 0.0);
  if (fam.interface) p.scalars["interface_position"] = exact_value(fam.interface->position());
  p.detail["family"] = family_text;
  p.detail["configuration"] = back_text;
  r.points.push_back(p);
  r.ok = back_text == original && reread == fam;
  if (!r.ok) r.messages.push_back("decomposition does not round-trip");
  return r;
}

}  // namespace lrising::cli
