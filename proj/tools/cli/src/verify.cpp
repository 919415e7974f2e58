#include "lrising_cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "lrising/contours.hpp"
#include "lrising/exact.hpp"
#include "lrising/mcmc.hpp"
#include "lrising/probes.hpp"
#include "lrising/rng.hpp"
#include "lrising_cli/runner.hpp"

namespace lrising::cli {
namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::vector<BoundaryCondition> four_boundaries() {
  return {BoundaryCondition::plus(), BoundaryCondition::minus(), BoundaryCondition::free(),
          BoundaryCondition::dobrushin_1d(0)};
}

// Kernel normalization and DLR consistency on small chains.
Outcome check_specification(const VerifyOptions& o) {
  const long max_sites = o.quick ? 7 : 11;
  double worst_norm = 0.0, worst_dlr = 0.0;
  for (long n = 1; n <= max_sites; ++n) {
    const Volume vol = Volume::interval(-(n / 2), n - 1 - n / 2);
    for (double alpha : {1.5, 1.8})
      for (double beta : {0.0, 1.0, 2.0})
        for (const auto& bc : four_boundaries()) {
          const ModelParams params{beta, PowerLaw{1.0, alpha, {}}, {}};
          const GibbsModel model(vol, params, bc);
          const double log_z = exact::log_partition(model);
          double total = 0.0;
          std::vector<Spin> s(static_cast<std::size_t>(n));
          for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            for (long i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (m >> i & 1U) ? -1 : 1;
            total += std::exp(-beta * model.energy(s) - log_z);
          }
          worst_norm = std::max(worst_norm, std::abs(total - 1.0));
          if (n >= 3) {
            const Volume sub = Volume::interval(vol.lo() + 1, vol.hi() - 1);
            worst_dlr = std::max(worst_dlr, exact::dlr_consistency_check(vol, sub, params, bc));
          }
        }
  }
  return {worst_norm <= 1e-12 && worst_dlr <= 1e-10,
          fmt("max |sum - 1| = %.2e, max DLR deviation = %.2e", worst_norm, worst_dlr)};
}

Outcome check_landau(const VerifyOptions&) {
  const std::vector<long> lengths{8, 16, 32, 64, 128};
  Outcome out;
  std::ostringstream d;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const double p = contours::landau_exponent_fit(alpha, lengths);
    out.passed = out.passed && std::abs(p - (2.0 - alpha)) <= 0.05;
    d << fmt("alpha=%.1f: %.4f  ", alpha, p);
  }
  out.detail = d.str();
  return out;
}

Outcome check_triangles(const VerifyOptions& o) {
  const long max_sites = o.quick ? 9 : 11;
  std::size_t failures = 0, checked = 0, collisions = 0;
  for (long n = 1; n <= max_sites; ++n) {
    const Volume vol = Volume::interval(0, n - 1);
    for (const auto& bc : {BoundaryCondition::plus(), BoundaryCondition::minus(), BoundaryCondition::dobrushin_1d(n / 2)}) {
      std::set<std::string> seen;
      std::vector<Spin> s(static_cast<std::size_t>(n));
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        for (long i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (m >> i & 1U) ? -1 : 1;
        const auto fam = contours::triangles(vol, s, bc);
        const auto back = contours::reconstruct(fam, bc, vol);
        if (!std::equal(s.begin(), s.end(), back.spins().begin())) ++failures;
        if (!seen.insert(contours::write_family(fam)).second) ++collisions;
        ++checked;
      }
    }
  }
  std::size_t unseparated = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto fam = contours::random_separated_family(derive_seed(o.seed, k), 6, 8);
    contours::TriangleFamily flat;
    for (const auto& c : fam.contours)
      for (const auto& t : c.members) flat.triangles.push_back(t);
    if (!contours::is_separated(contours::group_contours(flat))) ++unseparated;
  }
  return {failures == 0 && collisions == 0 && unseparated == 0,
          std::to_string(checked) + " configurations, " + std::to_string(failures) + " round-trip failures, " +
              std::to_string(collisions) + " collisions, " + std::to_string(unseparated) + "/100 unseparated"};
}

Outcome check_peierls(const VerifyOptions&) {
  double worst = 0.0;
  for (double beta : {1.5, 2.0, 3.0})
    worst = std::max(worst, std::abs(contours::peierls_entropy_bound(beta) - contours::peierls_series(beta, 4000)));
  const double at2 = contours::peierls_entropy_bound(2.0);
  return {worst <= 1e-10 && std::abs(at2 - 0.061522) <= 1e-6,
          fmt("max |closed - series| = %.2e, value at beta=2: %.7f", worst, at2)};
}

Outcome check_sampler(const VerifyOptions& o) {
  const std::size_t settings = o.quick ? 2 : 10;
  Outcome out;
  double worst_z = 0.0, worst_db = 0.0;
  CounterRng pick(o.seed);
  for (std::size_t k = 0; k < settings; ++k) {
    const long n = 3 + static_cast<long>(pick.below(5));
    const double alpha = 1.2 + 0.7 * pick.uniform();
    const double beta = 0.2 + 0.8 * pick.uniform();
    const auto bcs = four_boundaries();
    const auto& bc = bcs[pick.below(bcs.size())];
    const Volume vol = Volume::interval(0, n - 1);
    const GibbsModel model(vol, ModelParams{beta, PowerLaw{1.0, alpha, {}}, {}}, bc);
    const std::vector<Observable> obs{Observable::spin(0), Observable::pair(0, 1)};
    const auto exact_values = exact::expectations(model, obs);
    mcmc::ReplicaPlan plan;
    plan.replicas = 4;
    plan.sweeps = o.quick ? 12000 : 25000;
    plan.burn_in = 500;
    plan.master_seed = derive_seed(o.seed, 1000 + k);
    plan.workers = o.workers;
    const auto res = mcmc::run_replicas(model, obs, plan, mcmc::mixed_initials(vol.size(), plan.master_seed));
    for (std::size_t j = 0; j < obs.size(); ++j) {
      const auto& e = res.merged[j];
      const double z = std::abs(e.mean - exact_values[j]) / std::max(e.std_error, 1e-12);
      worst_z = std::max(worst_z, z);
      out.passed = out.passed && z <= 4.0 && e.std_error < 0.01;
    }
    // Detailed balance at a random state and site, both rules.
    Configuration start = Configuration::constant(vol.size(), 1);
    for (std::size_t i = 0; i < vol.size(); ++i) start[i] = pick.below(2) ? 1 : -1;
    const std::size_t site = pick.below(vol.size());
    Configuration moved = start;
    moved[site] = static_cast<Spin>(-moved[site]);
    const mcmc::Sampler a(model, 1, start), b(model, 1, moved);
    const double ratio = std::exp(-beta * (model.energy(moved.spins()) - model.energy(start.spins())));
    for (auto rule : {mcmc::Rule::HeatBath, mcmc::Rule::Metropolis}) {
      const double lhs = a.flip_probability(site, rule);
      const double rhs = b.flip_probability(site, rule) * ratio;
      worst_db = std::max(worst_db, std::abs(lhs - rhs));
    }
  }
  out.passed = out.passed && worst_db <= 1e-12;
  out.detail = fmt("max |z| = %.2f, detailed balance residual = %.1e", worst_z, worst_db);
  return out;
}

Outcome check_decimation(const VerifyOptions&) {
  const auto d0 = probes::decimation_probe(1.5, 0.0).value("gap");
  const auto d2 = probes::decimation_probe(1.5, 2.0).value("gap");
  const auto d4 = probes::decimation_probe(1.5, 4.0).value("gap");
  return {d0 == 0.0 && d2 > 0.0 && d4 > d2, fmt("gap(0) = %.1e, gap(2) = %.9f", d0, d2) + fmt(", gap(4) = %.9f", d4)};
}

Outcome check_one_sided(const VerifyOptions&) {
  const auto g4 = probes::g_probe(1.5, 4.0);
  const auto g0 = probes::g_probe(1.5, 0.0);
  const auto w0 = probes::wetting_probe(1.6, 0.0);
  const auto w4 = probes::wetting_probe(1.6, 4.0);
  // Frozen sites sit at -1 in the profile; the free part must vanish.
  const double w0max = std::max({std::abs(w0.value("window_left_min")), std::abs(w0.value("window_right_min")),
                                 std::abs(w0.value("m_plus"))});
  const bool ok = g4.value("gap") > 0.0 && g0.value("gap") == 0.0 && w0max == 0.0 && w4.verdict("window_below_far");
  return {ok, fmt("g gap(4) = %.3e, wetting window min(4) = %.4f", g4.value("gap"), w4.value("window_min"))};
}

Outcome check_interface(const VerifyOptions&) {
  const Volume vol = Volume::line(6);
  const auto law = exact::interface_distribution(vol, ModelParams{3.0, PowerLaw{1.0, 1.5, {}}, {}});
  double asym = 0.0, mass = 0.0;
  const std::size_t m = law.probabilities.size();
  for (std::size_t j = 0; j < m; ++j) {
    mass += law.probabilities[j];
    asym = std::max(asym, std::abs(std::log(law.probabilities[j]) - std::log(law.probabilities[m - 1 - j])));
  }
  const auto flat = exact::interface_distribution(vol, ModelParams{0.0, PowerLaw{1.0, 1.5, {}}, {}});
  double flat_mass = 0.0;
  for (double p : flat.probabilities) flat_mass += p;
  return {asym <= 1e-12 && std::abs(mass - 1.0) <= 1e-12 && std::abs(flat_mass - 1.0) <= 1e-12,
          fmt("log-symmetry residual = %.1e, mass - 1 = %.1e", asym, mass - 1.0)};
}

Outcome check_shift(const VerifyOptions&) {
  const std::vector<long> lengths{64, 128, 256, 512, 1024, 2048};
  const double p25 = probes::dobrushin_shift_energy(2.5, lengths).fit.exponent;
  const double p35 = probes::dobrushin_shift_energy(3.5, lengths).fit.exponent;
  const auto a = probes::gs_step_energy(2.5, 128), b = probes::gs_step_energy(2.5, 256);
  const bool ok = std::abs(p25 - 0.5) <= 0.1 && std::abs(p35 + 0.5) <= 0.1 &&
                  std::abs(b.value - a.value) <= a.tail_bound && b.reflection_residual <= 1e-10;
  return {ok, fmt("exponents %.4f, %.4f", p25, p35) + fmt("; step change %.3f vs bound %.3f", b.value - a.value, a.tail_bound)};
}

Outcome check_percus(const VerifyOptions&) {
  const CouplingSpec spec = AnisotropicAxes{1.0, 1.5, VerticalNearestNeighbor{1.0}};
  const auto t3 = probes::percus_transform(spec, Volume::box(1));
  const auto t5 = probes::percus_transform(spec, Volume::box(2));
  const auto r = probes::rigidity_check(spec, 3.0, 1);
  const bool ok = t3.identity_cases_direct == 16 && t3.identity_cases_cross == 16 && t5.couplings_nonnegative &&
                  t3.hamiltonian_deviation && *t3.hamiltonian_deviation <= 1e-9 && r.verdict("inequality") &&
                  r.verdict("line0_positive") && r.verdict("cross_interface_asymmetry");
  return {ok, fmt("3x3 deviation = %.1e, 5x5 min coupling = %.4f", t3.hamiltonian_deviation.value_or(NAN),
                  t5.min_pair_coupling)};
}

Outcome check_reproducible(const VerifyOptions& o) {
  ExperimentConfig c = parse_config(default_document(Command::Sample));
  c.lengths = {3};
  c.sampler = {4, 2000, 200, mcmc::Rule::HeatBath};
  c.seed = o.seed;
  c.workers = o.workers;
  const std::string first = run(c).record_line(false);
  const std::string second = run(c).record_line(false);
  ExperimentConfig d = parse_config(default_document(Command::Probe, ProbeKind::Decimation));
  const bool probes_equal = run(d).record_line(false) == run(d).record_line(false);
  return {first == second && probes_equal, first == second ? "records byte-identical" : "records differ"};
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  const std::vector<std::pair<std::string, std::function<Outcome(const VerifyOptions&)>>> checks{
      {"specification normalization and DLR", check_specification},
      {"landau exponent", check_landau},
      {"triangle bijection and contour separation", check_triangles},
      {"peierls closed form", check_peierls},
      {"sampler vs enumeration, detailed balance", check_sampler},
      {"decimation gap", check_decimation},
      {"g-measure and wetting", check_one_sided},
      {"interface law", check_interface},
      {"2d shift energetics", check_shift},
      {"duplicate variables and rigidity", check_percus},
      {"reproducible records", check_reproducible},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = fn(options);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_checks(const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  std::size_t failed = 0;
  char buf[128];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-4s  %-44s %7.2fs  ", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.seconds);
    out << buf << c.detail << '\n';
    if (!c.passed) ++failed;
  }
  out << (failed ? std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed"
                 : "all " + std::to_string(checks.size()) + " checks passed")
      << '\n';
  return out.str();
}

}  // namespace lrising::cli
