#include <cmath>

#include "lrising/errors.hpp"
#include "lrising/probes.hpp"

namespace lrising::probes {

std::vector<Measurement> measure(const GibbsModel& model, const exact::FrozenSites& frozen,
                                 std::span<const Observable> observables, Method method, const McmcSettings& mcmc,
                                 const std::optional<Configuration>& matched_start) {
  std::vector<Measurement> out;
  if (method == Method::Exact) {
    for (double v : exact::expectations(model, observables, frozen)) out.push_back({v, Method::Exact, 0.0});
    return out;
  }
  require(mcmc.replicas >= 1 && mcmc.sweeps > mcmc.burn_in, "invalid sampler settings");
  const auto initials = mcmc::mixed_initials(model.size(), mcmc.seed, matched_start);
  mcmc::ReplicaPlan plan{mcmc.replicas, mcmc.sweeps, mcmc.burn_in, mcmc.rule, mcmc.seed, mcmc.workers};
  const auto result = mcmc::run_replicas(model, observables, plan, initials, frozen);
  for (const auto& e : result.merged) out.push_back({e.mean, Method::Mcmc, e.std_error});
  return out;
}

long annulus_size(double alpha, long L, double multiplier) {
  require(alpha > 1.0 && alpha < 2.0, "annulus_size needs 1 < alpha < 2 (alpha = 2 needs log corrections)");
  require(L >= 1 && multiplier > 0.0, "annulus_size needs L >= 1 and a positive multiplier");
  const double n = std::pow(multiplier * static_cast<double>(L), 1.0 / (alpha - 1.0));
  // Guard against pow landing a hair above an exact integer.
  const double r = std::round(n);
  return static_cast<long>(std::abs(n - r) < 1e-9 * r ? r : std::ceil(n));
}

double annulus_bound(double alpha, long L, long N) {
  return 2.0 * static_cast<double>(L) * std::pow(static_cast<double>(N), 1.0 - alpha) / (alpha - 1.0);
}

ProbeReport decimation_probe(double alpha, double beta, DecimationGeometry g, Method method,
                             const McmcSettings& mcmc) {
  require(alpha > 1.0 && alpha < 2.0, "decimation probe needs 1 < alpha < 2");
  require(g.L >= 1, "decimation probe needs L >= 1");
  require(g.alternating_sign == 1 || g.alternating_sign == -1, "alternating sign must be +1 or -1");
  const long N = g.N > 0 ? g.N : annulus_size(alpha, 2 * g.L);
  require(N > 2 * g.L, "pre-image extent N must exceed 2L");

  const Volume volume = Volume::line(N);
  const ModelParams params{beta, CouplingSpec(PowerLaw{1.0, alpha, {}}), {}};
  const std::size_t origin = volume.index_of(Site{0, 0});
  const Observable m0 = Observable::spin(origin);

  ProbeReport report;
  report.probe = "decimation";
  report.parameters = {{"alpha", alpha},
                       {"beta", beta},
                       {"L", double(g.L)},
                       {"N", double(N)},
                       {"alternating_sign", double(g.alternating_sign)}};

  Measurement m[2];
  std::size_t free_count = 0;
  for (int side = 0; side < 2; ++side) {
    const int s = side == 0 ? 1 : -1;
    exact::FrozenSites frozen;
    for (long x = -N; x <= N; ++x) {
      if (x % 2 != 0 || x == 0) continue;
      const long i = x / 2;
      const int spin = std::abs(i) <= g.L ? g.alternating_sign * ((i % 2 == 0) ? 1 : -1) : s;
      frozen.emplace_back(volume.index_of(Site{x, 0}), static_cast<Spin>(spin));
    }
    free_count = volume.size() - frozen.size();
    const GibbsModel model(volume, params, BoundaryCondition::uniform(s));
    m[side] = measure(model, frozen, std::span(&m0, 1), method, mcmc)[0];
  }
  report.parameters["free_sites"] = double(free_count);
  report.set("M_plus", m[0]);
  report.set("M_minus", m[1]);
  const double se = std::hypot(m[0].std_error, m[1].std_error);
  report.set("gap", m[0].value - m[1].value, method, se);
  report.verdicts["gap_positive"] = m[0].value - m[1].value > (method == Method::Mcmc ? 4.0 * se : 0.0);
  if (method == Method::Mcmc && m[0].value - m[1].value < 4.0 * se)
    report.warnings.push_back("gap below 4 combined standard errors");
  return report;
}

}  // namespace lrising::probes
