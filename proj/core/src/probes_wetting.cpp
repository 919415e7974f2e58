#include <algorithm>
#include <cmath>

#include "lrising/contours.hpp"
#include "lrising/errors.hpp"
#include "lrising/numeric.hpp"
#include "lrising/probes.hpp"

namespace lrising::probes {

double past_field(int sign, double alpha, long L, long N, long n, double x) {
  require(sign == 1 || sign == -1, "past_field sign must be +1 or -1");
  require(alpha > 1.0, "past_field needs alpha > 1");
  require(L >= 1 && L < N && n >= 1 && x >= 0.0, "past_field needs 1 <= L < N, n >= 1 and x >= 0");
  double alternating = 0.0;
  for (long k = 1; k <= L; ++k) alternating += ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(double(k) + x, -alpha);
  double annulus = 0.0;
  if (N - L < 4096) {
    for (long k = N; k > L; --k) annulus += std::pow(double(k) + x, -alpha);
  } else {
    annulus = hurwitz_zeta(alpha, double(L + 1) + x) - hurwitz_zeta(alpha, double(N + 1) + x);
  }
  const double far = hurwitz_zeta(alpha, double(N + 1) + x);
  const double right = hurwitz_zeta(alpha, double(n) + x);
  return alternating + sign * annulus + far + right;
}

ProbeReport g_probe(double alpha, double beta, ChainGeometry g, Method method, const McmcSettings& mcmc) {
  require(alpha > 1.0 && alpha < 2.0, "g probe needs 1 < alpha < 2");
  require(g.L >= 1 && g.N > g.L && g.n >= 1, "g probe needs 1 <= L < N and n >= 1");
  const Volume volume = Volume::interval(0, g.n);
  const ModelParams params{beta, CouplingSpec(PowerLaw{1.0, alpha, {}}), {}};
  const Observable m0 = Observable::spin(0);

  ProbeReport report;
  report.probe = "g";
  report.parameters = {{"alpha", alpha}, {"beta", beta}, {"L", double(g.L)}, {"N", double(g.N)}, {"n", double(g.n)}};
  Measurement m[2];
  for (int side = 0; side < 2; ++side) {
    const int s = side == 0 ? 1 : -1;
    const GibbsModel model(volume, params, BoundaryCondition::left_neighborhood(s, g.N, g.L));
    m[side] = measure(model, {}, std::span(&m0, 1), method, mcmc)[0];
    auto& profile = report.profiles[side == 0 ? "past_field_plus" : "past_field_minus"];
    for (long x = 0; x <= g.n; ++x) profile.push_back({past_field(s, alpha, g.L, g.N, g.n, double(x)), Method::Exact});
  }
  report.set("M_plus", m[0]);
  report.set("M_minus", m[1]);
  const double se = std::hypot(m[0].std_error, m[1].std_error);
  const double gap = m[0].value - m[1].value;
  report.set("gap", gap, method, se);
  report.verdicts["gap_positive"] = gap > (method == Method::Mcmc ? 4.0 * se : 0.0);
  if (method == Method::Mcmc && gap < 4.0 * se) report.warnings.push_back("gap below 4 combined standard errors");
  return report;
}

ProbeReport wetting_probe(double alpha, double beta, WettingGeometry g, Method method, const McmcSettings& mcmc) {
  require(alpha > contours::alpha_star() && alpha < 2.0, "wetting probe needs alpha_* < alpha < 2");
  require(g.N >= 1 && g.L >= 1, "wetting probe needs N, L >= 1");
  const long w = g.window > 0 ? g.window : std::max(1L, g.L / 4);
  const long R = 2 * g.L;
  require(w <= R, "window longer than the free margin");
  const Volume volume = Volume::interval(-g.N - R, R - 1);
  const ModelParams params{beta, CouplingSpec(PowerLaw{1.0, alpha, {}}), {}};
  const GibbsModel model(volume, params, BoundaryCondition::plus());

  exact::FrozenSites frozen;
  for (long x = -g.N; x <= -1; ++x) frozen.emplace_back(volume.index_of(Site{x, 0}), Spin{-1});
  std::vector<Observable> spins;
  for (std::size_t i = 0; i < volume.size(); ++i) spins.push_back(Observable::spin(i));
  const auto profile = measure(model, frozen, spins, method, mcmc);
  const Observable m0 = Observable::spin(volume.index_of(Site{0, 0}));
  const auto m_plus = measure(model, {}, std::span(&m0, 1), method, mcmc)[0];

  ProbeReport report;
  report.probe = "wetting";
  report.parameters = {{"alpha", alpha}, {"beta", beta}, {"N", double(g.N)}, {"L", double(g.L)},
                       {"window", double(w)}, {"volume_lo", double(volume.lo())}, {"volume_hi", double(volume.hi())}};
  report.profiles["conditional"] = profile;
  auto at = [&](long x) { return profile[volume.index_of(Site{x, 0})]; };

  auto window_min = [&](long lo, long hi) {
    Measurement best = at(lo);
    for (long x = lo + 1; x <= hi; ++x)
      if (at(x).value < best.value) best = at(x);
    return best;
  };
  const Measurement left = window_min(-g.N - w, -g.N - 1);
  const Measurement right = window_min(0, w - 1);
  const Measurement worst = left.value <= right.value ? left : right;
  report.set("window_left_min", left);
  report.set("window_right_min", right);
  report.set("window_min", worst);
  report.set("m_plus", m_plus);
  report.verdicts["window_negative"] = worst.value < (method == Method::Mcmc ? -4.0 * worst.std_error : 0.0);

  // Far sites: the two outermost free sites of the volume.
  const double far = std::min(at(volume.lo()).value, at(volume.hi()).value);
  const double slack = method == Method::Mcmc ? 4.0 * std::max(left.std_error, right.std_error) : 1e-12;
  report.verdicts["window_below_far"] = std::max(left.value, right.value) <= far + slack;
  if (method == Method::Mcmc && !report.verdicts["window_negative"])
    report.warnings.push_back("window value not 4 standard errors below zero");
  return report;
}

}  // namespace lrising::probes
