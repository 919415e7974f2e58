#include <algorithm>
#include <cmath>
#include <limits>

#include "lrising/errors.hpp"
#include "lrising/probes.hpp"

namespace lrising::probes {
namespace {

const AnisotropicAxes& require_axes(const CouplingSpec& spec) {
  const auto* axes = spec.get_if<AnisotropicAxes>();
  require(axes != nullptr, "duplicate-variable construction needs axis-only (anisotropic) couplings");
  return *axes;
}

GibbsModel chain_model(const AnisotropicAxes& axes, long L, double beta) {
  return GibbsModel(Volume::interval(-L, L), ModelParams{beta, CouplingSpec(PowerLaw{axes.J_h, axes.alpha_h, {}}), {}},
                    BoundaryCondition::plus());
}

}  // namespace

PercusTransform percus_transform(const CouplingSpec& anisotropic, const Volume& box) {
  const auto& axes = require_axes(anisotropic);
  require(box.dimension() == 2 && box.lo() == -box.hi(), "duplicate construction needs a centred 2d box");
  const long L = box.hi();
  const GibbsModel plane(box, ModelParams{1.0, anisotropic, {}}, BoundaryCondition::dobrushin_2d(0));
  const GibbsModel chain = chain_model(axes, L, 1.0);

  PercusTransform out;
  out.box = box;
  for (std::size_t i = 0; i < box.size(); ++i)
    if (box.site(i).x2 >= 0) out.sites.push_back(i);
  const std::size_t nv = out.sites.size();
  out.s_field.assign(nv, 0.0);
  out.t_field.assign(nv, 0.0);
  auto mirror = [&](std::size_t i) {
    const Site s = box.site(i);
    return box.index_of(Site{s.x1, -s.x2});
  };
  auto upper = [&](std::size_t a) { return box.site(out.sites[a]).x2 > 0; };
  auto chain_index = [&](std::size_t a) { return static_cast<std::size_t>(box.site(out.sites[a]).x1 + L); };
  auto emit = [&](std::size_t a, std::size_t b, DuplicateKind k, double c) {
    if (c != 0.0) out.terms.push_back(DuplicateTerm{a, b, k, c});
  };

  for (std::size_t a = 0; a < nv; ++a) {
    const std::size_t u = out.sites[a];
    const double scale = std::max(1.0, std::abs(plane.boundary_field(u)));
    if (upper(a)) {
      require(std::abs(plane.boundary_field(u) + plane.boundary_field(mirror(u))) <= 1e-12 * scale,
              "boundary fields are not antisymmetric across the x2 = 0 axis");
      out.t_field[a] = plane.boundary_field(u);
      const double self = plane.coupling(u, mirror(u));
      emit(a, a, DuplicateKind::SS, self / 2.0);
      out.constant -= self;
    } else {
      const double primed = chain.boundary_field(chain_index(a));
      require(std::abs(plane.boundary_field(u) - primed) <= 1e-12 * scale,
              "row-0 boundary field differs from the decoupled chain");
      out.s_field[a] = plane.boundary_field(u);
    }
    for (std::size_t b = a + 1; b < nv; ++b) {
      const std::size_t v = out.sites[b];
      const double j = plane.coupling(u, v);
      if (upper(a) && upper(b)) {
        const double jm = plane.coupling(u, mirror(v));
        emit(a, b, DuplicateKind::SS, (j + jm) / 2.0);
        emit(a, b, DuplicateKind::TT, (j - jm) / 2.0);
      } else if (upper(a) != upper(b)) {
        const std::size_t up = upper(a) ? a : b, line = upper(a) ? b : a;
        emit(up, line, DuplicateKind::SS, j / 2.0);
        emit(up, line, DuplicateKind::ST, j / 2.0);
      } else {
        require(std::abs(j - chain.coupling(chain_index(a), chain_index(b))) <= 1e-15 * std::max(1.0, j),
                "row-0 coupling differs from the decoupled chain");
        emit(a, b, DuplicateKind::SS, j / 2.0);
        emit(a, b, DuplicateKind::TT, j / 2.0);
      }
    }
  }

  out.min_pair_coupling = std::numeric_limits<double>::infinity();
  for (const auto& t : out.terms) out.min_pair_coupling = std::min(out.min_pair_coupling, t.coefficient);
  if (out.terms.empty()) out.min_pair_coupling = 0.0;
  out.couplings_nonnegative = out.min_pair_coupling >= 0.0;

  for (int code = 0; code < 16; ++code) {
    auto bit = [&](int k) { return ((code >> k) & 1) ? 1 : -1; };
    const int sx = bit(0), sy = bit(1), sxb = bit(2), syb = bit(3);
    const int s_x = sx + sxb, t_x = sx - sxb, s_y = sy + syb, t_y = sy - syb;
    if (2 * (sx * sy + sxb * syb) == s_x * s_y + t_x * t_y) ++out.identity_cases_direct;
    if (2 * (sx * syb + sxb * sy) == s_x * s_y - t_x * t_y) ++out.identity_cases_cross;
  }

  const std::size_t joint = box.size() + static_cast<std::size_t>(2 * L + 1);
  if (joint <= exact::kMaxEnumeratedSites) {
    const std::size_t n = box.size(), m = static_cast<std::size_t>(2 * L + 1);
    std::vector<Spin> sigma(n), primed(m);
    std::vector<double> s(nv), t(nv);
    double worst = 0.0;
    for (std::size_t code = 0; code < (std::size_t{1} << joint); ++code) {
      for (std::size_t i = 0; i < n; ++i) sigma[i] = ((code >> i) & 1U) ? 1 : -1;
      for (std::size_t i = 0; i < m; ++i) primed[i] = ((code >> (n + i)) & 1U) ? 1 : -1;
      for (std::size_t a = 0; a < nv; ++a) {
        const std::size_t u = out.sites[a];
        const int other = upper(a) ? sigma[mirror(u)] : primed[chain_index(a)];
        s[a] = sigma[u] + other;
        t[a] = sigma[u] - other;
      }
      double minus_h = out.constant;
      for (std::size_t a = 0; a < nv; ++a) minus_h += out.s_field[a] * s[a] + out.t_field[a] * t[a];
      for (const auto& term : out.terms) {
        const double x = term.kind == DuplicateKind::TT ? t[term.u] : s[term.u];
        const double y = term.kind == DuplicateKind::SS ? s[term.v] : t[term.v];
        minus_h += term.coefficient * x * y;
      }
      const double original = plane.energy(sigma) + chain.energy(primed);
      worst = std::max(worst, std::abs(-minus_h - original));
    }
    out.hamiltonian_deviation = worst;
  }
  return out;
}

ProbeReport rigidity_check(const CouplingSpec& anisotropic, double beta, long L, Method method,
                           const McmcSettings& mcmc) {
  const auto& axes = require_axes(anisotropic);
  require(axes.alpha_h > 1.0 && axes.alpha_h <= 2.0, "rigidity check needs 1 < alpha_h <= 2");
  require(L >= 1, "rigidity check needs L >= 1");
  const Volume box = Volume::box(L);
  const GibbsModel plane(box, ModelParams{beta, anisotropic, {}}, BoundaryCondition::dobrushin_2d(0));
  const GibbsModel chain = chain_model(axes, L, beta);

  std::vector<Observable> obs;
  for (long row : {0L, 1L, -1L})
    for (long x = -L; x <= L; ++x) obs.push_back(Observable::spin(box.index_of(Site{x, row})));
  const std::size_t w = static_cast<std::size_t>(2 * L + 1);

  std::vector<Measurement> values;
  std::vector<std::vector<mcmc::Estimate>> per_replica;
  if (method == Method::Exact) {
    values = measure(plane, {}, obs, Method::Exact);
  } else {
    std::vector<Spin> matched(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) matched[i] = box.site(i).x2 >= 0 ? 1 : -1;
    const auto initials = mcmc::mixed_initials(box.size(), mcmc.seed, Configuration(matched));
    // Boundary-matched start first; the others follow in mixed_initials order.
    std::vector<Configuration> ordered{initials.back()};
    ordered.insert(ordered.end(), initials.begin(), initials.end() - 1);
    mcmc::ReplicaPlan plan{mcmc.replicas, mcmc.sweeps, mcmc.burn_in, mcmc.rule, mcmc.seed, mcmc.workers};
    const auto result = mcmc::run_replicas(plane, obs, plan, ordered);
    for (const auto& e : result.merged) values.push_back({e.mean, Method::Mcmc, e.std_error});
    per_replica = result.per_replica;
  }
  std::vector<Observable> chain_obs;
  for (std::size_t i = 0; i < w; ++i) chain_obs.push_back(Observable::spin(i));
  std::vector<Measurement> chain_values = measure(chain, {}, chain_obs, Method::Exact);

  ProbeReport report;
  report.probe = "rigidity";
  report.parameters = {{"alpha_h", axes.alpha_h},
                       {"beta", beta},
                       {"L", double(L)},
                       {"vertical_power_law", std::holds_alternative<VerticalPowerLaw>(axes.vertical) ? 1.0 : 0.0}};
  if (const auto* vp = std::get_if<VerticalPowerLaw>(&axes.vertical)) report.parameters["alpha_v"] = vp->alpha;
  auto& line = report.profiles["line0"];
  auto& up = report.profiles["row_plus1"];
  auto& down = report.profiles["row_minus1"];
  line.assign(values.begin(), values.begin() + static_cast<long>(w));
  up.assign(values.begin() + static_cast<long>(w), values.begin() + static_cast<long>(2 * w));
  down.assign(values.begin() + static_cast<long>(2 * w), values.end());
  report.profiles["chain"] = chain_values;

  const bool mc = method == Method::Mcmc;
  auto margin = [&](const Measurement& m) { return mc ? 4.0 * m.std_error : 0.0; };
  bool inequality = true, positive = true, asymmetric = true;
  double min_gap = std::numeric_limits<double>::infinity(), min_line = min_gap;
  for (std::size_t i = 0; i < w; ++i) {
    const double gap = line[i].value - chain_values[i].value;
    min_gap = std::min(min_gap, gap);
    min_line = std::min(min_line, line[i].value);
    if (gap < -(mc ? 4.0 * line[i].std_error : 1e-12)) inequality = false;
    if (!(line[i].value > margin(line[i]))) positive = false;
    if (!(up[i].value > margin(up[i]) && down[i].value < -margin(down[i]))) asymmetric = false;
  }
  report.set("min_line_minus_chain", min_gap, method);
  report.set("min_line0", min_line, method);
  report.verdicts["inequality"] = inequality;
  report.verdicts["line0_positive"] = positive;
  report.verdicts["cross_interface_asymmetry"] = asymmetric;

  if (mc) {
    bool agree = true;
    for (const auto& rep : per_replica) {
      double l = 0, u = 0, d = 0;
      for (std::size_t i = 0; i < w; ++i) {
        l += rep[i].mean;
        u += rep[w + i].mean;
        d += rep[2 * w + i].mean;
      }
      if (!(l > 0 && u > 0 && d < 0)) agree = false;
    }
    report.verdicts["replicas_agree"] = agree;
    report.parameters["replicas"] = double(per_replica.size());
    if (!agree) report.warnings.push_back("replicas disagree on the sign pattern");
  }
  return report;
}

}  // namespace lrising::probes
