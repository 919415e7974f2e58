#include "lrising/exact.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include "lrising/contours.hpp"
#include "lrising/errors.hpp"

namespace lrising {

Observable Observable::spin(std::size_t i) {
  return {"spin[" + std::to_string(i) + "]", [i](std::span<const Spin> s) { return double(s[i]); }};
}

Observable Observable::pair(std::size_t i, std::size_t j) {
  return {"pair[" + std::to_string(i) + "," + std::to_string(j) + "]",
          [i, j](std::span<const Spin> s) { return double(s[i] * s[j]); }};
}

Observable Observable::magnetization() {
  return {"magnetization", [](std::span<const Spin> s) {
            long m = 0;
            for (Spin v : s) m += v;
            return s.empty() ? 0.0 : double(m) / double(s.size());
          }};
}

Observable Observable::indicator(std::vector<std::pair<std::size_t, Spin>> pattern) {
  return {"indicator", [pattern = std::move(pattern)](std::span<const Spin> s) {
            for (auto [i, v] : pattern)
              if (s[i] != v) return 0.0;
            return 1.0;
          }};
}

Observable Observable::constant(double value) {
  return {"constant", [value](std::span<const Spin>) { return value; }};
}

namespace exact {
namespace {

constexpr std::size_t kChunkBits = 6;

// Log-domain accumulator: sum = exp(shift) * scaled.
struct Accumulator {
  double shift = -std::numeric_limits<double>::infinity();
  double weight = 0.0;
  std::vector<double> sums;

  explicit Accumulator(std::size_t slots = 0) : sums(slots, 0.0) {}

  void rescale(double new_shift) {
    const double f = std::exp(shift - new_shift);
    weight *= f;
    for (double& v : sums) v *= f;
    shift = new_shift;
  }

  void add(double log_w, std::span<const double> values) {
    if (log_w > shift) rescale(log_w);
    const double w = std::exp(log_w - shift);
    weight += w;
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += w * values[k];
  }

  void merge(const Accumulator& other) {
    if (other.weight == 0.0) return;
    if (other.shift > shift) rescale(other.shift);
    const double f = std::exp(other.shift - shift);
    weight += other.weight * f;
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += other.sums[k] * f;
  }
};

}  // namespace

WeightedSums enumerate_weighted(const GibbsModel& model, const FrozenSites& frozen, const Projector& project,
                                std::size_t slots, EnumerationOptions options) {
  const std::size_t n = model.size();
  std::vector<int> state(n, 0);  // 0 free, otherwise frozen spin
  for (auto [i, v] : frozen) {
    require(i < n, "frozen site index outside the volume");
    require(v == 1 || v == -1, "frozen spins must be +1 or -1");
    require(state[i] == 0 || state[i] == v, "site frozen twice with different spins");
    state[i] = v;
  }
  std::vector<std::size_t> free_sites;
  for (std::size_t i = 0; i < n; ++i)
    if (state[i] == 0) free_sites.push_back(i);
  const std::size_t m = free_sites.size();
  if (m > kMaxEnumeratedSites)
    throw CapacityError("exact enumeration is limited to " + std::to_string(kMaxEnumeratedSites) +
                        " free sites, got " + std::to_string(m));

  const std::size_t high_bits = std::min(kChunkBits, m);
  const std::size_t low_bits = m - high_bits;
  const std::size_t chunks = std::size_t{1} << high_bits;
  const double beta = model.beta();

  std::vector<Accumulator> results(chunks, Accumulator(slots));

  auto run_chunk = [&](std::size_t c, std::vector<Spin>& spins, std::vector<double>& h, std::vector<double>& buf) {
    for (std::size_t i = 0; i < n; ++i) spins[i] = static_cast<Spin>(state[i] == 0 ? -1 : state[i]);
    for (std::size_t b = 0; b < high_bits; ++b)
      if ((c >> b) & 1U) spins[free_sites[low_bits + b]] = 1;
    double energy = model.energy(spins);
    for (std::size_t i = 0; i < n; ++i) h[i] = model.local_field(spins, i);
    Accumulator& acc = results[c];
    auto visit = [&] {
      if (slots) project(spins, buf);
      acc.add(-beta * energy, buf);
    };
    visit();
    const std::size_t steps = std::size_t{1} << low_bits;
    for (std::size_t t = 1; t < steps; ++t) {
      const std::size_t site = free_sites[static_cast<std::size_t>(std::countr_zero(t))];
      const double s = spins[site];
      energy += 2.0 * s * h[site];
      spins[site] = static_cast<Spin>(-s);
      const double ds = -2.0 * s;
      for (std::size_t j = 0; j < n; ++j)
        if (j != site) h[j] += model.coupling(site, j) * ds;
      visit();
    }
  };

  std::size_t workers = options.workers ? options.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<Spin> spins(n);
    std::vector<double> h(n), buf(slots);
    for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c, spins, h, buf);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  Accumulator total(slots);
  for (const auto& r : results) total.merge(r);
  WeightedSums out;
  out.log_z = total.shift + std::log(total.weight);
  out.averages.resize(slots);
  for (std::size_t k = 0; k < slots; ++k) out.averages[k] = total.sums[k] / total.weight;
  return out;
}

double log_partition(const GibbsModel& model, const FrozenSites& frozen, EnumerationOptions options) {
  return enumerate_weighted(model, frozen, {}, 0, options).log_z;
}

std::vector<double> expectations(const GibbsModel& model, std::span<const Observable> observables,
                                 const FrozenSites& frozen, EnumerationOptions options) {
  auto project = [&](std::span<const Spin> s, std::span<double> out) {
    for (std::size_t k = 0; k < observables.size(); ++k) out[k] = observables[k](s);
  };
  return enumerate_weighted(model, frozen, project, observables.size(), options).averages;
}

double enumerate_partition(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc) {
  return log_partition(GibbsModel(volume, params, bc));
}

double expectation(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                   const Observable& obs) {
  return expectations(GibbsModel(volume, params, bc), std::span(&obs, 1))[0];
}

double conditional_expectation(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                               const FrozenSites& frozen, const Observable& obs) {
  return expectations(GibbsModel(volume, params, bc), std::span(&obs, 1), frozen)[0];
}

InterfaceLaw interface_distribution(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc) {
  require(volume.dimension() == 1 && volume.lo() == -volume.hi() && volume.hi() >= 1,
          "interface law needs a symmetric interval [-L, L] with L >= 1");
  const int left = bc.spin_at(Site{volume.lo() - 1, 0});
  const int right = bc.spin_at(Site{volume.hi() + 1, 0});
  require(left != 0 && right != 0 && left != right, "interface law needs opposite outer boundary spins");
  const long L = volume.hi();
  const std::size_t points = static_cast<std::size_t>(2 * L + 2);
  GibbsModel model(volume, params, bc);
  auto project = [&](std::span<const Spin> s, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    out[contours::interface_grid_index(volume, contours::interface_point(volume, s, bc))] = 1.0;
  };
  InterfaceLaw law;
  law.probabilities = enumerate_weighted(model, {}, project, points).averages;
  for (std::size_t j = 0; j < points; ++j)
    law.grid.push_back((static_cast<double>(j) - static_cast<double>(L) - 0.5) / static_cast<double>(L));
  return law;
}

double dlr_consistency_check(const Volume& volume, const Volume& subvolume, const ModelParams& params,
                             const BoundaryCondition& bc) {
  require(volume.dimension() == 1 && subvolume.dimension() == 1, "DLR check is implemented for 1d volumes");
  require(volume.contains(subvolume), "DLR check: subvolume must lie inside the volume");
  const std::size_t n = volume.size();
  if (n > kMaxEnumeratedSites) throw CapacityError("DLR check: volume exceeds the enumeration limit");

  const GibbsModel outer(volume, params, bc);
  const double log_z = log_partition(outer);
  const std::size_t offset = static_cast<std::size_t>(subvolume.lo() - volume.lo());
  const std::size_t m = subvolume.size();
  const std::size_t total = std::size_t{1} << n;
  const std::size_t inner_states = std::size_t{1} << m;

  // Enumerate sigma = (inner bits, outer bits); the inner bits occupy the
  // subvolume sites.
  std::vector<Spin> spins(n);
  auto fill = [&](std::size_t code) {
    for (std::size_t i = 0; i < n; ++i) spins[i] = ((code >> i) & 1U) ? 1 : -1;
  };
  std::vector<double> gamma(total);
  for (std::size_t code = 0; code < total; ++code) {
    fill(code);
    gamma[code] = std::exp(-params.beta * outer.energy(spins) - log_z);
  }

  const std::size_t inner_mask = ((std::size_t{1} << m) - 1) << offset;
  double worst = 0.0;
  std::vector<Spin> inner(m);
  std::vector<double> inner_log_w(inner_states);
  for (std::size_t code = 0; code < total; ++code) {
    if (code & inner_mask) continue;  // one pass per exterior configuration xi
    fill(code);
    const GibbsModel sub(subvolume, params, bc.with_pattern(volume.lo(), spins));
    double marginal = 0.0;
    for (std::size_t eta = 0; eta < inner_states; ++eta) {
      for (std::size_t i = 0; i < m; ++i) inner[i] = ((eta >> i) & 1U) ? 1 : -1;
      inner_log_w[eta] = -params.beta * sub.energy(inner);
      marginal += gamma[code | (eta << offset)];
    }
    double log_zs = -std::numeric_limits<double>::infinity();
    for (double v : inner_log_w) log_zs = log_add_exp(log_zs, v);
    for (std::size_t eta = 0; eta < inner_states; ++eta) {
      const double composed = marginal * std::exp(inner_log_w[eta] - log_zs);
      worst = std::max(worst, std::abs(composed - gamma[code | (eta << offset)]));
    }
  }
  return worst;
}

namespace {

void require_enumerable(const Volume& volume) {
  if (volume.size() > kMaxEnumeratedSites)
    throw CapacityError("exact enumeration is limited to " + std::to_string(kMaxEnumeratedSites) + " sites, got " +
                        std::to_string(volume.size()));
}

}  // namespace

double gks_check(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                 std::span<const std::pair<Site, Site>> pairs) {
  require(bc.is_nonnegative_outside(volume), "GKS check needs a non-negative boundary condition");
  require_enumerable(volume);
  GibbsModel model(volume, params, bc);
  for (std::size_t i = 0; i < volume.size(); ++i)
    require(params.field.at(i) >= 0.0, "GKS check needs a non-negative external field");
  std::vector<Observable> obs;
  for (auto [x, y] : pairs) {
    const std::size_t i = volume.index_of(x), j = volume.index_of(y);
    obs.push_back(Observable::spin(i));
    obs.push_back(Observable::spin(j));
    obs.push_back(Observable::pair(i, j));
  }
  const auto values = expectations(model, obs);
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double sx = values[3 * p], sy = values[3 * p + 1], sxy = values[3 * p + 2];
    slack = std::min({slack, sxy - sx * sy, sx, sy});
  }
  return slack;
}

FkgSandwich fkg_sandwich_check(const Volume& volume, const ModelParams& params, const Observable& increasing,
                               const BoundaryCondition& omega) {
  require_enumerable(volume);
  const std::size_t n = volume.size();
  std::vector<Spin> s(n), t(n);
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    for (std::size_t i = 0; i < n; ++i) s[i] = ((code >> i) & 1U) ? 1 : -1;
    const double base = increasing(s);
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] > 0) continue;
      t = s;
      t[i] = 1;
      require(increasing(t) >= base - 1e-12, "FKG check: observable is not increasing");
    }
  }
  FkgSandwich r;
  r.minus = expectation(volume, params, BoundaryCondition::minus(), increasing);
  r.omega = expectation(volume, params, omega, increasing);
  r.plus = expectation(volume, params, BoundaryCondition::plus(), increasing);
  r.holds = r.minus <= r.omega + 1e-12 && r.omega <= r.plus + 1e-12;
  return r;
}

PercusInequality percus_inequality_check(const CouplingSpec& anisotropic, const Volume& box, double beta) {
  const auto* axes = anisotropic.get_if<AnisotropicAxes>();
  require(axes != nullptr, "Percus check needs an anisotropic coupling");
  require(box.dimension() == 2, "Percus check needs a 2d box");
  require(box.lo() <= 0 && box.hi() >= 0, "Percus check needs a box containing the line x2 = 0");
  require_enumerable(box);

  PercusInequality r;
  const GibbsModel plane(box, ModelParams{beta, anisotropic, {}}, BoundaryCondition::dobrushin_2d(0));
  std::vector<Observable> line;
  for (long x = box.lo(); x <= box.hi(); ++x) line.push_back(Observable::spin(box.index_of(Site{x, 0})));
  r.dobrushin_line = expectations(plane, line);

  const Volume chain_volume = Volume::interval(box.lo(), box.hi());
  const GibbsModel chain(chain_volume, ModelParams{beta, CouplingSpec(PowerLaw{axes->J_h, axes->alpha_h, {}}), {}},
                         BoundaryCondition::plus());
  std::vector<Observable> chain_obs;
  for (std::size_t i = 0; i < chain_volume.size(); ++i) chain_obs.push_back(Observable::spin(i));
  r.chain = expectations(chain, chain_obs);

  r.holds = true;
  for (std::size_t i = 0; i < r.chain.size(); ++i)
    if (r.dobrushin_line[i] < r.chain[i] - 1e-12) r.holds = false;
  return r;
}

}  // namespace exact
}  // namespace lrising
