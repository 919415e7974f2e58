#include "lrising/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrising/errors.hpp"
#include "lrising/parallel.hpp"

namespace lrising::mcmc {
namespace {

std::vector<Spin> initial_spins(std::size_t n, Initial initial, CounterRng& rng) {
  std::vector<Spin> s(n, 1);
  if (initial == Initial::AllMinus) std::fill(s.begin(), s.end(), Spin{-1});
  if (initial == Initial::Random)
    for (auto& v : s) v = (rng.next() >> 63) ? 1 : -1;
  return s;
}

void check_capacity(const GibbsModel& model) {
  if (model.size() > kMaxSamplerSites)
    throw CapacityError("sampler is limited to " + std::to_string(kMaxSamplerSites) + " sites, got " +
                        std::to_string(model.size()));
}

}  // namespace

Sampler::Sampler(GibbsModel model, std::uint64_t seed, Initial initial, const exact::FrozenSites& frozen)
    : model_((check_capacity(model), std::move(model))), rng_(seed) {
  spins_ = initial_spins(model_.size(), initial, rng_);
  init(frozen);
}

Sampler::Sampler(GibbsModel model, std::uint64_t seed, const Configuration& start, const exact::FrozenSites& frozen)
    : model_((check_capacity(model), std::move(model))), rng_(seed) {
  require(start.size() == model_.size(), "sampler start configuration has the wrong length");
  spins_.assign(start.spins().begin(), start.spins().end());
  init(frozen);
}

void Sampler::init(const exact::FrozenSites& frozen) {
  std::vector<bool> is_frozen(model_.size(), false);
  for (auto [i, v] : frozen) {
    require(i < model_.size(), "frozen site index outside the volume");
    require(v == 1 || v == -1, "frozen spins must be +1 or -1");
    spins_[i] = v;
    is_frozen[i] = true;
  }
  for (std::size_t i = 0; i < model_.size(); ++i)
    if (!is_frozen[i]) free_.push_back(i);
  resync();
}

void Sampler::resync() {
  energy_ = model_.energy(spins_);
  fields_.resize(model_.size());
  for (std::size_t i = 0; i < model_.size(); ++i) fields_[i] = model_.local_field(spins_, i);
}

void Sampler::flip(std::size_t i) {
  energy_ += 2.0 * spins_[i] * fields_[i];
  spins_[i] = static_cast<Spin>(-spins_[i]);
  const double ds = 2.0 * spins_[i];
  const std::size_t n = model_.size();
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) fields_[j] += model_.coupling(i, j) * ds;
  ++accepted_;
}

double Sampler::flip_probability(std::size_t i, Rule rule) const {
  const double beta = model_.beta();
  const double delta = 2.0 * spins_[i] * fields_[i];
  if (rule == Rule::Metropolis) return delta <= 0.0 ? 1.0 : std::exp(-beta * delta);
  // Heat bath lands on -s_i with probability e^{-beta dE} / (1 + e^{-beta dE}).
  return 1.0 / (1.0 + std::exp(beta * delta));
}

void Sampler::sweep(Rule rule) {
  const double beta = model_.beta();
  for (std::size_t i : free_) {
    const double u = rng_.uniform();
    if (rule == Rule::Metropolis) {
      const double delta = 2.0 * spins_[i] * fields_[i];
      if (delta <= 0.0 || u < std::exp(-beta * delta)) flip(i);
    } else {
      const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * beta * fields_[i]));
      const Spin target = u < p_plus ? 1 : -1;
      if (target != spins_[i]) flip(i);
    }
  }
  ++sweeps_;
  if (sweeps_ % kResyncInterval == 0) resync();
}

double integrated_autocorrelation(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) return 0.5;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t t) {
    double c = 0.0;
    for (std::size_t k = 0; k + t < n; ++k) c += (series[k] - mean) * (series[k + t] - mean);
    return c / static_cast<double>(n - t);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return 0.5;
  double tau = 0.5;
  for (std::size_t w = 1; w < n / 2; ++w) {
    tau += autocov(w) / c0;
    if (static_cast<double>(w) >= 6.0 * tau) break;
  }
  return std::max(tau, 0.5);
}

Estimate estimate_series(std::span<const double> series) {
  Estimate e;
  e.samples = series.size();
  if (series.empty()) return e;
  const double n = static_cast<double>(series.size());
  e.mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  const std::size_t blocks = std::min(kBlockCount, series.size());
  const std::size_t per = series.size() / blocks;
  if (blocks >= 2) {
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto first = series.begin() + static_cast<long>(b * per);
      means[b] = std::accumulate(first, first + static_cast<long>(per), 0.0) / static_cast<double>(per);
    }
    const double bm = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(blocks);
    double var = 0.0;
    for (double m : means) var += (m - bm) * (m - bm);
    var /= static_cast<double>(blocks - 1);
    e.std_error = std::sqrt(var / static_cast<double>(blocks));
  }
  e.tau = integrated_autocorrelation(series);
  return e;
}

std::vector<Estimate> estimate_many(Sampler& sampler, std::span<const Observable> observables, std::size_t n_sweeps,
                                    std::size_t burn_in, Rule rule) {
  require(n_sweeps > burn_in, "estimate: n_sweeps must exceed burn_in");
  sampler.run(burn_in, rule);
  const std::size_t m = n_sweeps - burn_in;
  std::vector<std::vector<double>> series(observables.size(), std::vector<double>(m));
  for (std::size_t s = 0; s < m; ++s) {
    sampler.sweep(rule);
    for (std::size_t k = 0; k < observables.size(); ++k) series[k][s] = observables[k](sampler.spins());
  }
  std::vector<Estimate> out;
  for (const auto& x : series) out.push_back(estimate_series(x));
  return out;
}

Estimate estimate(Sampler& sampler, const Observable& obs, std::size_t n_sweeps, std::size_t burn_in, Rule rule) {
  return estimate_many(sampler, std::span(&obs, 1), n_sweeps, burn_in, rule)[0];
}

std::vector<Estimate> estimate_auto(Sampler& sampler, std::span<const Observable> observables,
                                    std::size_t measure_sweeps, Rule rule, std::size_t pilot_sweeps) {
  require(!observables.empty() && measure_sweeps > 0, "estimate_auto needs observables and sweeps");
  auto record = [&](std::size_t sweeps) {
    std::vector<std::vector<double>> series(observables.size());
    for (std::size_t s = 0; s < sweeps; ++s) {
      sampler.sweep(rule);
      for (std::size_t k = 0; k < observables.size(); ++k) series[k].push_back(observables[k](sampler.spins()));
    }
    return series;
  };
  auto max_tau = [](const std::vector<std::vector<double>>& series) {
    double t = 0.5;
    for (const auto& x : series) t = std::max(t, integrated_autocorrelation(x));
    return t;
  };
  const auto pilot = record(pilot_sweeps);
  const auto burn = static_cast<std::size_t>(std::ceil(10.0 * max_tau(pilot)));
  sampler.run(burn, rule);
  auto series = record(measure_sweeps);
  const auto revised = static_cast<std::size_t>(std::ceil(10.0 * max_tau(series)));
  const std::size_t already = pilot_sweeps + burn;
  if (revised > already) {
    const std::size_t drop = std::min(revised - already, measure_sweeps / 2);
    for (auto& x : series) x.erase(x.begin(), x.begin() + static_cast<long>(drop));
  }
  std::vector<Estimate> out;
  for (const auto& x : series) out.push_back(estimate_series(x));
  return out;
}

Estimate merge(std::span<const Estimate> parts) {
  Estimate e;
  double n = 0.0, var = 0.0, tau = 0.0;
  for (const auto& p : parts) {
    const double w = static_cast<double>(p.samples);
    n += w;
    e.mean += w * p.mean;
    var += w * w * p.std_error * p.std_error;
    tau += w * p.tau;
  }
  if (n == 0.0) return e;
  e.mean /= n;
  e.std_error = std::sqrt(var) / n;
  e.tau = std::max(0.5, tau / n);
  e.samples = static_cast<std::size_t>(n);
  return e;
}

std::vector<Configuration> mixed_initials(std::size_t sites, std::uint64_t seed,
                                          const std::optional<Configuration>& extra) {
  CounterRng rng(seed);
  std::vector<Configuration> out;
  out.push_back(Configuration::constant(sites, 1));
  out.push_back(Configuration::constant(sites, -1));
  out.emplace_back(initial_spins(sites, Initial::Random, rng));
  if (extra) {
    require(extra->size() == sites, "extra initial configuration has the wrong length");
    out.push_back(*extra);
  }
  return out;
}

ReplicaResult run_replicas(const GibbsModel& model, std::span<const Observable> observables, const ReplicaPlan& plan,
                           std::span<const Configuration> initials, const exact::FrozenSites& frozen) {
  require(plan.replicas >= 1, "at least one replica is required");
  require(!initials.empty(), "at least one initial configuration is required");
  ReplicaResult result;
  result.per_replica = parallel_map(plan.replicas, plan.workers, [&](std::size_t r) {
    Sampler sampler(model, derive_seed(plan.master_seed, r), initials[r % initials.size()], frozen);
    return estimate_many(sampler, observables, plan.sweeps, plan.burn_in, plan.rule);
  });
  for (std::size_t k = 0; k < observables.size(); ++k) {
    std::vector<Estimate> parts;
    for (const auto& rep : result.per_replica) parts.push_back(rep[k]);
    result.merged.push_back(merge(parts));
  }
  return result;
}

}  // namespace lrising::mcmc
