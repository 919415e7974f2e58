#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lrising/exact.hpp"
#include "lrising/model.hpp"
#include "lrising/observable.hpp"
#include "lrising/rng.hpp"

namespace lrising::mcmc {

inline constexpr std::size_t kMaxSamplerSites = std::size_t{1} << 16;
/// Energy and cached fields are recomputed from scratch this often.
inline constexpr std::size_t kResyncInterval = 256;

enum class Initial { AllPlus, AllMinus, Random };
enum class Rule { Metropolis, HeatBath };

/// Single-spin sampler with cached local fields. Frozen sites never move.
class Sampler {
 public:
  Sampler(GibbsModel model, std::uint64_t seed, Initial initial, const exact::FrozenSites& frozen = {});
  /// Starts from an explicit configuration (frozen sites are overwritten).
  Sampler(GibbsModel model, std::uint64_t seed, const Configuration& start, const exact::FrozenSites& frozen = {});

  /// One systematic pass over the free sites.
  void sweep(Rule rule);
  void run(std::size_t sweeps, Rule rule) {
    for (std::size_t s = 0; s < sweeps; ++s) sweep(rule);
  }

  const GibbsModel& model() const { return model_; }
  std::span<const Spin> spins() const { return spins_; }
  double energy() const { return energy_; }
  /// sum_j J_ij s_j + field_i, maintained incrementally.
  double local_field(std::size_t i) const { return fields_[i]; }
  std::size_t sweeps() const { return sweeps_; }
  std::uint64_t accepted() const { return accepted_; }
  const CounterRng& rng() const { return rng_; }

  /// Probability that an update at site i moves the current state to the
  /// state with s_i flipped.
  double flip_probability(std::size_t i, Rule rule) const;
  /// Recomputes energy and fields from scratch.
  void resync();

 private:
  void init(const exact::FrozenSites& frozen);
  void flip(std::size_t i);

  GibbsModel model_;
  CounterRng rng_;
  std::vector<Spin> spins_;
  std::vector<double> fields_;
  std::vector<std::size_t> free_;
  double energy_ = 0.0;
  std::size_t sweeps_ = 0;
  std::uint64_t accepted_ = 0;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  /// Integrated autocorrelation time in sweeps; 0.5 for uncorrelated or constant series.
  double tau = 0.5;
  std::size_t samples = 0;
};

inline constexpr std::size_t kBlockCount = 32;

/// Blocking standard error (32 blocks) and windowed integrated
/// autocorrelation time (window W = smallest with W >= 6 tau(W)).
Estimate estimate_series(std::span<const double> series);
double integrated_autocorrelation(std::span<const double> series);

/// Runs `burn_in` sweeps, then records each observable once per sweep for the
/// remaining n_sweeps - burn_in sweeps.
std::vector<Estimate> estimate_many(Sampler& sampler, std::span<const Observable> observables, std::size_t n_sweeps,
                                    std::size_t burn_in, Rule rule = Rule::HeatBath);
Estimate estimate(Sampler& sampler, const Observable& obs, std::size_t n_sweeps, std::size_t burn_in,
                  Rule rule = Rule::HeatBath);

/// Burn-in chosen as 10 tau from a pilot run, re-estimated once from the
/// measurement run; measurements inside the revised burn-in are discarded.
std::vector<Estimate> estimate_auto(Sampler& sampler, std::span<const Observable> observables,
                                    std::size_t measure_sweeps, Rule rule = Rule::HeatBath,
                                    std::size_t pilot_sweeps = 200);

/// Sample-count weighted combination of independent estimates.
Estimate merge(std::span<const Estimate> parts);

struct ReplicaPlan {
  std::size_t replicas = 8;
  std::size_t sweeps = 4000;
  std::size_t burn_in = 500;
  Rule rule = Rule::HeatBath;
  std::uint64_t master_seed = 1;
  std::size_t workers = 0;
};

/// all +, all -, a random start, and `extra` (when given), in that order.
std::vector<Configuration> mixed_initials(std::size_t sites, std::uint64_t seed,
                                          const std::optional<Configuration>& extra = std::nullopt);

struct ReplicaResult {
  /// Per observable, merged over replicas.
  std::vector<Estimate> merged;
  /// [replica][observable].
  std::vector<std::vector<Estimate>> per_replica;
};

/// Runs independent replicas of one model. Replica r is seeded with
/// derive_seed(master_seed, r) and starts from initials[r % initials.size()].
ReplicaResult run_replicas(const GibbsModel& model, std::span<const Observable> observables, const ReplicaPlan& plan,
                           std::span<const Configuration> initials, const exact::FrozenSites& frozen = {});

}  // namespace lrising::mcmc
