#pragma once

#include <cstdint>

namespace lrising {

/// Counter-based generator: output n is mix64(key + (n + 1) * golden), where
/// mix64 is the SplitMix64 finalizer. A stream is fully described by
/// (key, counter), so streams can be split and replayed cheaply.
///
/// split(i) derives the key of child stream i from the parent key alone, so
/// adding children never perturbs existing ones.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = 0) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n), n > 0 (modulo with rejection).
  std::uint64_t below(std::uint64_t n);

  CounterRng split(std::uint64_t child) const {
    CounterRng r;
    r.key_ = mix64(key_ ^ mix64(child + 0x3c6ef372fe94f82bULL));
    r.counter_ = 0;
    return r;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed of replica i under master seed `master`; identical to
/// CounterRng(master).split(i).key() mixed back into a seed value.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace lrising
