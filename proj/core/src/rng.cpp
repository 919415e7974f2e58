#include "lrising/rng.hpp"

#include "lrising/errors.hpp"

namespace lrising {

std::uint64_t CounterRng::below(std::uint64_t n) {
  require(n > 0, "below: empty range");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % n;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return CounterRng::mix64(CounterRng(master).split(index).key());
}

}  // namespace lrising
