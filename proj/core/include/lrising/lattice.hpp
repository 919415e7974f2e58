#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrising {

using Spin = std::int8_t;

/// Lattice site in Z^d coordinates. One-dimensional sites leave x2 at zero.
struct Site {
  long x1 = 0;
  long x2 = 0;
  auto operator<=>(const Site&) const = default;
};

/// Finite volume: an interval [lo, hi] of Z, or the box [lo, hi]^2 of Z^2.
///
/// Sites are indexed canonically: 1d by x1 - lo, 2d row-major with x1 varying
/// fastest.
class Volume {
 public:
  static Volume line(long half_width);
  static Volume interval(long lo, long hi);
  static Volume box(long half_width);

  int dimension() const { return dimension_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  long width() const { return hi_ - lo_ + 1; }
  std::size_t size() const;

  Site site(std::size_t index) const;
  std::optional<std::size_t> index(Site s) const;
  /// Like index() but throws ContractError for sites outside the volume.
  std::size_t index_of(Site s) const;
  bool contains(Site s) const { return index(s).has_value(); }
  bool contains(const Volume& other) const;

  bool operator==(const Volume&) const = default;
  std::string describe() const;

 private:
  Volume(int dimension, long lo, long hi);
  int dimension_;
  long lo_;
  long hi_;
};

/// A +-1 spin assignment on the sites of a volume, in canonical index order.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Spin> spins);
  static Configuration constant(std::size_t n, Spin value);

  std::size_t size() const { return spins_.size(); }
  Spin operator[](std::size_t i) const { return spins_[i]; }
  Spin& operator[](std::size_t i) { return spins_[i]; }
  std::span<const Spin> spins() const { return spins_; }
  std::span<Spin> spins() { return spins_; }

  Configuration flipped() const;
  bool operator==(const Configuration&) const = default;

 private:
  std::vector<Spin> spins_;
};

void validate_configuration(const Volume& volume, const Configuration& config);

}  // namespace lrising
