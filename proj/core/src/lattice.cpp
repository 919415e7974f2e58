#include "lrising/lattice.hpp"

#include <algorithm>

#include "lrising/errors.hpp"

namespace lrising {

Volume::Volume(int dimension, long lo, long hi) : dimension_(dimension), lo_(lo), hi_(hi) {
  require(dimension == 1 || dimension == 2, "Volume: dimension must be 1 or 2");
  require(lo <= hi, "Volume: empty range");
}

Volume Volume::line(long half_width) {
  require(half_width >= 0, "Volume::line: negative half width");
  return Volume(1, -half_width, half_width);
}

Volume Volume::interval(long lo, long hi) { return Volume(1, lo, hi); }

Volume Volume::box(long half_width) {
  require(half_width >= 0, "Volume::box: negative half width");
  return Volume(2, -half_width, half_width);
}

std::size_t Volume::size() const {
  const auto w = static_cast<std::size_t>(width());
  return dimension_ == 1 ? w : w * w;
}

Site Volume::site(std::size_t index) const {
  require(index < size(), "Volume::site: index out of range");
  const auto w = static_cast<std::size_t>(width());
  if (dimension_ == 1) return Site{lo_ + static_cast<long>(index), 0};
  return Site{lo_ + static_cast<long>(index % w), lo_ + static_cast<long>(index / w)};
}

std::optional<std::size_t> Volume::index(Site s) const {
  if (s.x1 < lo_ || s.x1 > hi_) return std::nullopt;
  if (dimension_ == 1) {
    if (s.x2 != 0) return std::nullopt;
    return static_cast<std::size_t>(s.x1 - lo_);
  }
  if (s.x2 < lo_ || s.x2 > hi_) return std::nullopt;
  return static_cast<std::size_t>((s.x2 - lo_) * width() + (s.x1 - lo_));
}

std::size_t Volume::index_of(Site s) const {
  auto i = index(s);
  require(i.has_value(), "site (" + std::to_string(s.x1) + "," + std::to_string(s.x2) +
                             ") is outside " + describe());
  return *i;
}

bool Volume::contains(const Volume& other) const {
  return dimension_ == other.dimension_ && other.lo_ >= lo_ && other.hi_ <= hi_;
}

std::string Volume::describe() const {
  const std::string range = "[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
  return dimension_ == 1 ? range : range + "^2";
}

Configuration::Configuration(std::vector<Spin> spins) : spins_(std::move(spins)) {
  for (Spin s : spins_) require(s == 1 || s == -1, "Configuration: spins must be +1 or -1");
}

Configuration Configuration::constant(std::size_t n, Spin value) {
  return Configuration(std::vector<Spin>(n, value));
}

Configuration Configuration::flipped() const {
  Configuration out = *this;
  for (auto& s : out.spins_) s = static_cast<Spin>(-s);
  return out;
}

void validate_configuration(const Volume& volume, const Configuration& config) {
  require(config.size() == volume.size(), "configuration length " + std::to_string(config.size()) +
                                              " does not match volume size " +
                                              std::to_string(volume.size()));
}

}  // namespace lrising
