#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrising/lattice.hpp"

namespace lrising {

/// A named real function of a configuration (in canonical site order).
struct Observable {
  std::string name;
  std::function<double(std::span<const Spin>)> evaluate;

  double operator()(std::span<const Spin> spins) const { return evaluate(spins); }

  static Observable spin(std::size_t i);
  static Observable pair(std::size_t i, std::size_t j);
  static Observable magnetization();
  /// 1 when every listed site carries the listed spin, else 0.
  static Observable indicator(std::vector<std::pair<std::size_t, Spin>> pattern);
  static Observable constant(double value);
};

}  // namespace lrising
