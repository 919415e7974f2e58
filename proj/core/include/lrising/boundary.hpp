#pragma once

#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lrising/coupling.hpp"
#include "lrising/lattice.hpp"
#include "lrising/numeric.hpp"

namespace lrising {

inline constexpr long kNegativeInfinity = std::numeric_limits<long>::min();
inline constexpr long kPositiveInfinity = std::numeric_limits<long>::max();

enum class Fill { Constant, Alternating, Pattern };

/// One piece of a one-dimensional boundary condition, covering [lo, hi]
/// (either end may be infinite). Constant fills use `sign` (0 is the free
/// boundary); alternating fills give sign * (-1)^y; patterns list explicit
/// spins starting at lo.
struct Segment {
  long lo = kNegativeInfinity;
  long hi = kPositiveInfinity;
  Fill fill = Fill::Constant;
  int sign = 1;
  std::vector<Spin> pattern;

  int spin_at(long y) const;
  bool operator==(const Segment&) const = default;
};

/// Two-dimensional rule: `upper` on rows x2 >= height, `lower` below.
struct HalfPlane {
  int upper = 1;
  int lower = -1;
  long height = 0;
  bool operator==(const HalfPlane&) const = default;
};

/// Exterior spin assignment. Rules are defined on all of Z^d; only their
/// values outside the finite volume enter the Hamiltonian.
class BoundaryCondition {
 public:
  static BoundaryCondition plus();
  static BoundaryCondition minus();
  static BoundaryCondition free();
  static BoundaryCondition uniform(int sign);
  /// (-1)^y on the whole line.
  static BoundaryCondition alternating();
  /// - on y < split, + on y >= split.
  static BoundaryCondition dobrushin_1d(long split = 0);
  /// + on rows x2 >= height, - below.
  static BoundaryCondition dobrushin_2d(long height = 0);
  /// Past configuration of the one-sided neighbourhood of the alternating
  /// configuration: (-1)^y on [-L, -1], `sign` on [-N, -L-1], + beyond -N,
  /// and + on y >= 0.
  static BoundaryCondition left_neighborhood(int sign, long annulus_end, long alternating_half_width);
  /// `sign` on [lo, hi], + elsewhere.
  static BoundaryCondition frozen_interval(long lo, long hi, int sign = -1);
  /// Ordered, contiguous segments covering the whole line.
  static BoundaryCondition from_segments(std::vector<Segment> segments, std::string name = "custom");

  /// 0 when the rule is dimension-agnostic.
  int dimension() const;
  int spin_at(Site y) const;
  BoundaryCondition flipped() const;
  /// Replaces the spins on [lo, lo + spins.size() - 1] by an explicit pattern.
  BoundaryCondition with_pattern(long lo, std::span<const Spin> spins) const;

  bool is_uniform() const { return std::holds_alternative<int>(rule_); }
  int uniform_sign() const;
  const std::vector<Segment>* segments() const { return std::get_if<std::vector<Segment>>(&rule_); }
  const HalfPlane* half_plane() const { return std::get_if<HalfPlane>(&rule_); }
  const std::string& name() const { return name_; }
  /// True when every exterior spin of `volume` is +1, -1 or 0 with no negative value.
  bool is_nonnegative_outside(const Volume& volume) const;

 private:
  using Rule = std::variant<int, std::vector<Segment>, HalfPlane>;
  BoundaryCondition(Rule rule, std::string name);
  Rule rule_;
  std::string name_;
};

struct TailPolicy {
  long crossover = kDefaultCrossover;
};

/// h_x = sum_{y outside the volume} J_xy omega_y, with infinite tails summed
/// analytically.
double boundary_field(const Volume& volume, const CouplingSpec& spec, const BoundaryCondition& bc, Site x,
                      TailPolicy tails = {});

}  // namespace lrising
