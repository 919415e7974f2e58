#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "lrising/lattice.hpp"
#include "lrising/numeric.hpp"

namespace lrising {

/// J_xy = J when |x - y|_1 = 1, else 0.
struct NearestNeighbor {
  double J = 1.0;
};

/// J_xy = J |x - y|_2^{-alpha}. `j1` overrides the value at unit distance
/// (the large nearest-neighbour coupling J(1) used by contour estimates).
struct PowerLaw {
  double J = 1.0;
  double alpha = 2.0;
  std::optional<double> j1;
};

/// Two-dimensional J_xy = J_nn [x ~ y] + |x - y|_2^{-alpha}.
struct IsotropicMixed {
  double J_nn = 1.0;
  double alpha = 3.0;
};

struct VerticalNearestNeighbor {
  double J = 1.0;
};

struct VerticalPowerLaw {
  double J = 1.0;
  double alpha = 1.5;
};

/// Two-dimensional couplings along the axes only: |x1 - y1|^{-alpha_h} within
/// a row, and either nearest-neighbour or |x2 - y2|^{-alpha_v} within a column.
struct AnisotropicAxes {
  double J_h = 1.0;
  double alpha_h = 1.5;
  std::variant<VerticalNearestNeighbor, VerticalPowerLaw> vertical = VerticalNearestNeighbor{};
};

class CouplingSpec {
 public:
  using Variant = std::variant<NearestNeighbor, PowerLaw, IsotropicMixed, AnisotropicAxes>;

  CouplingSpec(Variant v);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Variant> && std::is_constructible_v<Variant, T>)
  CouplingSpec(T&& v) : CouplingSpec(Variant(std::forward<T>(v))) {}  // NOLINT(google-explicit-constructor)

  const Variant& variant() const { return variant_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&variant_);
  }

  /// Throws ContractError unless the spec is usable in the given dimension.
  void validate(int dimension) const;
  bool is_anisotropic() const { return std::holds_alternative<AnisotropicAxes>(variant_); }
  std::string describe() const;

 private:
  Variant variant_;
};

/// Coupling for displacement (dx1, dx2) != (0, 0).
double coupling_at(const CouplingSpec& spec, long dx1, long dx2);

/// J_xy. Contract: x != y.
double coupling_value(const CouplingSpec& spec, Site x, Site y);

/// sum_{m in Z} J((m, r)), omitting the origin when r = 0.
double row_coupling_sum(const CouplingSpec& spec, long r, long crossover = kDefaultCrossover);

/// sum over all nonzero displacements in dimension `dimension`.
double total_coupling(const CouplingSpec& spec, int dimension, long crossover = kDefaultCrossover);

/// One-dimensional: sum_{k >= k0} J(k) (k0 >= 1).
double coupling_tail_1d(const CouplingSpec& spec, long k0, long crossover = kDefaultCrossover);

/// One-dimensional: sum_{k >= k0} (-1)^k J(k) (k0 >= 1).
double alternating_coupling_tail_1d(const CouplingSpec& spec, long k0, long crossover = kDefaultCrossover);

/// One-dimensional: sum_{k = k0}^{k1} J(k), with k1 < 0 meaning infinity.
double coupling_range_1d(const CouplingSpec& spec, long k0, long k1, long crossover = kDefaultCrossover);
double alternating_coupling_range_1d(const CouplingSpec& spec, long k0, long k1,
                                     long crossover = kDefaultCrossover);

}  // namespace lrising
