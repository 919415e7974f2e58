#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "lrising/boundary.hpp"
#include "lrising/coupling.hpp"
#include "lrising/lattice.hpp"

namespace lrising {

/// External field: none, homogeneous, or one value per site of the volume.
struct ExternalField {
  std::variant<std::monostate, double, std::vector<double>> value;

  double at(std::size_t index) const;
  bool is_zero() const;
};

struct ModelParams {
  double beta = 1.0;
  CouplingSpec coupling = NearestNeighbor{};
  ExternalField field;
};

/// A finite-volume Hamiltonian with its boundary condition folded into
/// per-site fields:
///
///   H(sigma) = - sum_{i<j} J_ij s_i s_j - sum_i s_i (h^bc_i + h_i)
///
/// Couplings are translation invariant and reflection symmetric in each axis,
/// so they are stored by absolute displacement (O(N) memory).
class GibbsModel {
 public:
  GibbsModel(Volume volume, ModelParams params, BoundaryCondition bc, TailPolicy tails = {});

  const Volume& volume() const { return volume_; }
  const ModelParams& params() const { return params_; }
  const BoundaryCondition& boundary() const { return bc_; }
  double beta() const { return params_.beta; }
  std::size_t size() const { return volume_.size(); }

  double coupling(std::size_t i, std::size_t j) const {
    return table_[displacement_slot(i, j)];
  }
  /// Boundary plus external field at site i.
  double field(std::size_t i) const { return fields_[i]; }
  double boundary_field(std::size_t i) const { return boundary_fields_[i]; }
  std::span<const double> fields() const { return fields_; }

  double energy(std::span<const Spin> spins) const;
  /// sum_j J_ij s_j + field_i.
  double local_field(std::span<const Spin> spins, std::size_t i) const;
  /// H(sigma with site i flipped) - H(sigma).
  double energy_delta(std::span<const Spin> spins, std::size_t i) const {
    return 2.0 * spins[i] * local_field(spins, i);
  }
  /// Copy with a different inverse temperature; tables are shared by value.
  GibbsModel with_beta(double beta) const;

 private:
  std::size_t displacement_slot(std::size_t i, std::size_t j) const {
    if (volume_.dimension() == 1) return i > j ? i - j : j - i;
    const auto w = static_cast<std::size_t>(volume_.width());
    const std::size_t a1 = i % w, a2 = i / w, b1 = j % w, b2 = j / w;
    const std::size_t d1 = a1 > b1 ? a1 - b1 : b1 - a1;
    const std::size_t d2 = a2 > b2 ? a2 - b2 : b2 - a2;
    return d2 * w + d1;
  }

  Volume volume_;
  ModelParams params_;
  BoundaryCondition bc_;
  std::vector<double> table_;
  std::vector<double> boundary_fields_;
  std::vector<double> fields_;
};

double hamiltonian(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                   const Configuration& sigma);

double energy_delta(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                    const Configuration& sigma, Site site);

/// Finite-volume Gibbs probability of sigma; enumerates the partition function.
double specification_kernel(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                            const Configuration& sigma);

/// h_L = H(-|+) - H(+|+) = 2 sum_{x in volume} sum_{y outside} J_xy for a
/// one-dimensional volume (Plus boundary by default).
double excess_energy(const Volume& volume, const CouplingSpec& spec,
                     const BoundaryCondition& bc = BoundaryCondition::plus());

struct Decimated {
  Volume volume;
  Configuration config;
};

/// Keeps every second spin: output_i = input_{2i}, on [-floor(L/2), floor(L/2)].
Decimated decimate(const Volume& volume, const Configuration& sigma);

}  // namespace lrising
