#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lrising/model.hpp"
#include "lrising/observable.hpp"

namespace lrising::exact {

/// Hard cap on the number of enumerated (free) sites.
inline constexpr std::size_t kMaxEnumeratedSites = 24;

/// Sites held at fixed spins during enumeration, by canonical index.
using FrozenSites = std::vector<std::pair<std::size_t, Spin>>;

/// Writes one value per output slot for a configuration.
using Projector = std::function<void(std::span<const Spin>, std::span<double>)>;

struct EnumerationOptions {
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

struct WeightedSums {
  double log_z = 0.0;
  /// Gibbs averages of each projector slot.
  std::vector<double> averages;
};

/// Enumerates every assignment of the non-frozen sites (Gray-code order with
/// incremental local fields) and returns log Z together with the Gibbs averages
/// of the projector slots. The configuration space is cut into a fixed number
/// of chunks merged in order, so results do not depend on the worker count.
WeightedSums enumerate_weighted(const GibbsModel& model, const FrozenSites& frozen, const Projector& project,
                                std::size_t slots, EnumerationOptions options = {});

double log_partition(const GibbsModel& model, const FrozenSites& frozen = {}, EnumerationOptions options = {});

std::vector<double> expectations(const GibbsModel& model, std::span<const Observable> observables,
                                 const FrozenSites& frozen = {}, EnumerationOptions options = {});

/// log Z for the given volume, parameters and boundary condition.
double enumerate_partition(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc);

double expectation(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                   const Observable& obs);

double conditional_expectation(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                               const FrozenSites& frozen, const Observable& obs);

/// Law of the interface point on the grid T_L = {-1 - 1/(2L), ..., 1 + 1/(2L)}.
struct InterfaceLaw {
  std::vector<double> grid;
  std::vector<double> probabilities;
};

/// Requires a symmetric one-dimensional volume [-L, L], L >= 1, and a boundary
/// condition with opposite spins at the two outer neighbours.
InterfaceLaw interface_distribution(const Volume& volume, const ModelParams& params,
                                    const BoundaryCondition& bc = BoundaryCondition::dobrushin_1d());

/// max over sigma of |gamma_Lambda(sigma) - (gamma_Lambda gamma_Delta)(sigma)|,
/// where the inner kernel on the sub-interval Delta is rebuilt from scratch with
/// the configuration outside Delta written into its boundary condition.
double dlr_consistency_check(const Volume& volume, const Volume& subvolume, const ModelParams& params,
                             const BoundaryCondition& bc);

/// min over requested pairs of <s_x s_y> - <s_x><s_y>, <s_x> and <s_y>.
/// Requires a ferromagnetic coupling and non-negative boundary and field.
double gks_check(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                 std::span<const std::pair<Site, Site>> pairs);

struct FkgSandwich {
  double minus = 0.0;
  double omega = 0.0;
  double plus = 0.0;
  bool holds = false;
};

/// Checks <obs>^- <= <obs>^omega <= <obs>^+ for an increasing observable.
/// Monotonicity of the observable is verified exhaustively first.
FkgSandwich fkg_sandwich_check(const Volume& volume, const ModelParams& params, const Observable& increasing,
                               const BoundaryCondition& omega);

struct PercusInequality {
  /// <sigma_x> on the row x2 = 0 under Dobrushin (+ above, - below) boundary.
  std::vector<double> dobrushin_line;
  /// <sigma'_x> for the decoupled horizontal chain under Plus boundary.
  std::vector<double> chain;
  bool holds = false;
};

PercusInequality percus_inequality_check(const CouplingSpec& anisotropic, const Volume& box, double beta);

}  // namespace lrising::exact
