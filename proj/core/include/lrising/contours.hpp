#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrising/boundary.hpp"
#include "lrising/coupling.hpp"
#include "lrising/lattice.hpp"
#include "lrising/model.hpp"
#include "lrising/numeric.hpp"

namespace lrising::contours {

/// The dual point k + 1/2, stored by its left neighbour k.
struct DualPoint {
  long k = 0;
  double position() const { return static_cast<double>(k) + 0.5; }
  auto operator<=>(const DualPoint&) const = default;
};

/// Pair of spin-flip points. Sites strictly inside are left.k + 1 .. right.k.
struct Triangle {
  DualPoint left;
  DualPoint right;
  /// Spin carried by the first inner site in the decomposed configuration.
  int sign = -1;

  long length() const { return right.k - left.k; }
  bool operator==(const Triangle&) const = default;
};

/// Triangles ordered by non-increasing length. Under a Dobrushin boundary
/// the unpaired flip point is kept as `interface`.
struct TriangleFamily {
  std::vector<Triangle> triangles;
  std::optional<DualPoint> interface;

  bool operator==(const TriangleFamily&) const = default;
};

struct Contour {
  std::vector<Triangle> members;
  long length() const;
};

struct ContourFamily {
  std::vector<Contour> contours;
};

/// All k + 1/2 with s_k s_{k+1} = -1, boundary spins included. The boundary
/// must give definite spins at both outer neighbours of the volume.
std::vector<DualPoint> spin_flip_points(const Volume& volume, std::span<const Spin> spins,
                                        const BoundaryCondition& bc);

/// Pairs flip points greedily: repeatedly the two neighbouring points (among
/// those still unpaired) with the smallest gap are joined into a triangle.
/// Pairs are non-crossing, so triangles are either disjoint or nested. An odd
/// point count leaves one point unpaired.
///
/// Ties go to the leftmost pair, unless the mirror image of the point set
/// about the volume centre is lexicographically smaller, in which case they go
/// to the rightmost pair. This makes the decomposition commute with the
/// reflection of the volume.
TriangleFamily triangles(const Volume& volume, std::span<const Spin> spins, const BoundaryCondition& bc);
TriangleFamily triangles(const Volume& volume, const Configuration& sigma, const BoundaryCondition& bc);

/// The unpaired flip point. Throws ContractError for an even flip count.
DualPoint interface_point(const Volume& volume, std::span<const Spin> spins, const BoundaryCondition& bc);

/// Index of the interface point on the grid T_L, i.e. k - (lo - 1).
std::size_t interface_grid_index(const Volume& volume, DualPoint point);

/// Rebuilds the configuration: start from the boundary's ground state (split
/// at the interface point if there is one) and flip the sites of every
/// triangle. Crossing triangles, shared endpoints, endpoints outside the
/// volume and inconsistent signs are rejected.
Configuration reconstruct(const TriangleFamily& family, const BoundaryCondition& bc, const Volume& volume);

/// Number of sites strictly between two triangles; 0 when nested.
long distance(const Triangle& a, const Triangle& b);
long distance(const Contour& a, const Contour& b);

/// Merges triangles into contours until every pair of contours satisfies
/// dist > C min(|G|, |G'|)^delta. The result is the least fixed point, so it
/// does not depend on the input order; contours come out sorted by their
/// leftmost endpoint.
ContourFamily group_contours(const TriangleFamily& family, double c = 1.0, double delta = 3.0);

bool is_separated(const ContourFamily& family, double c = 1.0, double delta = 3.0);

/// Pairs of triangles violating dist(T, T') > min(|T|, |T'|).
std::size_t triangle_separation_violations(const TriangleFamily& family);

/// H(configuration built from `subset`) - H(configuration built from no
/// triangles), on the finite volume with boundary `bc`.
double family_energy(const Volume& volume, const CouplingSpec& spec, const BoundaryCondition& bc,
                     const TriangleFamily& family, std::span<const std::size_t> subset);
/// Same, reusing a prebuilt model (its beta is ignored).
double family_energy(const GibbsModel& model, const TriangleFamily& family, std::span<const std::size_t> subset);

/// Energy of a single triangle against the ground state.
double triangle_energy(const Triangle& triangle, const Volume& volume, const CouplingSpec& spec,
                       const BoundaryCondition& bc);

/// H(T_k, ..., T_n) - H(T_{k+1}, ..., T_n), k zero-based.
double removal_cost(const TriangleFamily& family, std::size_t k, const Volume& volume, const CouplingSpec& spec,
                    const BoundaryCondition& bc);
double removal_cost(const GibbsModel& model, const TriangleFamily& family, std::size_t k);

/// Infinite-line energy of flipping the finite set `flipped` in a + sea:
/// 2 sum_{x in F} sum_{y not in F} J_xy. One-dimensional specs only.
double droplet_energy(const CouplingSpec& spec, std::span<const long> flipped);

/// Sites flipped an odd number of times by the triangles of the contours.
std::vector<long> flipped_sites(std::span<const Contour> contours);

struct QuasiAdditivity {
  double min_slack = 0.0;
  std::size_t tested = 0;
  std::size_t satisfied = 0;
  double fraction() const { return tested ? static_cast<double>(satisfied) / static_cast<double>(tested) : 1.0; }
};

/// For each choice of G0 among the contours: H(all) - zeta H(G0) - H(rest),
/// with infinite-line droplet energies. Contours must be mutually external
/// (no triangle of one nested inside a triangle of another).
QuasiAdditivity quasi_additivity_check(const ContourFamily& family, const CouplingSpec& spec, double zeta);

/// Random family of `count` single-triangle contours with lengths in
/// [1, max_length], placed left to right so that consecutive gaps exceed
/// C min(length)^delta.
ContourFamily random_separated_family(std::uint64_t seed, std::size_t count, long max_length, double c = 1.0,
                                      double delta = 3.0);

/// 2 (3 - 2^{3 - alpha}) for 1 < alpha <= 2.
double kappa(double alpha);
/// Root of kappa: 3 - log2(3).
double alpha_star();

/// sum_{l>=1} l 3^l e^{-2 beta l} = x / (1 - x)^2 with x = 3 e^{-2 beta};
/// requires beta > ln(3) / 2.
double peierls_entropy_bound(double beta);
double peierls_series(double beta, long terms);

/// Fit of the excess energy h_L over the given L values to A L^p + B; returns
/// the full fit (p is the exponent).
PowerFit landau_fit(double alpha, std::span<const long> lengths);
double landau_exponent_fit(double alpha, std::span<const long> lengths);

/// Line format: optional "bc=<name>" header, then one "site:spin" per line.
std::string write_configuration(const Volume& volume, const Configuration& sigma, const std::string& bc_name);
struct ParsedConfiguration {
  Volume volume;
  Configuration config;
  std::string bc_name;
};
ParsedConfiguration read_configuration(const std::string& text);

/// One "left,right,sign" line per triangle (half-integer endpoints), plus an
/// "interface=<x>" line when present.
std::string write_family(const TriangleFamily& family);
TriangleFamily read_family(const std::string& text);

}  // namespace lrising::contours
