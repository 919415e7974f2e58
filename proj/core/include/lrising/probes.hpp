#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lrising/coupling.hpp"
#include "lrising/exact.hpp"
#include "lrising/mcmc.hpp"
#include "lrising/model.hpp"
#include "lrising/report.hpp"

namespace lrising::probes {

/// Sampler settings used when a probe runs with Method::Mcmc.
struct McmcSettings {
  std::size_t replicas = 8;
  std::size_t sweeps = 20000;
  std::size_t burn_in = 2000;
  mcmc::Rule rule = mcmc::Rule::HeatBath;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
};

/// Expectations of `observables` under `model` with frozen sites, either by
/// enumeration or by replica MCMC from mixed initials.
std::vector<Measurement> measure(const GibbsModel& model, const exact::FrozenSites& frozen,
                                 std::span<const Observable> observables, Method method,
                                 const McmcSettings& mcmc = {},
                                 const std::optional<Configuration>& matched_start = std::nullopt);

// ---- decimation -----------------------------------------------------------

/// ceil((multiplier * L)^{1/(alpha-1)}) for 1 < alpha < 2. multiplier = 1
/// gives N = L^{1/(alpha-1)}; multiplier = 2/(alpha-1) makes
/// 2 L N^{1-alpha} / (alpha-1) <= 1.
long annulus_size(double alpha, long L, double multiplier = 1.0);
/// 2 L N^{1-alpha} / (alpha - 1).
double annulus_bound(double alpha, long L, long N);

struct DecimationGeometry {
  /// Image half-width: image spins on [-L, L] \ {0} are fixed alternating.
  long L = 2;
  /// Pre-image extent: the volume is [-N, N]; 0 picks annulus_size(alpha, 2L).
  long N = 0;
  /// Sign of the fixed alternating image pattern at image site i: sign (-1)^i.
  int alternating_sign = 1;
};

/// Constrained pre-image model: even sites 2i with 0 < |i| <= L frozen to
/// sign (-1)^i, even sites with 2L < |x| <= N frozen to s, the exterior set to
/// s, and odd sites plus the origin free. Reports M+ and M- (the magnetization
/// at the origin for s = +1, -1) and gap = M+ - M-.
ProbeReport decimation_probe(double alpha, double beta, DecimationGeometry geometry = {},
                             Method method = Method::Exact, const McmcSettings& mcmc = {});

// ---- g-measure and wetting -------------------------------------------------

/// sum_{k=1}^{L} (-1)^k (k+x)^{-a} + s sum_{k=L+1}^{N} (k+x)^{-a}
///   + sum_{k>N} (k+x)^{-a} + sum_{k>=n} (k+x)^{-a}.
double past_field(int sign, double alpha, long L, long N, long n, double x);

struct ChainGeometry {
  long L = 2;
  long N = 16;
  /// The chain occupies [0, n].
  long n = 20;
};

/// Magnetization at 0 of the chain [0, n] whose past is the left
/// neighbourhood of the alternating configuration with annulus sign s; + to
/// the right. Reports M+, M-, gap and the past-field profiles.
ProbeReport g_probe(double alpha, double beta, ChainGeometry geometry = {}, Method method = Method::Exact,
                    const McmcSettings& mcmc = {});

struct WettingGeometry {
  long N = 8;
  long L = 4;
  /// Window length; 0 picks floor(L / 4) (at least 1).
  long window = 0;
};

/// Plus boundary on [-N - 2L, 2L - 1] with [-N, -1] frozen to -. Reports the
/// conditional profile, the window values left and right of the frozen
/// block, and the unconditioned magnetization at the origin.
ProbeReport wetting_probe(double alpha, double beta, WettingGeometry geometry = {}, Method method = Method::Exact,
                          const McmcSettings& mcmc = {});

// ---- isotropic 2d energetics -----------------------------------------------

/// D(L, a) = sum_{y1>L} sum_{x1=0}^{L} ((y1-x1)^{1-a} + (x1+y1)^{1-a}), a > 2.
double shift_bound(double alpha, long L);

struct ShiftEnergy {
  std::vector<long> lengths;
  std::vector<double> values;
  PowerFit fit;
};

ShiftEnergy dobrushin_shift_energy(double alpha, std::span<const long> lengths);

struct StepEnergy {
  /// 2 |S+ - S-| with all sums restricted to the box [-R, R]^2.
  double value = 0.0;
  /// Upper bound on limit - value.
  double tail_bound = 0.0;
  /// Exact limit 2 zeta(alpha - 1).
  double limit = 0.0;
  /// |upper-half-plane part of S+ - its mirror in S-|; zero by symmetry.
  double reflection_residual = 0.0;
  /// Twice the surviving half-line/half-line sum.
  double half_line_term = 0.0;
};

/// Ground-state step energy for J = |x - y|^{-alpha} on Z^2, truncated to radius R.
StepEnergy gs_step_energy(double alpha, long R);

// ---- anisotropic 2d: duplicate variables ----------------------------------

enum class DuplicateKind { SS, TT, ST };

struct DuplicateTerm {
  /// Variable indices (positions in PercusTransform::sites).
  std::size_t u = 0;
  std::size_t v = 0;
  DuplicateKind kind = DuplicateKind::SS;
  double coefficient = 0.0;
};

/// -H(sigma) - H'(sigma') rewritten in s = sigma + sigma-bar (rows x2 > 0),
/// s = sigma + sigma' (row 0) and the matching t variables:
///   sum_terms c x_u y_v + sum_u (a_u s_u + b_u t_u) + constant.
/// Diagonal SS terms (u == v) multiply s_u^2.
struct PercusTransform {
  Volume box = Volume::box(1);
  /// Box indices of the upper rows and row 0, in canonical order.
  std::vector<std::size_t> sites;
  std::vector<DuplicateTerm> terms;
  std::vector<double> s_field;
  std::vector<double> t_field;
  double constant = 0.0;
  /// Cases (out of 16) satisfying each pair identity.
  int identity_cases_direct = 0;
  int identity_cases_cross = 0;
  double min_pair_coupling = 0.0;
  bool couplings_nonnegative = false;
  /// Max |transformed - original| over all joint states; only for boxes small enough to enumerate.
  std::optional<double> hamiltonian_deviation;
};

PercusTransform percus_transform(const CouplingSpec& anisotropic, const Volume& box);

/// Dobrushin(0) rigidity against the decoupled horizontal chain. The chain
/// side is always exact; the plane is enumerated or sampled.
ProbeReport rigidity_check(const CouplingSpec& anisotropic, double beta, long L, Method method = Method::Exact,
                           const McmcSettings& mcmc = {});

}  // namespace lrising::probes
