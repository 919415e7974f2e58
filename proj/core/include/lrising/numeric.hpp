#pragma once

#include <cstddef>
#include <span>

namespace lrising {

/// Number of explicitly summed terms before the Euler-Maclaurin tail takes
/// over in all power sums below.
inline constexpr long kDefaultCrossover = 10000;

/// Hurwitz zeta H(s, q) = sum_{k>=0} (k + q)^{-s}, for s > 1 and q > 0.
///
/// Terms are summed explicitly (smallest first) until k + q reaches the
/// crossover, then the remainder is evaluated with the Euler-Maclaurin formula
/// through the f''' correction. Relative error is below 1e-12 for the default
/// crossover.
double hurwitz_zeta(double s, double q, long crossover = kDefaultCrossover);

/// sum_{k > n} k^{-alpha}. Throws ContractError for alpha <= 1.
double tail_coupling_sum(double alpha, long n, long crossover = kDefaultCrossover);

/// sum_{k >= k0} (-1)^k k^{-alpha}, k0 >= 1, alpha > 1.
double alternating_tail_sum(double alpha, long k0, long crossover = kDefaultCrossover);

/// Riemann zeta for s > 1.
double riemann_zeta(double s, long crossover = kDefaultCrossover);

/// Dirichlet beta function sum_{k>=0} (-1)^k (2k+1)^{-s}, s > 1.
double dirichlet_beta(double s, long crossover = kDefaultCrossover);

/// Square-lattice power sum sum_{z in Z^2, z != 0} |z|_2^{-alpha}, alpha > 2,
/// via the closed form 4 zeta(alpha/2) beta(alpha/2).
double lattice_power_sum(double alpha, long crossover = kDefaultCrossover);

/// Row sum sum_{m in Z} (m^2 + r^2)^{-alpha/2}, omitting m = 0 when r = 0.
double row_power_sum(double alpha, long r, long crossover = kDefaultCrossover);

/// Numerically stable log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

/// Ordinary least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct PowerFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double relative_residual = 0.0;
};

/// Least-squares fit of y = amplitude * x^exponent + offset. For each trial
/// exponent the linear coefficients are solved exactly; the exponent is found
/// by a grid scan over [lo, hi] followed by golden-section refinement.
PowerFit fit_power_with_offset(std::span<const double> x, std::span<const double> y,
                               double lo = -2.0, double hi = 2.0);

}  // namespace lrising
