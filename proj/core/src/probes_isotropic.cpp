#include <cmath>
#include <vector>

#include "lrising/errors.hpp"
#include "lrising/numeric.hpp"
#include "lrising/probes.hpp"

namespace lrising::probes {

double shift_bound(double alpha, long L) {
  require(alpha > 2.0, "shift bound needs alpha > 2");
  require(L >= 0, "shift bound needs L >= 0");
  // With a = alpha - 1 and H(a, j) = sum_{m>=j} m^{-a}:
  //   sum_{x=0}^{L} H(a, L+1-x) = sum_{m<=L+1} m^{1-a} + (L+1) H(a, L+2)
  //   sum_{x=0}^{L} H(a, L+1+x) = sum_{m=L+1}^{2L+1} (m-L) m^{-a} + (L+1) H(a, 2L+2)
  const double a = alpha - 1.0;
  const double l1 = static_cast<double>(L + 1);
  double near = 0.0;
  for (long m = L + 1; m >= 1; --m) near += std::pow(double(m), 1.0 - a);
  double far = 0.0;
  for (long m = 2 * L + 1; m >= L + 1; --m) far += double(m - L) * std::pow(double(m), -a);
  return near + l1 * hurwitz_zeta(a, double(L + 2)) + far + l1 * hurwitz_zeta(a, double(2 * L + 2));
}

ShiftEnergy dobrushin_shift_energy(double alpha, std::span<const long> lengths) {
  require(lengths.size() >= 4, "shift energy fit needs at least four lengths");
  ShiftEnergy out;
  std::vector<double> x;
  for (long L : lengths) {
    require(L >= 1, "lengths must be positive");
    out.lengths.push_back(L);
    out.values.push_back(shift_bound(alpha, L));
    x.push_back(double(L));
  }
  out.fit = fit_power_with_offset(x, out.values);
  return out;
}

StepEnergy gs_step_energy(double alpha, long R) {
  require(alpha > 2.0, "ground-state step energy needs alpha > 2");
  require(R >= 1 && R <= 4096, "cutoff radius must lie in [1, 4096]");
  const long w = 2 * R + 1;
  // J at displacement (d1, d2) with 0 <= d1 <= 2R, 0 <= d2 <= R.
  std::vector<double> table(static_cast<std::size_t>(w * (R + 1)), 0.0);
  for (long d2 = 0; d2 <= R; ++d2)
    for (long d1 = 0; d1 < w; ++d1)
      if (d1 || d2) table[static_cast<std::size_t>(d2 * w + d1)] = std::pow(double(d1 * d1 + d2 * d2), -alpha / 2.0);
  auto J = [&](long d1, long d2) { return table[static_cast<std::size_t>(std::abs(d2) * w + std::abs(d1))]; };

  // A0 = {(k, 0) : k <= 0}; A+ = rows x2 >= 1 plus (i, 0), i > 0; A- = rows x2 <= -1.
  double upper = 0.0, lower = 0.0, line = 0.0;
  for (long k = -R; k <= 0; ++k) {
    for (long x2 = 1; x2 <= R; ++x2)
      for (long x1 = -R; x1 <= R; ++x1) {
        upper += J(x1 - k, x2);
        lower += J(x1 - k, -x2);
      }
    for (long i = 1; i <= R; ++i) line += J(i - k, 0);
  }
  StepEnergy out;
  out.value = 2.0 * std::abs((upper + line) - lower);
  out.reflection_residual = std::abs(upper - lower);
  out.half_line_term = 2.0 * line;
  out.limit = 2.0 * riemann_zeta(alpha - 1.0);
  // Each missing distance d > R occurs at most d times.
  out.tail_bound = 2.0 * tail_coupling_sum(alpha - 1.0, R);
  return out;
}

}  // namespace lrising::probes
