#include "lrising/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

#include "lrising/errors.hpp"

namespace lrising {
namespace {

// Remainder sum_{k>=0} (a + k)^{-s} for a beyond the crossover.
double euler_maclaurin_tail(double s, double a) {
  const double a_s = std::pow(a, -s);
  const double inv_a = 1.0 / a;
  const double inv_a2 = inv_a * inv_a;
  double tail = a * a_s / (s - 1.0) + 0.5 * a_s;
  tail += s * a_s * inv_a / 12.0;
  tail -= s * (s + 1.0) * (s + 2.0) * a_s * inv_a * inv_a2 / 720.0;
  tail += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * a_s * inv_a * inv_a2 * inv_a2 / 30240.0;
  return tail;
}

using CacheKey = std::tuple<double, double, long>;

std::map<CacheKey, double>& hurwitz_cache() {
  thread_local std::map<CacheKey, double> cache;
  return cache;
}

std::map<CacheKey, double>& row_cache() {
  thread_local std::map<CacheKey, double> cache;
  return cache;
}

}  // namespace

double hurwitz_zeta(double s, double q, long crossover) {
  require(s > 1.0, "hurwitz_zeta: s must exceed 1 (series diverges)");
  require(q > 0.0, "hurwitz_zeta: q must be positive");
  require(crossover >= 1, "hurwitz_zeta: crossover must be positive");

  auto& cache = hurwitz_cache();
  const CacheKey key{s, q, crossover};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const long explicit_terms =
      std::max(0L, static_cast<long>(std::ceil(static_cast<double>(crossover) - q)));
  const double a = q + static_cast<double>(explicit_terms);
  double sum = euler_maclaurin_tail(s, a);
  for (long k = explicit_terms - 1; k >= 0; --k) sum += std::pow(q + static_cast<double>(k), -s);

  if (cache.size() > 200000) cache.clear();
  cache.emplace(key, sum);
  return sum;
}

double tail_coupling_sum(double alpha, long n, long crossover) {
  require(alpha > 1.0, "tail_coupling_sum: alpha must exceed 1 (divergent tail)");
  require(n >= 0, "tail_coupling_sum: n must be non-negative");
  return hurwitz_zeta(alpha, static_cast<double>(n) + 1.0, crossover);
}

double alternating_tail_sum(double alpha, long k0, long crossover) {
  require(alpha > 1.0, "alternating_tail_sum: alpha must exceed 1");
  require(k0 >= 1, "alternating_tail_sum: k0 must be at least 1");
  const double even = hurwitz_zeta(alpha, 0.5 * static_cast<double>(k0), crossover);
  const double odd = hurwitz_zeta(alpha, 0.5 * static_cast<double>(k0 + 1), crossover);
  const double sign = (k0 % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(2.0, -alpha) * (even - odd);
}

double riemann_zeta(double s, long crossover) { return hurwitz_zeta(s, 1.0, crossover); }

double dirichlet_beta(double s, long crossover) {
  return std::pow(4.0, -s) * (hurwitz_zeta(s, 0.25, crossover) - hurwitz_zeta(s, 0.75, crossover));
}

double lattice_power_sum(double alpha, long crossover) {
  require(alpha > 2.0, "lattice_power_sum: alpha must exceed 2");
  const double s = 0.5 * alpha;
  return 4.0 * riemann_zeta(s, crossover) * dirichlet_beta(s, crossover);
}

double row_power_sum(double alpha, long r, long crossover) {
  require(alpha > 1.0, "row_power_sum: alpha must exceed 1");
  r = std::labs(r);
  if (r == 0) return 2.0 * riemann_zeta(alpha, crossover);

  auto& cache = row_cache();
  const CacheKey key{alpha, static_cast<double>(r), crossover};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const double r2 = static_cast<double>(r) * static_cast<double>(r);
  const long cutoff = std::max(crossover, 8 * r);

  // Binomial expansion (1 + r^2/m^2)^{-alpha/2} for m >= cutoff; ratio <= 1/64.
  double tail = 0.0;
  double coefficient = 1.0;
  double r_power = 1.0;
  for (int j = 0; j < 40; ++j) {
    if (j > 0) {
      coefficient *= (-0.5 * alpha - static_cast<double>(j) + 1.0) / static_cast<double>(j);
      r_power *= r2;
    }
    const double term =
        coefficient * r_power * hurwitz_zeta(alpha + 2.0 * j, static_cast<double>(cutoff), crossover);
    tail += term;
    if (std::abs(term) < 1e-20 * std::abs(tail)) break;
  }

  double sum = tail;
  for (long m = cutoff - 1; m >= 1; --m) {
    const double md = static_cast<double>(m);
    sum += std::pow(md * md + r2, -0.5 * alpha);
  }
  const double result = std::pow(static_cast<double>(r), -alpha) + 2.0 * sum;
  if (cache.size() > 100000) cache.clear();
  cache.emplace(key, result);
  return result;
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "log_log_slope: need matching series of length >= 2");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "log_log_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct LinearSolution {
  double amplitude;
  double offset;
  double residual;
};

LinearSolution solve_for_exponent(std::span<const double> x, std::span<const double> y, double p) {
  const auto n = static_cast<double>(x.size());
  double su = 0, suu = 0, sy = 0, suy = 0, syy = 0;
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    u[i] = std::pow(x[i], p);
    su += u[i];
    suu += u[i] * u[i];
    sy += y[i];
    suy += u[i] * y[i];
    syy += y[i] * y[i];
  }
  const double det = n * suu - su * su;
  LinearSolution sol{0.0, sy / n, 0.0};
  if (std::abs(det) > 1e-14 * n * suu) {
    sol.amplitude = (n * suy - su * sy) / det;
    sol.offset = (sy - sol.amplitude * su) / n;
  }
  double res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = sol.amplitude * u[i] + sol.offset - y[i];
    res += e * e;
  }
  sol.residual = res / syy;
  return sol;
}

}  // namespace

PowerFit fit_power_with_offset(std::span<const double> x, std::span<const double> y, double lo, double hi) {
  require(x.size() == y.size() && x.size() >= 3, "fit_power_with_offset: need at least 3 points");
  require(lo < hi, "fit_power_with_offset: empty exponent bracket");
  for (double v : x) require(v > 0, "fit_power_with_offset: abscissae must be positive");

  constexpr int kGrid = 800;
  const double step = (hi - lo) / kGrid;
  int best = 0;
  double best_res = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double p = lo + step * i;
    if (std::abs(p) < 0.5 * step) continue;  // x^0 is collinear with the offset
    const double r = solve_for_exponent(x, y, p).residual;
    if (r < best_res) {
      best_res = r;
      best = i;
    }
  }

  double a = lo + step * std::max(0, best - 1);
  double b = lo + step * std::min(kGrid, best + 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = solve_for_exponent(x, y, c).residual;
  double fd = solve_for_exponent(x, y, d).residual;
  while (b - a > 1e-11) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = solve_for_exponent(x, y, c).residual;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = solve_for_exponent(x, y, d).residual;
    }
  }
  const double p = 0.5 * (a + b);
  const auto sol = solve_for_exponent(x, y, p);
  return PowerFit{p, sol.amplitude, sol.offset, sol.residual};
}

}  // namespace lrising
