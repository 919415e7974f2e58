#include "lrising/coupling.hpp"

#include <cmath>
#include <sstream>

#include "lrising/errors.hpp"

namespace lrising {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double vertical_at(const AnisotropicAxes& a, long d) {
  return std::visit(Overloaded{[d](const VerticalNearestNeighbor& v) { return d == 1 ? v.J : 0.0; },
                               [d](const VerticalPowerLaw& v) {
                                 return v.J * std::pow(static_cast<double>(d), -v.alpha);
                               }},
                    a.vertical);
}

}  // namespace

CouplingSpec::CouplingSpec(Variant v) : variant_(std::move(v)) {
  std::visit(Overloaded{[](const NearestNeighbor& c) { require(c.J >= 0, "coupling strength must be >= 0"); },
                        [](const PowerLaw& c) {
                          require(c.J >= 0, "coupling strength must be >= 0");
                          require(!c.j1 || *c.j1 >= 0, "J(1) must be >= 0");
                          require(c.alpha > 1.0, "power-law decay must exceed 1");
                        },
                        [](const IsotropicMixed& c) {
                          require(c.J_nn >= 0, "coupling strength must be >= 0");
                          require(c.alpha > 2.0, "isotropic 2d decay must exceed 2");
                        },
                        [](const AnisotropicAxes& c) {
                          require(c.J_h >= 0, "coupling strength must be >= 0");
                          require(c.alpha_h > 1.0, "horizontal decay must exceed 1");
                          if (auto* v = std::get_if<VerticalPowerLaw>(&c.vertical)) {
                            require(v->J >= 0, "coupling strength must be >= 0");
                            require(v->alpha > 1.0, "vertical decay must exceed 1");
                          } else {
                            require(std::get<VerticalNearestNeighbor>(c.vertical).J >= 0,
                                    "coupling strength must be >= 0");
                          }
                        }},
             variant_);
}

void CouplingSpec::validate(int dimension) const {
  require(dimension == 1 || dimension == 2, "dimension must be 1 or 2");
  std::visit(Overloaded{[](const NearestNeighbor&) {},
                        [dimension](const PowerLaw& c) {
                          require(c.alpha > dimension, "power-law decay must exceed the dimension");
                        },
                        [dimension](const IsotropicMixed&) {
                          require(dimension == 2, "isotropic mixed coupling is two-dimensional");
                        },
                        [dimension](const AnisotropicAxes&) {
                          require(dimension == 2, "anisotropic coupling is two-dimensional");
                        }},
             variant_);
}

std::string CouplingSpec::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const NearestNeighbor& c) { os << "nn(J=" << c.J << ")"; },
                        [&](const PowerLaw& c) {
                          os << "power_law(J=" << c.J << ",alpha=" << c.alpha;
                          if (c.j1) os << ",j1=" << *c.j1;
                          os << ")";
                        },
                        [&](const IsotropicMixed& c) {
                          os << "isotropic_mixed(J_nn=" << c.J_nn << ",alpha=" << c.alpha << ")";
                        },
                        [&](const AnisotropicAxes& c) {
                          os << "anisotropic(J_h=" << c.J_h << ",alpha_h=" << c.alpha_h << ",vertical=";
                          if (auto* v = std::get_if<VerticalPowerLaw>(&c.vertical))
                            os << "power_law(J=" << v->J << ",alpha=" << v->alpha << "))";
                          else
                            os << "nn(J=" << std::get<VerticalNearestNeighbor>(c.vertical).J << "))";
                        }},
             variant_);
  return os.str();
}

double coupling_at(const CouplingSpec& spec, long dx1, long dx2) {
  dx1 = std::labs(dx1);
  dx2 = std::labs(dx2);
  require(dx1 != 0 || dx2 != 0, "coupling_value: x and y must differ");
  const double r2 = static_cast<double>(dx1) * dx1 + static_cast<double>(dx2) * dx2;
  const bool adjacent = dx1 + dx2 == 1;
  return std::visit(Overloaded{[&](const NearestNeighbor& c) { return adjacent ? c.J : 0.0; },
                               [&](const PowerLaw& c) {
                                 if (adjacent && c.j1) return *c.j1;
                                 return c.J * std::pow(r2, -0.5 * c.alpha);
                               },
                               [&](const IsotropicMixed& c) {
                                 return (adjacent ? c.J_nn : 0.0) + std::pow(r2, -0.5 * c.alpha);
                               },
                               [&](const AnisotropicAxes& c) {
                                 if (dx2 == 0) return c.J_h * std::pow(static_cast<double>(dx1), -c.alpha_h);
                                 if (dx1 == 0) return vertical_at(c, dx2);
                                 return 0.0;
                               }},
                    spec.variant());
}

double coupling_value(const CouplingSpec& spec, Site x, Site y) {
  require(x != y, "coupling_value: x and y must differ");
  return coupling_at(spec, y.x1 - x.x1, y.x2 - x.x2);
}

double coupling_range_1d(const CouplingSpec& spec, long k0, long k1, long crossover) {
  require(k0 >= 1, "coupling range must start at distance >= 1");
  if (k1 >= 0 && k1 < k0) return 0.0;
  if (auto* nn = spec.get_if<NearestNeighbor>()) return k0 == 1 ? nn->J : 0.0;
  auto* pl = spec.get_if<PowerLaw>();
  require(pl != nullptr, "one-dimensional sums need a nearest-neighbour or power-law coupling");
  double sum = 0.0;
  long start = k0;
  if (k0 == 1 && pl->j1) {
    sum += *pl->j1;
    start = 2;
    if (k1 == 1) return sum;
  }
  // Short finite ranges are summed directly; long ones as a difference of tails.
  if (k1 >= 0 && k1 - start < 4096) {
    for (long k = k1; k >= start; --k) sum += pl->J * std::pow(static_cast<double>(k), -pl->alpha);
    return sum;
  }
  double tail = tail_coupling_sum(pl->alpha, start - 1, crossover);
  if (k1 >= 0) tail -= tail_coupling_sum(pl->alpha, k1, crossover);
  return sum + pl->J * tail;
}

double alternating_coupling_range_1d(const CouplingSpec& spec, long k0, long k1, long crossover) {
  require(k0 >= 1, "coupling range must start at distance >= 1");
  if (k1 >= 0 && k1 < k0) return 0.0;
  if (auto* nn = spec.get_if<NearestNeighbor>()) return k0 == 1 ? -nn->J : 0.0;
  auto* pl = spec.get_if<PowerLaw>();
  require(pl != nullptr, "one-dimensional sums need a nearest-neighbour or power-law coupling");
  double sum = 0.0;
  long start = k0;
  if (k0 == 1 && pl->j1) {
    sum -= *pl->j1;
    start = 2;
    if (k1 == 1) return sum;
  }
  if (k1 >= 0 && k1 - start < 4096) {
    for (long k = k1; k >= start; --k)
      sum += (k % 2 == 0 ? 1.0 : -1.0) * pl->J * std::pow(static_cast<double>(k), -pl->alpha);
    return sum;
  }
  double tail = alternating_tail_sum(pl->alpha, start, crossover);
  if (k1 >= 0) tail -= alternating_tail_sum(pl->alpha, k1 + 1, crossover);
  return sum + pl->J * tail;
}

double coupling_tail_1d(const CouplingSpec& spec, long k0, long crossover) {
  return coupling_range_1d(spec, k0, -1, crossover);
}

double alternating_coupling_tail_1d(const CouplingSpec& spec, long k0, long crossover) {
  return alternating_coupling_range_1d(spec, k0, -1, crossover);
}

double row_coupling_sum(const CouplingSpec& spec, long r, long crossover) {
  r = std::labs(r);
  return std::visit(
      Overloaded{[&](const NearestNeighbor& c) { return r == 0 ? 2.0 * c.J : (r == 1 ? c.J : 0.0); },
                 [&](const PowerLaw& c) {
                   double s = c.J * row_power_sum(c.alpha, r, crossover);
                   if (c.j1) {
                     const double delta = *c.j1 - c.J;
                     if (r == 0) s += 2.0 * delta;
                     if (r == 1) s += delta;
                   }
                   return s;
                 },
                 [&](const IsotropicMixed& c) {
                   double s = row_power_sum(c.alpha, r, crossover);
                   if (r == 0) s += 2.0 * c.J_nn;
                   if (r == 1) s += c.J_nn;
                   return s;
                 },
                 [&](const AnisotropicAxes& c) {
                   if (r == 0) return 2.0 * c.J_h * riemann_zeta(c.alpha_h, crossover);
                   return vertical_at(c, r);
                 }},
      spec.variant());
}

double total_coupling(const CouplingSpec& spec, int dimension, long crossover) {
  spec.validate(dimension);
  if (dimension == 1) return 2.0 * coupling_tail_1d(spec, 1, crossover);
  return std::visit(
      Overloaded{[](const NearestNeighbor& c) { return 4.0 * c.J; },
                 [&](const PowerLaw& c) {
                   double s = c.J * lattice_power_sum(c.alpha, crossover);
                   if (c.j1) s += 4.0 * (*c.j1 - c.J);
                   return s;
                 },
                 [&](const IsotropicMixed& c) { return 4.0 * c.J_nn + lattice_power_sum(c.alpha, crossover); },
                 [&](const AnisotropicAxes& c) {
                   double s = 2.0 * c.J_h * riemann_zeta(c.alpha_h, crossover);
                   if (auto* v = std::get_if<VerticalPowerLaw>(&c.vertical))
                     s += 2.0 * v->J * riemann_zeta(v->alpha, crossover);
                   else
                     s += 2.0 * std::get<VerticalNearestNeighbor>(c.vertical).J;
                   return s;
                 }},
      spec.variant());
}

}  // namespace lrising
