#include "lrising/contours.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "lrising/errors.hpp"
#include "lrising/model.hpp"
#include "lrising/rng.hpp"

namespace lrising::contours {
namespace {

struct OuterSpins {
  int left;
  int right;
};

OuterSpins outer_spins(const Volume& volume, const BoundaryCondition& bc) {
  require(volume.dimension() == 1, "contours are defined for one-dimensional volumes");
  const int left = bc.spin_at(Site{volume.lo() - 1, 0});
  const int right = bc.spin_at(Site{volume.hi() + 1, 0});
  require(left != 0 && right != 0, "contours need definite boundary spins next to the volume");
  return {left, right};
}

bool nested_in(const Triangle& inner, const Triangle& outer) {
  return outer.left < inner.left && inner.right < outer.right;
}

bool disjoint(const Triangle& a, const Triangle& b) { return a.right < b.left || b.right < a.left; }

// Ground state split at the interface, then every triangle flipped. No sign
// validation, so any laminar sub-family can be rebuilt.
std::vector<Spin> build(const Volume& volume, OuterSpins outer, const std::optional<DualPoint>& interface,
                        std::span<const Triangle> tris) {
  const std::size_t n = volume.size();
  std::vector<Spin> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long x = volume.lo() + static_cast<long>(i);
    s[i] = static_cast<Spin>(interface && x > interface->k ? outer.right : outer.left);
  }
  for (const auto& t : tris)
    for (long x = t.left.k + 1; x <= t.right.k; ++x) {
      auto& v = s[static_cast<std::size_t>(x - volume.lo())];
      v = static_cast<Spin>(-v);
    }
  return s;
}

long length_of(const std::vector<Triangle>& members) {
  long total = 0;
  for (const auto& t : members) total += t.length();
  return total;
}

}  // namespace

long Contour::length() const { return length_of(members); }

std::vector<DualPoint> spin_flip_points(const Volume& volume, std::span<const Spin> spins,
                                        const BoundaryCondition& bc) {
  const auto outer = outer_spins(volume, bc);
  require(spins.size() == volume.size(), "configuration length does not match the volume");
  std::vector<DualPoint> points;
  int prev = outer.left;
  for (std::size_t i = 0; i <= spins.size(); ++i) {
    const int cur = i < spins.size() ? spins[i] : outer.right;
    if (cur != prev) points.push_back(DualPoint{volume.lo() - 1 + static_cast<long>(i)});
    prev = cur;
  }
  return points;
}

TriangleFamily triangles(const Volume& volume, std::span<const Spin> spins, const BoundaryCondition& bc) {
  auto points = spin_flip_points(volume, spins, bc);
  // Mirror image of the point set about the volume centre (k -> lo + hi - 1 - k).
  std::vector<long> direct, mirrored;
  for (const auto& p : points) direct.push_back(p.k);
  for (auto it = points.rbegin(); it != points.rend(); ++it) mirrored.push_back(volume.lo() + volume.hi() - 1 - it->k);
  const bool rightmost = mirrored < direct;
  std::vector<Triangle> extracted;
  while (points.size() >= 2) {
    std::size_t best = rightmost ? points.size() - 2 : 0;
    for (std::size_t step = 1; step + 1 < points.size(); ++step) {
      const std::size_t j = rightmost ? points.size() - 2 - step : step;
      if (points[j + 1].k - points[j].k < points[best + 1].k - points[best].k) best = j;
    }
    const DualPoint a = points[best], b = points[best + 1];
    extracted.push_back(Triangle{a, b, spins[static_cast<std::size_t>(a.k + 1 - volume.lo())]});
    points.erase(points.begin() + static_cast<long>(best), points.begin() + static_cast<long>(best) + 2);
  }
  TriangleFamily family;
  family.triangles.assign(extracted.rbegin(), extracted.rend());
  if (!points.empty()) family.interface = points.front();
  return family;
}

TriangleFamily triangles(const Volume& volume, const Configuration& sigma, const BoundaryCondition& bc) {
  return triangles(volume, sigma.spins(), bc);
}

DualPoint interface_point(const Volume& volume, std::span<const Spin> spins, const BoundaryCondition& bc) {
  const auto outer = outer_spins(volume, bc);
  require(outer.left != outer.right, "interface point needs opposite boundary spins (odd flip count)");
  return *triangles(volume, spins, bc).interface;
}

std::size_t interface_grid_index(const Volume& volume, DualPoint point) {
  require(point.k >= volume.lo() - 1 && point.k <= volume.hi(), "dual point outside the volume");
  return static_cast<std::size_t>(point.k - (volume.lo() - 1));
}

Configuration reconstruct(const TriangleFamily& family, const BoundaryCondition& bc, const Volume& volume) {
  const auto outer = outer_spins(volume, bc);
  require(family.interface.has_value() == (outer.left != outer.right),
          "interface point present iff the boundary spins differ");
  std::vector<long> endpoints;
  auto in_range = [&](DualPoint p) { return p.k >= volume.lo() - 1 && p.k <= volume.hi(); };
  if (family.interface) {
    require(in_range(*family.interface), "interface point outside the volume");
    endpoints.push_back(family.interface->k);
  }
  const auto& tris = family.triangles;
  for (std::size_t a = 0; a < tris.size(); ++a) {
    const auto& t = tris[a];
    require(t.left < t.right, "triangle endpoints out of order");
    require(in_range(t.left) && in_range(t.right), "triangle endpoint outside the volume");
    require(t.sign == 1 || t.sign == -1, "triangle sign must be +1 or -1");
    endpoints.push_back(t.left.k);
    endpoints.push_back(t.right.k);
    if (family.interface)
      require(!(t.left < *family.interface && *family.interface < t.right), "interface point inside a triangle");
    for (std::size_t b = a + 1; b < tris.size(); ++b)
      require(disjoint(t, tris[b]) || nested_in(t, tris[b]) || nested_in(tris[b], t), "triangles cross");
  }
  std::sort(endpoints.begin(), endpoints.end());
  require(std::adjacent_find(endpoints.begin(), endpoints.end()) == endpoints.end(), "triangles share an endpoint");

  auto spins = build(volume, outer, family.interface, tris);
  for (const auto& t : tris)
    require(spins[static_cast<std::size_t>(t.left.k + 1 - volume.lo())] == t.sign,
            "triangle sign inconsistent with the family");
  return Configuration(std::move(spins));
}

long distance(const Triangle& a, const Triangle& b) {
  if (a.right < b.left) return b.left.k - a.right.k;
  if (b.right < a.left) return a.left.k - b.right.k;
  return 0;
}

long distance(const Contour& a, const Contour& b) {
  long d = std::numeric_limits<long>::max();
  for (const auto& s : a.members)
    for (const auto& t : b.members) d = std::min(d, distance(s, t));
  return d;
}

namespace {

bool too_close(const Contour& a, const Contour& b, double c, double delta) {
  const double bound = c * std::pow(static_cast<double>(std::min(a.length(), b.length())), delta);
  return static_cast<double>(distance(a, b)) <= bound;
}

}  // namespace

ContourFamily group_contours(const TriangleFamily& family, double c, double delta) {
  require(c > 0.0 && delta > 0.0, "separation constants must be positive");
  std::vector<Contour> clusters;
  for (const auto& t : family.triangles) clusters.push_back(Contour{{t}});
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j)
        if (too_close(clusters[i], clusters[j], c, delta)) {
          auto& dst = clusters[i].members;
          dst.insert(dst.end(), clusters[j].members.begin(), clusters[j].members.end());
          clusters.erase(clusters.begin() + static_cast<long>(j));
          merged = true;
        }
  }
  for (auto& g : clusters)
    std::sort(g.members.begin(), g.members.end(), [](const Triangle& a, const Triangle& b) { return a.left < b.left; });
  std::sort(clusters.begin(), clusters.end(),
            [](const Contour& a, const Contour& b) { return a.members.front().left < b.members.front().left; });
  return ContourFamily{std::move(clusters)};
}

bool is_separated(const ContourFamily& family, double c, double delta) {
  const auto& g = family.contours;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (too_close(g[i], g[j], c, delta)) return false;
  return true;
}

std::size_t triangle_separation_violations(const TriangleFamily& family) {
  const auto& t = family.triangles;
  std::size_t count = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (distance(t[i], t[j]) <= std::min(t[i].length(), t[j].length())) ++count;
  return count;
}

double family_energy(const GibbsModel& model, const TriangleFamily& family, std::span<const std::size_t> subset) {
  const auto outer = outer_spins(model.volume(), model.boundary());
  std::vector<Triangle> chosen;
  for (std::size_t k : subset) {
    require(k < family.triangles.size(), "triangle index out of range");
    chosen.push_back(family.triangles[k]);
  }
  const auto with = build(model.volume(), outer, family.interface, chosen);
  const auto ground = build(model.volume(), outer, family.interface, {});
  return model.energy(with) - model.energy(ground);
}

double family_energy(const Volume& volume, const CouplingSpec& spec, const BoundaryCondition& bc,
                     const TriangleFamily& family, std::span<const std::size_t> subset) {
  return family_energy(GibbsModel(volume, ModelParams{1.0, spec, {}}, bc), family, subset);
}

double triangle_energy(const Triangle& triangle, const Volume& volume, const CouplingSpec& spec,
                       const BoundaryCondition& bc) {
  TriangleFamily single{{triangle}, std::nullopt};
  const auto outer = outer_spins(volume, bc);
  if (outer.left != outer.right) single.interface = DualPoint{volume.hi()};
  const std::size_t idx = 0;
  return family_energy(volume, spec, bc, single, std::span(&idx, 1));
}

double removal_cost(const GibbsModel& model, const TriangleFamily& family, std::size_t k) {
  require(k < family.triangles.size(), "removal_cost: index out of range");
  std::vector<std::size_t> tail(family.triangles.size() - k);
  std::iota(tail.begin(), tail.end(), k);
  return family_energy(model, family, tail) - family_energy(model, family, std::span(tail).subspan(1));
}

double removal_cost(const TriangleFamily& family, std::size_t k, const Volume& volume, const CouplingSpec& spec,
                    const BoundaryCondition& bc) {
  return removal_cost(GibbsModel(volume, ModelParams{1.0, spec, {}}, bc), family, k);
}

double droplet_energy(const CouplingSpec& spec, std::span<const long> flipped) {
  require(spec.get_if<PowerLaw>() || spec.get_if<NearestNeighbor>(), "droplet energy needs a 1d coupling");
  const double total = 2.0 * coupling_tail_1d(spec, 1);
  double energy = 0.0;
  for (long x : flipped) {
    double inside = 0.0;
    for (long y : flipped)
      if (y != x) inside += coupling_at(spec, y - x, 0);
    energy += total - inside;
  }
  return 2.0 * energy;
}

std::vector<long> flipped_sites(std::span<const Contour> contours) {
  std::set<long> odd;
  for (const auto& g : contours)
    for (const auto& t : g.members)
      for (long x = t.left.k + 1; x <= t.right.k; ++x)
        if (!odd.erase(x)) odd.insert(x);
  return {odd.begin(), odd.end()};
}

QuasiAdditivity quasi_additivity_check(const ContourFamily& family, const CouplingSpec& spec, double zeta) {
  require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0, 1)");
  const auto& g = family.contours;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      for (const auto& s : g[i].members)
        for (const auto& t : g[j].members) require(disjoint(s, t), "contours must be mutually external");

  QuasiAdditivity r;
  r.min_slack = std::numeric_limits<double>::infinity();
  const double whole = droplet_energy(spec, flipped_sites(g));
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<Contour> rest;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (j != i) rest.push_back(g[j]);
    const double slack = whole - zeta * droplet_energy(spec, flipped_sites(std::span(&g[i], 1))) -
                         droplet_energy(spec, flipped_sites(rest));
    r.min_slack = std::min(r.min_slack, slack);
    ++r.tested;
    if (slack >= 0.0) ++r.satisfied;
  }
  if (g.empty()) r.min_slack = 0.0;
  return r;
}

ContourFamily random_separated_family(std::uint64_t seed, std::size_t count, long max_length, double c,
                                      double delta) {
  require(max_length >= 1, "max_length must be positive");
  CounterRng rng(seed);
  const long min_gap = static_cast<long>(std::floor(c * std::pow(static_cast<double>(max_length), delta))) + 1;
  ContourFamily family;
  long pos = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const long len = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_length)));
    family.contours.push_back(Contour{{Triangle{DualPoint{pos}, DualPoint{pos + len}, -1}}});
    pos += len + min_gap + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_length)));
  }
  return family;
}

double kappa(double alpha) {
  require(alpha > 1.0 && alpha <= 2.0, "kappa needs 1 < alpha <= 2");
  return 2.0 * (3.0 - std::pow(2.0, 3.0 - alpha));
}

double alpha_star() { return 3.0 - std::log2(3.0); }

double peierls_entropy_bound(double beta) {
  require(beta > std::log(3.0) / 2.0, "Peierls series diverges for beta <= ln(3)/2");
  const double x = 3.0 * std::exp(-2.0 * beta);
  return x / ((1.0 - x) * (1.0 - x));
}

double peierls_series(double beta, long terms) {
  require(beta > std::log(3.0) / 2.0, "Peierls series diverges for beta <= ln(3)/2");
  const double x = 3.0 * std::exp(-2.0 * beta);
  double sum = 0.0, power = 1.0;
  for (long l = 1; l <= terms; ++l) {
    power *= x;
    sum += static_cast<double>(l) * power;
  }
  return sum;
}

PowerFit landau_fit(double alpha, std::span<const long> lengths) {
  require(alpha > 1.0 && alpha <= 2.0, "Landau fit needs 1 < alpha <= 2");
  require(lengths.size() >= 4, "Landau fit needs at least four lengths");
  std::vector<double> x, y;
  const CouplingSpec spec = PowerLaw{1.0, alpha, {}};
  for (long L : lengths) {
    x.push_back(static_cast<double>(L));
    y.push_back(excess_energy(Volume::line(L), spec));
  }
  return fit_power_with_offset(x, y);
}

double landau_exponent_fit(double alpha, std::span<const long> lengths) {
  return landau_fit(alpha, lengths).exponent;
}

std::string write_configuration(const Volume& volume, const Configuration& sigma, const std::string& bc_name) {
  require(volume.dimension() == 1, "text format covers one-dimensional configurations");
  validate_configuration(volume, sigma);
  std::ostringstream out;
  if (!bc_name.empty()) out << "bc=" << bc_name << '\n';
  for (std::size_t i = 0; i < sigma.size(); ++i)
    out << volume.site(i).x1 << ':' << (sigma[i] > 0 ? "+1" : "-1") << '\n';
  return out.str();
}

ParsedConfiguration read_configuration(const std::string& text) {
  std::istringstream in(text);
  std::string line, bc_name;
  std::vector<std::pair<long, Spin>> entries;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ContractError("configuration line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("bc=", 0) == 0) {
      bc_name = line.substr(3);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected site:spin");
    long site = 0;
    int spin = 0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + colon, site);
    if (r1.ec != std::errc{} || r1.ptr != b + colon) fail("bad site");
    const char* s = b + colon + 1;
    if (*s == '+') ++s;
    auto r2 = std::from_chars(s, b + line.size(), spin);
    if (r2.ec != std::errc{} || r2.ptr != b + line.size() || (spin != 1 && spin != -1)) fail("spin must be +1 or -1");
    entries.emplace_back(site, static_cast<Spin>(spin));
  }
  if (entries.empty()) throw ContractError("configuration has no sites");
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].first != entries[i - 1].first + 1)
      throw ContractError("configuration sites must form a contiguous interval without repeats");
  std::vector<Spin> spins;
  for (auto& e : entries) spins.push_back(e.second);
  return {Volume::interval(entries.front().first, entries.back().first), Configuration(std::move(spins)), bc_name};
}

std::string write_family(const TriangleFamily& family) {
  std::ostringstream out;
  char buf[96];
  if (family.interface) {
    std::snprintf(buf, sizeof buf, "interface=%.1f\n", family.interface->position());
    out << buf;
  }
  for (const auto& t : family.triangles) {
    std::snprintf(buf, sizeof buf, "%.1f,%.1f,%+d\n", t.left.position(), t.right.position(), t.sign);
    out << buf;
  }
  return out.str();
}

namespace {

// Parses "k.5" into the dual point k + 1/2.
DualPoint parse_half(const std::string& field, std::size_t line_no) {
  const auto dot = field.find('.');
  long k = 0;
  const char* b = field.data();
  const char* e = b + (dot == std::string::npos ? field.size() : dot);
  auto r = std::from_chars(b, e, k);
  if (r.ec != std::errc{} || r.ptr != e || dot == std::string::npos || field.substr(dot) != ".5")
    throw ContractError("family line " + std::to_string(line_no) + ": expected a half-integer, got '" + field + "'");
  // "-3.5" means k = -4.
  if (field[0] == '-') --k;
  return DualPoint{k};
}

}  // namespace

TriangleFamily read_family(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  TriangleFamily family;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("interface=", 0) == 0) {
      family.interface = parse_half(line.substr(10), line_no);
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw ContractError("family line " + std::to_string(line_no) + ": expected left,right,sign");
    Triangle t;
    t.left = parse_half(line.substr(0, c1), line_no);
    t.right = parse_half(line.substr(c1 + 1, c2 - c1 - 1), line_no);
    const std::string sign = line.substr(c2 + 1);
    if (sign == "+1" || sign == "1")
      t.sign = 1;
    else if (sign == "-1")
      t.sign = -1;
    else
      throw ContractError("family line " + std::to_string(line_no) + ": sign must be +1 or -1");
    if (t.right.k <= t.left.k) throw ContractError("family line " + std::to_string(line_no) + ": empty triangle");
    family.triangles.push_back(t);
  }
  return family;
}

}  // namespace lrising::contours
