#include "lrising/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "lrising/errors.hpp"

namespace lrising {
namespace {

int parity_sign(long y) { return (y % 2 == 0) ? 1 : -1; }

Segment slice(const Segment& s, long lo, long hi) {
  Segment out = s;
  out.lo = std::max(s.lo, lo);
  out.hi = std::min(s.hi, hi);
  if (s.fill == Fill::Pattern) {
    out.pattern.assign(s.pattern.begin() + (out.lo - s.lo), s.pattern.begin() + (out.hi - s.lo) + 1);
  }
  return out;
}

void validate_segments(const std::vector<Segment>& segments) {
  require(!segments.empty(), "boundary condition needs at least one segment");
  require(segments.front().lo == kNegativeInfinity, "boundary segments must start at -infinity");
  require(segments.back().hi == kPositiveInfinity, "boundary segments must end at +infinity");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    require(s.lo <= s.hi, "boundary segment has an empty range");
    if (i > 0) require(segments[i - 1].hi != kPositiveInfinity && segments[i - 1].hi + 1 == s.lo,
                       "boundary segments must be contiguous and ordered");
    require(s.sign >= -1 && s.sign <= 1, "boundary sign must be -1, 0 or +1");
    if (s.fill == Fill::Pattern) {
      require(s.lo != kNegativeInfinity && s.hi != kPositiveInfinity, "pattern segments must be finite");
      require(static_cast<long>(s.pattern.size()) == s.hi - s.lo + 1, "pattern length must match its range");
      for (Spin v : s.pattern) require(v == 1 || v == -1 || v == 0, "pattern spins must be -1, 0 or +1");
    }
  }
}

}  // namespace

int Segment::spin_at(long y) const {
  switch (fill) {
    case Fill::Constant:
      return sign;
    case Fill::Alternating:
      return sign * parity_sign(y);
    case Fill::Pattern:
      return pattern[static_cast<std::size_t>(y - lo)];
  }
  return 0;
}

BoundaryCondition::BoundaryCondition(Rule rule, std::string name) : rule_(std::move(rule)), name_(std::move(name)) {}

BoundaryCondition BoundaryCondition::uniform(int sign) {
  require(sign >= -1 && sign <= 1, "uniform boundary sign must be -1, 0 or +1");
  return BoundaryCondition(sign, sign > 0 ? "plus" : (sign < 0 ? "minus" : "free"));
}
BoundaryCondition BoundaryCondition::plus() { return uniform(1); }
BoundaryCondition BoundaryCondition::minus() { return uniform(-1); }
BoundaryCondition BoundaryCondition::free() { return uniform(0); }

BoundaryCondition BoundaryCondition::alternating() {
  return from_segments({Segment{kNegativeInfinity, kPositiveInfinity, Fill::Alternating, 1, {}}}, "alternating");
}

BoundaryCondition BoundaryCondition::dobrushin_1d(long split) {
  return from_segments({Segment{kNegativeInfinity, split - 1, Fill::Constant, -1, {}},
                        Segment{split, kPositiveInfinity, Fill::Constant, 1, {}}},
                       "dobrushin");
}

BoundaryCondition BoundaryCondition::dobrushin_2d(long height) {
  return BoundaryCondition(HalfPlane{1, -1, height}, "dobrushin2d");
}

BoundaryCondition BoundaryCondition::left_neighborhood(int sign, long annulus_end, long alternating_half_width) {
  require(sign == 1 || sign == -1, "neighbourhood sign must be +1 or -1");
  require(alternating_half_width >= 1 && annulus_end > alternating_half_width,
          "left neighbourhood needs 1 <= L < N");
  return from_segments(
      {Segment{kNegativeInfinity, -annulus_end - 1, Fill::Constant, 1, {}},
       Segment{-annulus_end, -alternating_half_width - 1, Fill::Constant, sign, {}},
       Segment{-alternating_half_width, -1, Fill::Alternating, 1, {}},
       Segment{0, kPositiveInfinity, Fill::Constant, 1, {}}},
      sign > 0 ? "left_neighborhood_plus" : "left_neighborhood_minus");
}

BoundaryCondition BoundaryCondition::frozen_interval(long lo, long hi, int sign) {
  require(lo <= hi, "frozen interval must be non-empty");
  return from_segments({Segment{kNegativeInfinity, lo - 1, Fill::Constant, 1, {}},
                        Segment{lo, hi, Fill::Constant, sign, {}},
                        Segment{hi + 1, kPositiveInfinity, Fill::Constant, 1, {}}},
                       "frozen_interval");
}

BoundaryCondition BoundaryCondition::from_segments(std::vector<Segment> segments, std::string name) {
  validate_segments(segments);
  return BoundaryCondition(std::move(segments), std::move(name));
}

int BoundaryCondition::dimension() const {
  if (is_uniform()) return 0;
  return segments() ? 1 : 2;
}

int BoundaryCondition::uniform_sign() const {
  require(is_uniform(), "boundary condition is not uniform");
  return std::get<int>(rule_);
}

int BoundaryCondition::spin_at(Site y) const {
  if (auto* s = std::get_if<int>(&rule_)) return *s;
  if (auto* hp = half_plane()) return y.x2 >= hp->height ? hp->upper : hp->lower;
  for (const auto& seg : *segments())
    if (y.x1 >= seg.lo && y.x1 <= seg.hi) return seg.spin_at(y.x1);
  return 0;
}

BoundaryCondition BoundaryCondition::flipped() const {
  if (auto* s = std::get_if<int>(&rule_)) return uniform(-*s);
  if (auto* hp = half_plane()) return BoundaryCondition(HalfPlane{-hp->upper, -hp->lower, hp->height}, name_ + "_flipped");
  auto segs = *segments();
  for (auto& seg : segs) {
    seg.sign = -seg.sign;
    for (auto& v : seg.pattern) v = static_cast<Spin>(-v);
  }
  return BoundaryCondition(std::move(segs), name_ + "_flipped");
}

BoundaryCondition BoundaryCondition::with_pattern(long lo, std::span<const Spin> spins) const {
  require(!spins.empty(), "with_pattern: empty pattern");
  require(!half_plane(), "with_pattern: only one-dimensional boundary conditions");
  const long hi = lo + static_cast<long>(spins.size()) - 1;
  std::vector<Segment> base;
  if (auto* s = std::get_if<int>(&rule_))
    base.push_back(Segment{kNegativeInfinity, kPositiveInfinity, Fill::Constant, *s, {}});
  else
    base = *segments();

  std::vector<Segment> out;
  for (const auto& seg : base) {
    if (seg.hi < lo || seg.lo > hi) {
      out.push_back(seg);
      continue;
    }
    if (seg.lo < lo) out.push_back(slice(seg, seg.lo, lo - 1));
    if (out.empty() || out.back().hi != hi)
      out.push_back(Segment{lo, hi, Fill::Pattern, 1, std::vector<Spin>(spins.begin(), spins.end())});
    if (seg.hi > hi) out.push_back(slice(seg, hi + 1, seg.hi));
  }
  return from_segments(std::move(out), name_ + "+pattern");
}

bool BoundaryCondition::is_nonnegative_outside(const Volume& volume) const {
  if (auto* s = std::get_if<int>(&rule_)) return *s >= 0;
  if (auto* hp = half_plane()) return hp->upper >= 0 && hp->lower >= 0;
  for (const auto& seg : *segments()) {
    auto check = [&](long a, long b) {
      if (a > b) return true;
      if (seg.fill == Fill::Constant) return seg.sign >= 0;
      if (seg.fill == Fill::Alternating) return seg.sign == 0;
      for (long y = a; y <= b; ++y)
        if (seg.spin_at(y) < 0) return false;
      return true;
    };
    if (!check(seg.lo, std::min(seg.hi, volume.lo() - 1))) return false;
    if (!check(std::max(seg.lo, volume.hi() + 1), seg.hi)) return false;
  }
  return true;
}

namespace {

// Contribution of the exterior piece [a, b] of a segment to the field at x.
double segment_piece_field(const CouplingSpec& spec, const Segment& seg, long a, long b, long x, bool left,
                           long crossover) {
  if (a > b) return 0.0;
  if (seg.fill == Fill::Pattern) {
    double sum = 0.0;
    for (long y = a; y <= b; ++y) {
      const int w = seg.spin_at(y);
      if (w != 0) sum += w * coupling_at(spec, y - x, 0);
    }
    return sum;
  }
  if (seg.sign == 0) return 0.0;
  // Distances from x covered by the piece; -1 encodes an infinite far end.
  long k0, k1;
  if (left) {
    k0 = x - b;
    k1 = (a == kNegativeInfinity) ? -1 : x - a;
  } else {
    k0 = a - x;
    k1 = (b == kPositiveInfinity) ? -1 : b - x;
  }
  if (seg.fill == Fill::Constant) return seg.sign * coupling_range_1d(spec, k0, k1, crossover);
  return seg.sign * parity_sign(x) * alternating_coupling_range_1d(spec, k0, k1, crossover);
}

double boundary_field_1d(const Volume& vol, const CouplingSpec& spec, const BoundaryCondition& bc, long x,
                         long crossover) {
  if (bc.is_uniform()) {
    const int s = bc.uniform_sign();
    if (s == 0) return 0.0;
    return s * (coupling_tail_1d(spec, x - vol.lo() + 1, crossover) +
                coupling_tail_1d(spec, vol.hi() - x + 1, crossover));
  }
  require(bc.segments() != nullptr, "two-dimensional boundary condition on a one-dimensional volume");
  double field = 0.0;
  for (const auto& seg : *bc.segments()) {
    field += segment_piece_field(spec, seg, seg.lo, std::min(seg.hi, vol.lo() - 1), x, true, crossover);
    field += segment_piece_field(spec, seg, std::max(seg.lo, vol.hi() + 1), seg.hi, x, false, crossover);
  }
  return field;
}

double boundary_field_2d(const Volume& vol, const CouplingSpec& spec, const BoundaryCondition& bc, Site x,
                         long crossover) {
  require(bc.segments() == nullptr, "one-dimensional boundary condition on a two-dimensional volume");
  double full = 0.0;
  if (bc.is_uniform()) {
    const int s = bc.uniform_sign();
    if (s == 0) return 0.0;
    full = s * total_coupling(spec, 2, crossover);
  } else {
    const HalfPlane& hp = *bc.half_plane();
    // sum_r sgn_r R(r) with sgn_r = +1 on rows >= height collapses to a finite
    // band around x because R(r) = R(-r).
    const long d = x.x2 - hp.height;
    double band = row_coupling_sum(spec, 0, crossover);
    const long reach = d >= 0 ? d : -d - 1;
    for (long r = 1; r <= reach; ++r) band += 2.0 * row_coupling_sum(spec, r, crossover);
    if (d < 0) band = -band;
    full = 0.5 * (hp.upper + hp.lower) * total_coupling(spec, 2, crossover) + 0.5 * (hp.upper - hp.lower) * band;
  }
  double interior = 0.0;
  for (std::size_t j = 0; j < vol.size(); ++j) {
    const Site y = vol.site(j);
    if (y == x) continue;
    const int w = bc.spin_at(y);
    if (w != 0) interior += w * coupling_at(spec, y.x1 - x.x1, y.x2 - x.x2);
  }
  return full - interior;
}

}  // namespace

double boundary_field(const Volume& volume, const CouplingSpec& spec, const BoundaryCondition& bc, Site x,
                      TailPolicy tails) {
  require(volume.contains(x), "boundary_field: site must lie in the volume");
  spec.validate(volume.dimension());
  require(bc.dimension() == 0 || bc.dimension() == volume.dimension(),
          "boundary condition dimension does not match the volume");
  if (volume.dimension() == 1) return boundary_field_1d(volume, spec, bc, x.x1, tails.crossover);
  return boundary_field_2d(volume, spec, bc, x, tails.crossover);
}

}  // namespace lrising
