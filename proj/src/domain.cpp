#include "berglab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "berglab/error.hpp"

namespace berglab {

namespace {

constexpr double kOriginTolerance = 1e-300;

double component_distance(const BoundaryComponent& b, cplx z) {
  const double s = std::abs(z - b.circle.center);
  return b.kind == BoundaryComponent::Kind::Point ? s : std::abs(s - b.circle.radius);
}

cplx component_nearest(const BoundaryComponent& b, cplx z) {
  if (b.kind == BoundaryComponent::Kind::Point) return b.circle.center;
  const cplx v = z - b.circle.center;
  const double s = std::abs(v);
  if (s == 0.0) return b.circle.center + b.circle.radius;
  return b.circle.center + v * (b.circle.radius / s);
}

}  // namespace

PlanarDomain::PlanarDomain(Disk outer, std::vector<Disk> holes, bool punctured_origin)
    : outer_(outer), holes_(std::move(holes)), punctured_(punctured_origin) {
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    const Disk& a = holes_[i];
    if (!(a.radius > 0.0) ||
        !(std::abs(a.center - outer_.center) + a.radius < outer_.radius)) {
      throw Error(ErrorCode::NonDisjoint,
                  "hole " + std::to_string(i) + " is not inside the outer disk");
    }
    for (std::size_t j = i + 1; j < holes_.size(); ++j) {
      const Disk& b = holes_[j];
      if (!(std::abs(a.center - b.center) > a.radius + b.radius)) {
        throw Error(ErrorCode::NonDisjoint, "holes " + std::to_string(i) + " and " +
                                                std::to_string(j) + " intersect");
      }
    }
    if (punctured_ && !(std::abs(a.center) > a.radius)) {
      throw Error(ErrorCode::NonDisjoint, "hole covers the puncture");
    }
  }
  boundary_.push_back({BoundaryComponent::Kind::OuterCircle, outer_});
  for (const auto& h : holes_) boundary_.push_back({BoundaryComponent::Kind::HoleCircle, h});
  if (punctured_) boundary_.push_back({BoundaryComponent::Kind::Point, Disk{0.0, 0.0}});
}

PlanarDomain PlanarDomain::annulus(double inner) {
  return PlanarDomain(Disk{}, {Disk{0.0, inner}}, false);
}

bool PlanarDomain::on_boundary(cplx a) const {
  return std::any_of(boundary_.begin(), boundary_.end(), [a](const BoundaryComponent& b) {
    if (b.kind == BoundaryComponent::Kind::Point) {
      return std::abs(a - b.circle.center) <= kOriginTolerance;
    }
    return on_circle(a, b.circle);
  });
}

Membership PlanarDomain::membership(cplx z) const {
  Membership m;
  if (on_boundary(z)) {
    m.inside = false;
    m.delta = 0.0;
    m.nearest = z;
    return m;
  }
  m.inside = std::abs(z - outer_.center) < outer_.radius;
  for (const auto& h : holes_) {
    if (!(std::abs(z - h.center) > h.radius)) m.inside = false;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : boundary_) {
    const double d = component_distance(b, z);
    if (d < best) {
      best = d;
      m.nearest = component_nearest(b, z);
    }
  }
  m.delta = best;
  return m;
}

std::vector<SpectrumPiece> PlanarDomain::spectrum_pieces(cplx a) const {
  if (!on_boundary(a)) {
    throw Error(ErrorCode::NotBoundaryPoint, "point is not on the boundary");
  }
  std::vector<SpectrumPiece> out;
  out.reserve(boundary_.size());
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    const auto& b = boundary_[i];
    const double s = std::abs(a - b.circle.center);
    if (b.kind == BoundaryComponent::Kind::Point) {
      const double d = s <= kOriginTolerance ? 0.0 : s;
      out.push_back({i, {d, d}});
    } else {
      const double lo = on_circle(a, b.circle) ? 0.0 : std::abs(s - b.circle.radius);
      out.push_back({i, {lo, s + b.circle.radius}});
    }
  }
  return out;
}

IntervalUnion PlanarDomain::distance_spectrum(cplx a) const {
  IntervalUnion u;
  for (const auto& p : spectrum_pieces(a)) u.add(p.range.lo, p.range.hi);
  return u;
}

cplx PlanarDomain::point_at_distance(std::size_t component, cplx a, double d) const {
  const auto& b = boundary_.at(component);
  if (b.kind == BoundaryComponent::Kind::Point) return b.circle.center;
  return circle_point_at_distance(b.circle, a, d);
}

double ZalcmanDomain::x(int k) const { return std::exp(log_x_.at(k - 1)); }
double ZalcmanDomain::r(int k) const { return std::exp(log_r_.at(k - 1)); }

double ZalcmanDomain::mid_band(int k) const {
  return std::exp(0.5 * (log_x_.at(k - 1) + log_x_.at(k)));
}

int ZalcmanDomain::band_of(double xv) const {
  const double lx = std::log(xv);
  for (int k = 1; k <= depth_; ++k) {
    if (lx < log_x_[k - 1] && lx >= log_x_[k]) return k;
  }
  return 0;
}

double ZalcmanDomain::origin_hole_radius() const { return x(depth_ + 1) + r(depth_ + 1); }

ZalcmanDomain build_zalcman(const ScaleFunction& h, double x1, int K, Truncation variant) {
  if (!(x1 > 0.0 && x1 < h.epsilon0())) {
    throw Error(ErrorCode::PreconditionViolated, "x1 must lie in (0, epsilon0)");
  }
  if (K < 1) throw Error(ErrorCode::PreconditionViolated, "K must be >= 1");
  ZalcmanDomain d(h, x1, K, variant);
  d.log_x_.resize(static_cast<std::size_t>(K) + 2);
  d.log_x_[0] = std::log(x1);
  for (int i = 0; i + 1 < K + 2; ++i) d.log_x_[i + 1] = h.log_eval(d.log_x_[i]);
  // x_{K+1} = r_K is the smallest radius stored as a double; x_{K+2} = r_{K+1}
  // only ever enters through its log.
  if (!(d.log_x_[K] > -690.0)) {
    throw Error(ErrorCode::Underflow, "log x_" + std::to_string(K + 1) +
                                          " below -690: truncation depth too large");
  }
  d.log_r_.assign(d.log_x_.begin() + 1, d.log_x_.end());

  auto rel = [&](int i) { return std::exp(d.log_r_[i] - d.log_x_[i]); };  // r/x, 0-based
  // x_1 + r_1 < 1
  if (!(d.log_x_[0] + std::log1p(rel(0)) < 0.0)) {
    throw Error(ErrorCode::NonDisjoint, "disk 1 leaves the unit disk: x1 too large for h");
  }
  for (int k = 1; k <= K; ++k) {
    const int i = k - 1;
    if (!(rel(i) < 1.0)) throw Error(ErrorCode::NonDisjoint, "r_k >= x_k");
    const double outer_next = d.log_x_[i + 1] + std::log1p(rel(i + 1));
    const double inner_this = d.log_x_[i] + std::log1p(-rel(i));
    if (!(outer_next < inner_this)) {
      throw Error(ErrorCode::NonDisjoint, "disks " + std::to_string(k) + " and " +
                                              std::to_string(k + 1) +
                                              " overlap: x1 too large for h");
    }
  }

  std::vector<Disk> holes;
  for (int k = 1; k <= K; ++k) holes.push_back(Disk{d.x(k), d.r(k)});
  if (variant == Truncation::Sandwich) {
    holes.push_back(Disk{0.0, d.origin_hole_radius()});
    d.planar_ = PlanarDomain(Disk{}, std::move(holes), false);
  } else {
    d.planar_ = PlanarDomain(Disk{}, std::move(holes), true);
  }
  return d;
}

CantorSet build_cantor_lengths(std::vector<double> lengths) {
  if (lengths.empty() || !(lengths[0] > 0.0 && lengths[0] < 0.5)) {
    throw Error(ErrorCode::PreconditionViolated, "cantor set needs 0 < l0 < 1/2");
  }
  for (std::size_t j = 0; j + 1 < lengths.size(); ++j) {
    if (!(lengths[j + 1] > 0.0)) {
      throw Error(ErrorCode::Underflow, "cantor level " + std::to_string(j + 1) + " underflows");
    }
    if (!(lengths[j + 1] < lengths[j] / 2.0)) {
      throw Error(ErrorCode::RuleViolation,
                  "l_" + std::to_string(j + 1) + " >= l_" + std::to_string(j) + "/2");
    }
  }
  if (lengths.size() - 1 > 62) {
    throw Error(ErrorCode::PreconditionViolated, "cantor depth limited to 62 levels");
  }
  CantorSet c;
  c.lengths_ = std::move(lengths);
  return c;
}

CantorSet build_cantor(double l0, double alpha, int J) {
  if (J < 0) throw Error(ErrorCode::PreconditionViolated, "J must be >= 0");
  std::vector<double> l(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) l[j] = std::exp(std::pow(alpha, j) * std::log(l0));
  return build_cantor_lengths(std::move(l));
}

Interval CantorSet::interval(int level, std::uint64_t index) const {
  double left = 0.0;
  for (int i = level - 1; i >= 0; --i) {
    if ((index >> (level - 1 - i)) & 1U) left += lengths_[i] - lengths_[i + 1];
  }
  return {left, left + lengths_[level]};
}

std::vector<Interval> CantorSet::level_intervals(int level) const {
  std::vector<Interval> out;
  const std::uint64_t n = std::uint64_t{1} << level;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(interval(level, i));
  return out;
}

double CantorSet::position(const Point& p) const {
  const Interval iv = interval(depth(), p.index);
  return p.side == 0 ? iv.lo : iv.hi;
}

double CantorSet::difference(const Point& a, const Point& b) const {
  const int J = depth();
  double acc = static_cast<double>(a.side - b.side) * lengths_[J];
  for (int i = J - 1; i >= 0; --i) {
    const int ba = static_cast<int>((a.index >> (J - 1 - i)) & 1U);
    const int bb = static_cast<int>((b.index >> (J - 1 - i)) & 1U);
    if (ba != bb) acc += static_cast<double>(ba - bb) * (lengths_[i] - lengths_[i + 1]);
  }
  return acc;
}

IntervalUnion CantorSet::distance_spectrum(const Point& a) const {
  IntervalUnion u;
  const std::uint64_t n = std::uint64_t{1} << depth();
  for (std::uint64_t i = 0; i < n; ++i) {
    const double lo = difference(Point{i, 0}, a);
    const double hi = difference(Point{i, 1}, a);
    if (lo <= 0.0 && hi >= 0.0) {
      u.add(0.0, std::max(-lo, hi));
    } else {
      u.add(std::min(std::abs(lo), std::abs(hi)), std::max(std::abs(lo), std::abs(hi)));
    }
  }
  return u;
}

IntervalUnion CantorSet::distance_spectrum(cplx a) const {
  const double tol = kBoundaryTolerance * lengths_[0];
  if (std::abs(a.imag()) > tol) {
    throw Error(ErrorCode::NotBoundaryPoint, "point is off the real axis");
  }
  const double x = a.real();
  const auto parts = level_intervals(depth());
  const bool member = std::any_of(parts.begin(), parts.end(), [&](const Interval& iv) {
    return iv.lo - tol <= x && x <= iv.hi + tol;
  });
  if (!member) throw Error(ErrorCode::NotBoundaryPoint, "point is not on the Cantor approximant");
  IntervalUnion u;
  for (const auto& iv : parts) {
    if (iv.lo <= x && x <= iv.hi) {
      u.add(0.0, std::max(x - iv.lo, iv.hi - x));
    } else {
      const double d1 = std::abs(iv.lo - x);
      const double d2 = std::abs(iv.hi - x);
      u.add(std::min(d1, d2), std::max(d1, d2));
    }
  }
  return u;
}

}  // namespace berglab
