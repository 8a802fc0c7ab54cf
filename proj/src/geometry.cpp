#include "berglab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace berglab {

void IntervalUnion::add(double lo, double hi) {
  if (hi < lo) std::swap(lo, hi);
  Interval next{lo, hi};
  std::vector<Interval> merged;
  merged.reserve(parts_.size() + 1);
  bool placed = false;
  for (const auto& p : parts_) {
    if (p.hi < next.lo) {
      merged.push_back(p);
    } else if (next.hi < p.lo) {
      if (!placed) {
        merged.push_back(next);
        placed = true;
      }
      merged.push_back(p);
    } else {
      next.lo = std::min(next.lo, p.lo);
      next.hi = std::max(next.hi, p.hi);
    }
  }
  if (!placed) merged.push_back(next);
  std::sort(merged.begin(), merged.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  parts_ = std::move(merged);
}

double IntervalUnion::min() const { return parts_.front().lo; }
double IntervalUnion::max() const { return parts_.back().hi; }

bool IntervalUnion::contains(double d) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [d](const Interval& p) { return p.lo <= d && d <= p.hi; });
}

bool IntervalUnion::intersects(double lo, double hi) const {
  return max_in(lo, hi).has_value();
}

std::optional<double> IntervalUnion::max_in(double lo, double hi) const {
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
    if (it->lo > hi) continue;
    const double v = std::min(it->hi, hi);
    if (v >= lo) return v;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> IntervalUnion::min_in(double lo, double hi) const {
  for (const auto& p : parts_) {
    if (p.hi < lo) continue;
    const double v = std::max(p.lo, lo);
    if (v <= hi) return v;
    return std::nullopt;
  }
  return std::nullopt;
}

bool on_circle(cplx a, const Disk& circle) {
  const double scale = circle.radius + std::abs(circle.center);
  return std::abs(std::abs(a - circle.center) - circle.radius) <= kBoundaryTolerance * scale;
}

cplx circle_point_at_distance(const Disk& circle, cplx a, double d) {
  const cplx c = circle.center;
  const double rho = circle.radius;
  const double s = std::abs(a - c);
  if (s == 0.0) return c + rho;
  // Angle t at the center between (a - c) and (p - c), from
  // d^2 = (s - rho)^2 + 4 s rho sin^2(t/2), which stays accurate for d << rho.
  const double gap = s - rho;
  const double sin_half_sq = std::max(0.0, (d - gap) * (d + gap) / (4.0 * s * rho));
  double t = 0.0;
  if (sin_half_sq < 0.5) {
    t = 2.0 * std::asin(std::sqrt(sin_half_sq));
  } else {
    t = std::acos(std::clamp((s * s + rho * rho - d * d) / (2.0 * s * rho), -1.0, 1.0));
  }
  const double base = std::arg(a - c);
  auto norm_angle = [](double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    return phi < 0.0 ? phi + two_pi : phi;
  };
  const double phi1 = norm_angle(base + t);
  const double phi2 = norm_angle(base - t);
  const double phi = std::min(phi1, phi2);
  return c + std::polar(rho, phi);
}

}  // namespace berglab
