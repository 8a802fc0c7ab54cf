#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace berglab {

using cplx = std::complex<double>;

struct Disk {
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Sorted, merged union of closed intervals of nonnegative reals. Isolated
// points are stored as degenerate intervals.
class IntervalUnion {
 public:
  void add(double lo, double hi);
  void add_point(double p) { add(p, p); }

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  double min() const;
  double max() const;

  bool contains(double d) const;
  bool intersects(double lo, double hi) const;
  // Largest / smallest element of the union inside [lo, hi].
  std::optional<double> max_in(double lo, double hi) const;
  std::optional<double> min_in(double lo, double hi) const;

 private:
  std::vector<Interval> parts_;
};

// Relative tolerance for "a lies on this circle".
inline constexpr double kBoundaryTolerance = 1e-12;

bool on_circle(cplx a, const Disk& circle);

// Point of the circle at distance d from a, smallest argument (measured from
// the circle's center in [0, 2pi)) among the candidates. Requires
// | |a-c| - rho | <= d <= |a-c| + rho.
cplx circle_point_at_distance(const Disk& circle, cplx a, double d);

}  // namespace berglab
