#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "berglab/geometry.hpp"
#include "berglab/scale_function.hpp"

namespace berglab {

// One connected piece of the boundary: a circle (outer circle or the rim of
// a removed disk) or an isolated point.
struct BoundaryComponent {
  enum class Kind { OuterCircle, HoleCircle, Point };
  Kind kind = Kind::OuterCircle;
  Disk circle;  // for Point: center is the point, radius 0
};

struct Membership {
  bool inside = false;
  double delta = 0.0;
  cplx nearest{0.0, 0.0};  // a boundary point realizing delta
};

struct SpectrumPiece {
  std::size_t component = 0;
  Interval range;
};

// A disk minus finitely many pairwise disjoint closed disks, optionally
// punctured at the origin.
class PlanarDomain {
 public:
  PlanarDomain(Disk outer, std::vector<Disk> holes, bool punctured_origin);

  static PlanarDomain unit_disk() { return PlanarDomain(Disk{}, {}, false); }
  static PlanarDomain annulus(double inner);

  const Disk& outer() const { return outer_; }
  const std::vector<Disk>& holes() const { return holes_; }
  bool punctured_origin() const { return punctured_; }
  const std::vector<BoundaryComponent>& boundary() const { return boundary_; }

  bool contains(cplx z) const { return membership(z).inside; }
  Membership membership(cplx z) const;
  bool on_boundary(cplx a) const;

  // Exact set of distances |z - a|, z on the boundary, for a on the
  // boundary; throws NotBoundaryPoint otherwise.
  IntervalUnion distance_spectrum(cplx a) const;
  std::vector<SpectrumPiece> spectrum_pieces(cplx a) const;
  // A boundary point of the given component at distance d from a.
  cplx point_at_distance(std::size_t component, cplx a, double d) const;

 private:
  Disk outer_;
  std::vector<Disk> holes_;
  bool punctured_ = false;
  std::vector<BoundaryComponent> boundary_;
};

enum class Truncation { Superset, Sandwich };

// Truncated Zalcman-type domain: the unit disk minus D(x_k, r_k), k <= K,
// with r_k = x_{k+1} = h(x_k). Superset keeps the puncture at 0 and is a
// superset of the untruncated domain; Sandwich also removes the closed disk
// D(0, x_{K+1} + r_{K+1}) and is a subset.
class ZalcmanDomain {
 public:
  const ScaleFunction& h() const { return h_; }
  double x1() const { return x1_; }
  int depth() const { return depth_; }
  Truncation variant() const { return variant_; }

  // log x_k for k = 1..K+2 (index k-1) and log r_k for k = 1..K+1.
  std::span<const double> log_x() const { return log_x_; }
  std::span<const double> log_r() const { return log_r_; }
  double x(int k) const;
  double r(int k) const;
  // Geometric mid-band point sqrt(x_k x_{k+1}).
  double mid_band(int k) const;
  // k with x in [x_{k+1}, x_k), or 0 if none among retained scales.
  int band_of(double x) const;

  double origin_hole_radius() const;
  const PlanarDomain& planar() const { return planar_; }

 private:
  friend ZalcmanDomain build_zalcman(const ScaleFunction&, double, int, Truncation);
  ZalcmanDomain(ScaleFunction h, double x1, int depth, Truncation variant)
      : h_(std::move(h)), x1_(x1), depth_(depth), variant_(variant),
        planar_(PlanarDomain::unit_disk()) {}

  ScaleFunction h_;
  double x1_;
  int depth_;
  Truncation variant_;
  std::vector<double> log_x_;
  std::vector<double> log_r_;
  PlanarDomain planar_;
};

ZalcmanDomain build_zalcman(const ScaleFunction& h, double x1, int K,
                            Truncation variant = Truncation::Superset);

// Nested-interval Cantor set with level lengths l_0 > l_1 > ... > l_J,
// l_{j+1} < l_j / 2. Level-j intervals are addressed by j-bit indices, most
// significant bit = first choice.
class CantorSet {
 public:
  // Endpoint of a level-J interval: index plus side (0 left, 1 right).
  struct Point {
    std::uint64_t index = 0;
    int side = 0;
  };

  int depth() const { return static_cast<int>(lengths_.size()) - 1; }
  std::span<const double> lengths() const { return lengths_; }
  double length(int level) const { return lengths_[level]; }

  Interval interval(int level, std::uint64_t index) const;
  std::vector<Interval> level_intervals(int level) const;

  double position(const Point& p) const;
  // Signed difference position(a) - position(b), accurate to relative
  // rounding even when both points sit near the same large coordinate.
  double difference(const Point& a, const Point& b) const;
  std::size_t endpoint_count() const { return std::size_t{2} << depth(); }
  Point endpoint(std::size_t i) const { return Point{i / 2, static_cast<int>(i % 2)}; }

  // Distances from a to the depth-J approximant, exact up to rounding.
  IntervalUnion distance_spectrum(const Point& a) const;
  // Same for a real coordinate on the approximant (tolerance 1e-12 * l_0).
  IntervalUnion distance_spectrum(cplx a) const;

 private:
  friend CantorSet build_cantor_lengths(std::vector<double>);
  std::vector<double> lengths_;
};

CantorSet build_cantor(double l0, double alpha, int J);
CantorSet build_cantor_lengths(std::vector<double> lengths);

}  // namespace berglab
