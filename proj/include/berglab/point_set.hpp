#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "berglab/domain.hpp"
#include "berglab/geometry.hpp"

namespace berglab {

// Discrete measure on the plane. Without weights it is a bare node
// configuration; with cells each node stands for a short arc of that length
// and carries the arc's self-energy.
struct WeightedPointSet {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::vector<double> cells;

  std::size_t size() const { return nodes.size(); }
  bool weighted() const { return !weights.empty(); }
  bool has_cells() const { return !cells.empty(); }
  // Throws PreconditionViolated when the simplex invariant is broken.
  void validate() const;
};

WeightedPointSet uniform_measure(std::vector<cplx> nodes, std::vector<double> cells = {});

// n equally spaced points, the first at angle phase.
std::vector<cplx> circle_nodes(const Disk& circle, std::size_t n, double phase = 0.0);
// Cell midpoints of n equal cells on [a, b].
std::vector<cplx> segment_nodes(cplx a, cplx b, std::size_t n);

// Arc of a circle, angles in radians with t1 > t0 and t1 - t0 <= 2 pi.
// owner is the removed disk the arc lies in, or the outer circle when
// outside is set.
struct Arc {
  Disk circle;
  double t0 = 0.0;
  double t1 = 0.0;
  Disk owner;
  bool outside = false;
  double length() const { return circle.radius * (t1 - t0); }
};

// Exterior boundary of a compact set made of lens pieces, as a list of arcs.
struct ArcSet {
  std::vector<Arc> arcs;
  double scale = 0.0;             // query radius, sets the retraction length
  bool has_origin_point = false;  // the isolated puncture (polar, no mass)
  bool empty() const { return arcs.empty(); }
  double total_length() const;
};

// Exterior boundary of D(a,R) minus the domain: removed disks met by the
// query disk, clipped to it, plus the part outside the outer circle.
ArcSet clipped_complement(const PlanarDomain& domain, const Disk& query);
ArcSet full_circles(const std::vector<Disk>& disks);

struct ArcSample {
  WeightedPointSet points;       // nodes with cells, uniform weights
  std::vector<std::size_t> arc;  // arc index of each node
};

// About `total` nodes spread by length with at least min_per_arc on each arc.
ArcSample discretize(const ArcSet& set, std::size_t total, std::size_t min_per_arc = 16);

// Move nodes off the boundary into the complement: toward the owning disk's
// center (or radially out of the outer circle) by eta times the local size
// min(owner radius, query radius).
std::vector<cplx> retract(const ArcSet& set, const ArcSample& sample, double eta);

// Keep the listed nodes of a sample (weights re-normalized to uniform).
ArcSample subsample(const ArcSample& sample, const std::vector<std::size_t>& keep);

// Abstract candidate grid for Fekete searches; log_dist may use exact
// address arithmetic (Cantor sets) instead of coordinates.
class CandidateGrid {
 public:
  virtual ~CandidateGrid() = default;
  virtual std::size_t size() const = 0;
  virtual double log_dist(std::size_t i, std::size_t j) const = 0;
  virtual cplx position(std::size_t i) const = 0;
};

class PointGrid final : public CandidateGrid {
 public:
  explicit PointGrid(std::vector<cplx> pts) : pts_(std::move(pts)) {}
  std::size_t size() const override { return pts_.size(); }
  double log_dist(std::size_t i, std::size_t j) const override {
    return std::log(std::abs(pts_[i] - pts_[j]));
  }
  cplx position(std::size_t i) const override { return pts_[i]; }
  const std::vector<cplx>& points() const { return pts_; }

 private:
  std::vector<cplx> pts_;
};

// Points inside each level-J interval of a Cantor approximant, at Chebyshev
// offsets; differences go through the address sum.
class CantorGrid final : public CandidateGrid {
 public:
  CantorGrid(CantorSet set, std::size_t per_interval);
  std::size_t size() const override { return count_ * offsets_.size(); }
  double log_dist(std::size_t i, std::size_t j) const override;
  cplx position(std::size_t i) const override;

 private:
  CantorSet set_;
  std::size_t count_;
  std::vector<double> offsets_;
};

}  // namespace berglab
