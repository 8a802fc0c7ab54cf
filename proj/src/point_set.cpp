#include "berglab/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "berglab/error.hpp"

namespace berglab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Half-opening t of the arc of circle c1 lying inside the closed disk d2:
// points c1 + rho1 e^{i(phi +- s)}, |s| <= t, phi = arg(c2 - c1).
// Returns -1 when no point of the circle is inside and > pi when all are.
double inside_half_angle(const Disk& c1, const Disk& d2) {
  const double d = std::abs(d2.center - c1.center);
  const double gap = d - c1.radius;
  if (d == 0.0) return c1.radius <= d2.radius ? 4.0 : -1.0;
  const double s = (d2.radius - gap) * (d2.radius + gap) / (4.0 * c1.radius * d);
  if (s < 0.0) return -1.0;
  if (s >= 1.0) return 4.0;
  return 2.0 * std::asin(std::sqrt(s));
}

}  // namespace

void WeightedPointSet::validate() const {
  if (nodes.empty()) throw Error(ErrorCode::PreconditionViolated, "empty point set");
  if (!weights.empty()) {
    if (weights.size() != nodes.size()) {
      throw Error(ErrorCode::PreconditionViolated, "weights/nodes size mismatch");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw Error(ErrorCode::PreconditionViolated, "negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorCode::PreconditionViolated, "weights do not sum to 1");
    }
  }
  if (!cells.empty() && cells.size() != nodes.size()) {
    throw Error(ErrorCode::PreconditionViolated, "cells/nodes size mismatch");
  }
}

WeightedPointSet uniform_measure(std::vector<cplx> nodes, std::vector<double> cells) {
  WeightedPointSet mu;
  const std::size_t n = nodes.size();
  mu.nodes = std::move(nodes);
  mu.weights.assign(n, 1.0 / static_cast<double>(n));
  mu.cells = std::move(cells);
  mu.validate();
  return mu;
}

std::vector<cplx> circle_nodes(const Disk& circle, std::size_t n, double phase) {
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = circle.center +
             std::polar(circle.radius, phase + kTwoPi * static_cast<double>(i) /
                                                   static_cast<double>(n));
  }
  return out;
}

std::vector<cplx> segment_nodes(cplx a, cplx b, std::size_t n) {
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * ((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return out;
}

double ArcSet::total_length() const {
  double s = 0.0;
  for (const auto& a : arcs) s += a.length();
  return s;
}

ArcSet clipped_complement(const PlanarDomain& domain, const Disk& query) {
  ArcSet set;
  set.scale = query.radius;
  const cplx a = query.center;
  const double R = query.radius;

  for (const auto& hole : domain.holes()) {
    const double d = std::abs(hole.center - a);
    if (d + hole.radius <= R) {
      set.arcs.push_back({hole, 0.0, kTwoPi, hole, false});
      continue;
    }
    if (d >= R + hole.radius) continue;
    if (d + R <= hole.radius) {
      set.arcs.push_back({query, 0.0, kTwoPi, hole, false});
      continue;
    }
    // Lens: rim of the hole inside the query disk, query circle inside the hole.
    const double t_hole = inside_half_angle(hole, query);
    const double phi_hole = std::arg(a - hole.center);
    set.arcs.push_back({hole, phi_hole - t_hole, phi_hole + t_hole, hole, false});
    const double t_query = inside_half_angle(query, hole);
    const double phi_query = std::arg(hole.center - a);
    set.arcs.push_back({query, phi_query - t_query, phi_query + t_query, hole, false});
  }

  const Disk& outer = domain.outer();
  const double d = std::abs(a - outer.center);
  if (d + R >= outer.radius) {
    if (d + outer.radius <= R) {
      throw Error(ErrorCode::PreconditionViolated, "query disk swallows the outer disk");
    }
    const double t_outer = inside_half_angle(outer, query);
    const double phi_outer = std::arg(a - outer.center);
    if (t_outer > 0.0) {
      set.arcs.push_back({outer, phi_outer - t_outer, phi_outer + t_outer, outer, true});
    }
    // Query circle outside the outer disk: complement of the inside arc.
    const double t_in = inside_half_angle(query, outer);
    const double phi_in = std::arg(outer.center - a);
    if (t_in < 0.0) {
      set.arcs.push_back({query, 0.0, kTwoPi, outer, true});
    } else if (t_in < std::numbers::pi) {
      set.arcs.push_back({query, phi_in + t_in, phi_in - t_in + kTwoPi, outer, true});
    }
  }

  if (domain.punctured_origin() && std::abs(a) <= R) set.has_origin_point = true;
  return set;
}

ArcSet full_circles(const std::vector<Disk>& disks) {
  ArcSet set;
  for (const auto& d : disks) {
    set.arcs.push_back({d, 0.0, kTwoPi, d, false});
    set.scale = std::max(set.scale, d.radius);
  }
  return set;
}

ArcSample discretize(const ArcSet& set, std::size_t total, std::size_t min_per_arc) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "arc set has no arcs");
  const double L = set.total_length();
  ArcSample out;
  for (std::size_t k = 0; k < set.arcs.size(); ++k) {
    const Arc& arc = set.arcs[k];
    const auto share = static_cast<std::size_t>(
        std::llround(static_cast<double>(total) * arc.length() / L));
    const std::size_t m = std::max(min_per_arc, share);
    const double dt = (arc.t1 - arc.t0) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double t = arc.t0 + (static_cast<double>(i) + 0.5) * dt;
      out.points.nodes.push_back(arc.circle.center + std::polar(arc.circle.radius, t));
      out.points.cells.push_back(arc.circle.radius * dt);
      out.arc.push_back(k);
    }
  }
  const std::size_t n = out.points.nodes.size();
  out.points.weights.assign(n, 1.0 / static_cast<double>(n));
  return out;
}

std::vector<cplx> retract(const ArcSet& set, const ArcSample& sample, double eta) {
  std::vector<cplx> out(sample.points.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Arc& arc = set.arcs[sample.arc[i]];
    const cplx z = sample.points.nodes[i];
    const double step = eta * std::min(arc.owner.radius, set.scale);
    cplx dir = arc.owner.center - z;
    if (arc.outside) dir = -dir;
    const double len = std::abs(dir);
    out[i] = len > 0.0 ? z + dir * (step / len) : z;
  }
  return out;
}

ArcSample subsample(const ArcSample& sample, const std::vector<std::size_t>& keep) {
  ArcSample out;
  for (std::size_t i : keep) {
    out.points.nodes.push_back(sample.points.nodes[i]);
    if (sample.points.has_cells()) out.points.cells.push_back(sample.points.cells[i]);
    out.arc.push_back(sample.arc[i]);
  }
  if (!keep.empty()) {
    out.points.weights.assign(keep.size(), 1.0 / static_cast<double>(keep.size()));
  }
  return out;
}

CantorGrid::CantorGrid(CantorSet set, std::size_t per_interval)
    : set_(std::move(set)), count_(std::size_t{1} << set_.depth()) {
  if (per_interval < 2) {
    throw Error(ErrorCode::GridTooSmall, "cantor grid needs >= 2 points per interval");
  }
  offsets_.resize(per_interval);
  for (std::size_t k = 0; k < per_interval; ++k) {
    offsets_[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) /
                                        static_cast<double>(per_interval - 1)));
  }
}

double CantorGrid::log_dist(std::size_t i, std::size_t j) const {
  const std::size_t m = offsets_.size();
  const CantorSet::Point a{i / m, 0};
  const CantorSet::Point b{j / m, 0};
  const double lJ = set_.length(set_.depth());
  const double diff = set_.difference(a, b) + (offsets_[i % m] - offsets_[j % m]) * lJ;
  return std::log(std::abs(diff));
}

cplx CantorGrid::position(std::size_t i) const {
  const std::size_t m = offsets_.size();
  const Interval iv = set_.interval(set_.depth(), i / m);
  return {iv.lo + offsets_[i % m] * (iv.hi - iv.lo), 0.0};
}

}  // namespace berglab
