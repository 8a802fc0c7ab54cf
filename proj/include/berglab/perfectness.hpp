#pragma once

#include <optional>
#include <vector>

#include "berglab/capacity.hpp"
#include "berglab/domain.hpp"
#include "berglab/scale_function.hpp"

namespace berglab {

// Boundary point at exact spectrum distance d from a; among the components
// realizing d, the one whose point has the smallest argument around a.
cplx boundary_point_at(const PlanarDomain& domain, cplx a, double d);

struct AnnulusTestReport {
  cplx a;
  double r = 0.0;
  double c = 0.0;
  double h_r = 0.0;
  // Largest c with [c h(r), r] meeting the distance spectrum; 0 when only the
  // point a itself is within r. Kept in logs too since h(r) can underflow.
  double c_star = 0.0;
  double log_c_star = 0.0;
  bool satisfied = false;
  std::optional<cplx> witness;   // boundary point in the annulus
  double witness_distance = 0.0; // exact spectrum value realized by witness
};

AnnulusTestReport annulus_condition(const PlanarDomain& domain, cplx a, double r, double c,
                                    const ScaleFunction& h);

struct ProfileRow {
  cplx a;
  double r = 0.0;
  double c_star = 0.0;
  double log_c_star = 0.0;
};

struct ConstantProfile {
  double c_star_global = 0.0;
  double log_c_star_global = 0.0;
  std::vector<ProfileRow> table;
};

// Default boundary samples: the origin (when punctured), 8 outer-circle
// points and 8 points on every removed circle.
std::vector<cplx> default_boundary_samples(const PlanarDomain& domain);
// Log-spaced radii in [r_min, r0], r_per_decade per decade, r0 included.
std::vector<double> log_radii(double r_min, double r0, int r_per_decade);

ConstantProfile best_constant_profile(const PlanarDomain& domain, const ScaleFunction& h,
                                      double r0, double r_min,
                                      const std::vector<cplx>& a_samples = {},
                                      int r_per_decade = 16);
// Zalcman convenience: r_min = x_K + r_K, r0 defaults to x_1 / 2.
ConstantProfile best_constant_profile(const ZalcmanDomain& domain, const ScaleFunction& h,
                                      double r0 = 0.0, int r_per_decade = 16);

struct FailureWitness {
  double eps = 0.0;
  double param = 0.0;              // tested parameter (alpha - eps, beta - eps)
  std::vector<double> radii;       // r_k = x_k / 2 at a = 0
  std::vector<double> c_prime;     // c_star(0, r_k) for the weaker h
  std::vector<double> implied;     // same annulus measured against the domain's h
  double decay = 0.0;              // c_prime.front() / c_prime.back()
  double implied_band = 0.0;       // max / min of implied
  bool failed = false;
};

struct WeakPerfectnessReport {
  double param = 0.0;
  double c_star_global = 0.0;
  double c_floor = 0.0;
  bool satisfied = false;
  std::vector<FailureWitness> weaker;
};

// (U) for the domain's own h, and a failure witness for h with param - eps.
// A weaker h is flagged failed when c' strictly decreases along the witness
// radii, drops by at least min_decay overall, and the same annuli measured
// against the domain's h stay in a band of ratio <= 10 (so the decay is the
// h'/h ratio, which tends to 0).
WeakPerfectnessReport classify_weak_perfectness(const ZalcmanDomain& domain,
                                                const std::vector<double>& eps_list,
                                                double c_floor = 1e-3, double min_decay = 1.5);

struct ConditionCProbe {
  cplx a;
  double r = 0.0;
  double cap = 0.0;
  double ratio = 0.0;  // cap / h(r)
  std::size_t arcs = 0;
};

// Cap(closed D(a,r) minus the domain) by transfinite diameter at n points.
ConditionCProbe condition_C_probe(const PlanarDomain& domain, const ScaleFunction& h, cplx a,
                                  double r, int n, const FeketeOptions& opt = {});

struct ConditionCSweep {
  std::vector<ConditionCProbe> rows;
  double slope = 0.0;      // least-squares slope of log cap against log r
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

ConditionCSweep condition_C_sweep(const PlanarDomain& domain, const ScaleFunction& h, cplx a,
                                  const std::vector<double>& radii, int n,
                                  const FeketeOptions& opt = {});

struct PommerenkeCertificate {
  cplx a;
  double c = 0.0;
  std::vector<double> s;       // s_1 .. s_{k+1}
  std::vector<cplx> points;    // index bit m-1 set: phi_m applied
  bool distinct = false;
  bool pairwise_ok = false;    // |z - z'| >= s_{m+1}, m = first stage where they differ
  bool within_ok = false;      // |z - a| <= 2 s_1
  double min_pair_margin = 0.0;  // min |z - z'| / s_{m+1}
  double log_product_bound = 0.0;
  double log_capacity_floor = 0.0;
  double capacity_floor = 0.0;
};

// s_{m+1} = (c/5) h(s_m); phi_m moves a point to the nearest boundary point at
// distance >= 5 s_{m+1} (ties: smallest argument), which must be <= s_m.
// Throws AnnulusEmpty when the (U) annulus is empty at some stage.
PommerenkeCertificate pommerenke_construct(const PlanarDomain& domain, const ScaleFunction& h,
                                           cplx a, double c, int k, double s1);

struct UCReport {
  WeakPerfectnessReport u;
  ConditionCSweep c;
  double exponent_bound = 0.0;  // H1: 1 / (2 - alpha)
  bool u_pass = false;
  bool c_pass = false;
};

// (U) classification plus a (C) sweep at a = 0 on radii between the deepest
// retained disk and x_1 / 2. H1 passes (C) when the slope of log Cap against
// log r is <= 1/(2 - alpha) + 0.2; H2 when Cap / h(r) stays >= c_ratio_floor.
UCReport theorem_UC_report(const ZalcmanDomain& domain, int n = 64, int r_per_decade = 2,
                           double c_ratio_floor = 1e-2);

struct CantorUReport {
  double alpha = 0.0;
  double c = 0.0;
  std::size_t tests = 0;
  std::size_t failures = 0;
  bool satisfied = false;
  // First failing (or the last) query: endpoint, radius and witness distance.
  CantorSet::Point a;
  double r = 0.0;
  double witness_distance = 0.0;
};

// (U)_{1,alpha} on the complement of the depth-J approximant: every level-J
// endpoint a and radius r in (2 l_J, l_0] must see the set within
// [c r^alpha, r]; c defaults to 2^(-1-alpha) shaded down by 1e-9.
CantorUReport cantor_U_check(const CantorSet& set, double alpha, double c = 0.0,
                             int r_per_decade = 16);

struct CantorUCReport {
  CantorUReport u;
  std::vector<int> depths;
  std::vector<double> capacity_bound;   // product bound per depth
  std::vector<double> transfinite;      // delta_n per depth
  bool floor_to_zero = false;           // bounds strictly decreasing, last < 1e-3 * first
};

CantorUCReport cantor_UC_report(double l0, double alpha, int max_depth, int n = 256);

}  // namespace berglab
