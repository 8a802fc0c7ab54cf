#pragma once

#include <optional>
#include <vector>

#include "berglab/capacity.hpp"
#include "berglab/domain.hpp"
#include "berglab/gram.hpp"

namespace berglab {

struct KernelEstimate {
  cplx w;
  double K_low = 0.0;
  int basis_size = 0;
  double saturation = 0.0;  // relative change from the smaller basis; 0 if not computed
  bool certified = false;
};

struct MetricEstimate {
  cplx w;
  double S_low = 0.0;
  double K_low = 0.0;
  double b_est = 0.0;
  bool certified = false;
};

// sup |f(w)|^2 over unit-norm f in the span of the factored basis.
// certified marks a Superset-truncated Zalcman domain (caller's knowledge).
KernelEstimate subspace_kernel(const GramSystem& G, cplx w, bool certified = false);
// Constrained derivative sup over f(w) = 0, and b_est = S_low / sqrt(K_low).
MetricEstimate subspace_metric(const GramSystem& G, cplx w);

// Kernel at w for the basis and an enlarged one (degree + 4, order + 1);
// saturation is the relative change.
KernelEstimate saturated_kernel(const ZalcmanDomain& domain, cplx w, int degree = 8,
                                int max_order = 2, const QuadratureOptions& q = {});

struct WitnessKernelBound {
  int k = 0;
  double x = 0.0;
  double value = 0.0;    // |f(-x)|^2 / B
  double f_abs2 = 0.0;
  double norm_bound = 0.0;  // B = 2 pi log(2 / r_{k+1})
};

// f(z) = 1/(z - x_{k+1}) with x in (x_{k+1}, x_k); closed form, no quadrature.
WitnessKernelBound witness_kernel_bound(const ZalcmanDomain& domain, double x);

enum class WitnessVariant { TwoPole, ThreePole };

struct WitnessMetricBound {
  int k = 0;
  cplx a_k;               // coefficient making f(w) = 0
  double residual = 0.0;  // |f(w)| relative to the largest term
  double fprime = 0.0;    // |f'(w)|
  double norm2 = 0.0;     // ||f||^2 over the domain
  double ratio = 0.0;     // |f'(w)| / ||f||
};

// k = 0 picks the band from w: band_of(|w|) on the negative axis, otherwise
// the k with x_k / 3 < |w| < 2 x_k / 3.
WitnessMetricBound witness_metric_bound(const ZalcmanDomain& domain, cplx w,
                                        WitnessVariant variant, int k = 0,
                                        const QuadratureOptions& q = {});

struct EquilibriumWitnessOptions {
  double c = 1.0;          // (U) constant used for the second point
  std::size_t nodes = 96;  // nodes per set
  double eta = 0.5;        // retraction, fraction of the owning disk radius
  double min_radius_rel = 1e-16;  // holes smaller than this times delta are ignored
  EquilibriumOptions eq;
  QuadratureOptions quad;
};

struct EquilibriumWitnessBound {
  cplx w;
  double delta = 0.0;
  cplx w1;  // nearest boundary point
  cplx w2;  // second point at distance in [8 delta, r]
  double r = 0.0;
  double cap_E1 = 0.0;
  std::vector<double> cap_sectors;  // three sectors around w, facing sector first
  int chosen_sector = 0;
  double cap_E11 = 0.0;
  double cap_E2 = 0.0;
  cplx f11_w;
  cplx f2_w;
  double norm2 = 0.0;
  double value = 0.0;  // |f(w)|^2 / ||f||^2
};

EquilibriumWitnessBound equilibrium_witness_bound(const ZalcmanDomain& domain, cplx w,
                                                  const EquilibriumWitnessOptions& opt = {});

struct FENormCheck {
  double lhs = 0.0;  // integral of |f_E|^2 over D(0,1/4) minus E
  double rhs = 0.0;  // log(1 / Cap E)
  double ratio = 0.0;
  double capacity = 0.0;
  double dilation_error = 0.0;  // max relative error of f_tE(w) = f_E(w/t)/t
};

// E is a union of disjoint closed disks inside D(0, 1/4).
FENormCheck f_E_norm_lemma_check(const std::vector<Disk>& E, std::size_t nodes = 128,
                                 double eta = 0.5, double t = 0.5, std::uint64_t seed = 1,
                                 const QuadratureOptions& q = {});

struct DistanceRow {
  double x = 0.0;
  int band = 0;
  double b_est = 0.0;
  double d_est = 0.0;  // trapezoid integral of b_est from the first grid point
};

struct DistanceProfile {
  std::vector<DistanceRow> rows;
  std::vector<int> bands;          // k for each increment
  std::vector<double> increments;  // d_est across [x_{k+1}, x_k]
};

// x_1 followed by per_band log-spaced points inside each band k = 1..k_max
// (band endpoints included once).
std::vector<double> distance_grid(const ZalcmanDomain& domain, int k_max, int per_band = 8);

// b_est along w = -x for a decreasing grid; d_est integrates b in log x
// (b x is nearly flat across a band). Band increments need the domain.
DistanceProfile distance_profile(const GramSystem& G, const std::vector<double>& x_grid,
                                 const ZalcmanDomain* domain = nullptr);

}  // namespace berglab
