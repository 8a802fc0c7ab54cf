#include "berglab/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "berglab/error.hpp"
#include "berglab/perfectness.hpp"

namespace berglab {

namespace {

void require_inside(const GramSystem& G, cplx w) {
  if (!G.domain.contains(w)) {
    throw Error(ErrorCode::OutsideDomain, "evaluation point is not inside the domain");
  }
}

// L^{-1} of the selected, Jacobi-scaled, conjugated evaluations.
Eigen::VectorXcd solve_eval(const GramSystem& G, cplx w, bool derivative) {
  const auto r = static_cast<Eigen::Index>(G.pivots.size());
  Eigen::VectorXcd u(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const int b = G.pivots[static_cast<std::size_t>(i)];
    const cplx v = derivative ? G.basis[b].derivative(w) : G.basis[b](w);
    u(i) = std::conj(v) * G.jacobi(b);
  }
  return G.L.triangularView<Eigen::Lower>().solve(u);
}

bool pole_ok(const PlanarDomain& d, cplx p) {
  if (std::abs(p - d.outer().center) > d.outer().radius) return true;
  for (const auto& h : d.holes()) {
    if (std::abs(p - h.center) < h.radius) return true;
  }
  return false;
}

}  // namespace

KernelEstimate subspace_kernel(const GramSystem& G, cplx w, bool certified) {
  require_inside(G, w);
  KernelEstimate k;
  k.w = w;
  k.K_low = solve_eval(G, w, false).squaredNorm();
  k.basis_size = G.effective_rank;
  k.certified = certified;
  return k;
}

MetricEstimate subspace_metric(const GramSystem& G, cplx w) {
  require_inside(G, w);
  const Eigen::VectorXcd yu = solve_eval(G, w, false);
  const Eigen::VectorXcd yd = solve_eval(G, w, true);
  const double nu = yu.squaredNorm();
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorCode::DegenerateConstraint, "evaluation functional vanishes on the subspace");
  }
  MetricEstimate m;
  m.w = w;
  m.K_low = nu;
  // Residual of y_d against the unit evaluation direction; the expanded form
  // |y_d|^2 - |y_u^* y_d|^2 / |y_u|^2 overflows once 1/x^2 passes 1e100.
  const Eigen::VectorXcd e = yu / std::sqrt(nu);
  m.S_low = (yd - e * e.dot(yd)).norm();
  m.b_est = m.S_low / std::sqrt(nu);
  return m;
}

KernelEstimate saturated_kernel(const ZalcmanDomain& domain, cplx w, int degree, int max_order,
                                const QuadratureOptions& q) {
  const bool cert = domain.variant() == Truncation::Superset;
  const auto G1 = assemble_gram(domain.planar(), default_basis(domain, degree, max_order), q);
  const auto G2 = assemble_gram(domain.planar(), default_basis(domain, degree + 4, max_order + 1), q);
  const auto k1 = subspace_kernel(G1, w, cert);
  auto k2 = subspace_kernel(G2, w, cert);
  k2.saturation = std::abs(k2.K_low - k1.K_low) / k2.K_low;
  return k2;
}

WitnessKernelBound witness_kernel_bound(const ZalcmanDomain& domain, double x) {
  const int k = domain.band_of(x);
  if (k == 0 || !(x > domain.x(k + 1))) {
    throw Error(ErrorCode::ScaleNotRetained, "x is not inside a retained band (x_{k+1}, x_k)");
  }
  WitnessKernelBound b;
  b.k = k;
  b.x = x;
  const double d = x + domain.x(k + 1);
  b.f_abs2 = 1.0 / (d * d);
  b.norm_bound = 2.0 * std::numbers::pi * (std::log(2.0) - domain.log_r()[k]);
  b.value = b.f_abs2 / b.norm_bound;
  return b;
}

WitnessMetricBound witness_metric_bound(const ZalcmanDomain& domain, cplx w,
                                        WitnessVariant variant, int k,
                                        const QuadratureOptions& q) {
  if (k == 0) {
    if (w.imag() == 0.0 && w.real() < 0.0) {
      k = domain.band_of(-w.real());
    } else {
      const double a = std::abs(w);
      for (int j = 1; j <= domain.depth(); ++j) {
        if (domain.x(j) / 3.0 < a && a < 2.0 * domain.x(j) / 3.0) k = j;
      }
    }
  }
  const int K = domain.depth();
  const int kmax = domain.variant() == Truncation::Superset ? K - 1 : K;
  const int kmin = variant == WitnessVariant::ThreePole ? 2 : 1;
  if (k < kmin || k > kmax) {
    throw Error(ErrorCode::ScaleNotRetained,
                "witness needs poles x_{k-1}, x_k, x_{k+1} inside removed disks");
  }
  if (!domain.planar().contains(w)) throw Error(ErrorCode::OutsideDomain, "w is not in the domain");
  const double xk = domain.x(k), xn = domain.x(k + 1);
  WitnessMetricBound out;
  out.k = k;
  RationalFunction f;
  if (variant == WitnessVariant::TwoPole) {
    out.a_k = (w - xn) / (w - xk);
    f.poles = {{xk, 1, 1.0}, {xn, 1, -out.a_k}};
  } else {
    const double xp = domain.x(k - 1);
    out.a_k = (xp - xk) * (w - xn) / ((xp - xn) * (w - xk));
    f.poles = {{xk, 1, 1.0}, {xn, 1, -out.a_k}, {xp, 1, -(1.0 - out.a_k)}};
  }
  double biggest = 0.0;
  for (const auto& p : f.poles) biggest = std::max(biggest, std::abs(p.coeff / (w - p.center)));
  out.residual = std::abs(f(w)) / biggest;
  out.fprime = std::abs(f.derivative(w));
  out.norm2 = norm2(domain.planar(), f, q);
  out.ratio = out.fprime / std::sqrt(out.norm2);
  return out;
}

EquilibriumWitnessBound equilibrium_witness_bound(const ZalcmanDomain& domain, cplx w,
                                                  const EquilibriumWitnessOptions& opt) {
  const PlanarDomain& dom = domain.planar();
  const Membership m = dom.membership(w);
  if (!m.inside) throw Error(ErrorCode::OutsideDomain, "w is not in the domain");
  EquilibriumWitnessBound out;
  out.w = w;
  out.delta = m.delta;
  out.w1 = m.nearest;
  const double delta = m.delta;

  out.r = std::exp(domain.h().log_inverse(std::log(8.0 * delta / opt.c)));
  const auto d2 = dom.distance_spectrum(out.w1).min_in(8.0 * delta, out.r);
  if (!d2) {
    throw Error(ErrorCode::NoSecondPoint, "no boundary point at distance in [8 delta, r]");
  }
  out.w2 = boundary_point_at(dom, out.w1, *d2);

  auto arcs_of = [&](cplx center) {
    ArcSet set = clipped_complement(dom, Disk{center, delta});
    std::erase_if(set.arcs, [&](const Arc& a) {
      return !a.outside && a.owner.radius < opt.min_radius_rel * delta;
    });
    return set;
  };
  const ArcSet E1 = arcs_of(out.w1);
  const ArcSet E2 = arcs_of(out.w2);
  if (E1.empty() || E2.empty()) throw Error(ErrorCode::EmptySet, "E1 or E2 has no arcs");
  const ArcSample s1 = discretize(E1, opt.nodes);
  const ArcSample s2 = discretize(E2, opt.nodes);

  auto cap_of = [&](const ArcSample& s) {
    return s.points.size() < 2 ? 0.0 : equilibrium_measure(s.points, opt.eq).capacity;
  };
  out.cap_E1 = cap_of(s1);

  // Sector 0 faces w1 (|angle| <= pi/3 seen from w), then the two others.
  const cplx dir = (out.w1 - w) / std::abs(out.w1 - w);
  std::vector<std::vector<std::size_t>> sector(3);
  for (std::size_t i = 0; i < s1.points.size(); ++i) {
    const double phi = std::arg((s1.points.nodes[i] - w) / dir);
    const int sct = std::abs(phi) <= std::numbers::pi / 3 ? 0 : (phi > 0.0 ? 1 : 2);
    sector[sct].push_back(i);
  }
  std::vector<ArcSample> subs;
  for (int s = 0; s < 3; ++s) {
    subs.push_back(subsample(s1, sector[s]));
    out.cap_sectors.push_back(cap_of(subs.back()));
  }
  out.chosen_sector = static_cast<int>(
      std::max_element(out.cap_sectors.begin(), out.cap_sectors.end()) - out.cap_sectors.begin());
  const ArcSample& s11 = subs[out.chosen_sector];
  if (s11.points.size() < 2) throw Error(ErrorCode::EmptySet, "chosen sector has no nodes");

  const auto mu11 = equilibrium_measure(s11.points, opt.eq);
  const auto mu2 = equilibrium_measure(s2.points, opt.eq);
  out.cap_E11 = mu11.capacity;
  out.cap_E2 = mu2.capacity;
  const auto p11 = retract(E1, s11, opt.eta);
  const auto p2 = retract(E2, s2, opt.eta);

  RationalFunction f11, f2;
  for (std::size_t i = 0; i < p11.size(); ++i) {
    if (!pole_ok(dom, p11[i])) throw Error(ErrorCode::PolesTooClose, "retracted node left E1");
    f11.poles.push_back({p11[i], 1, mu11.measure.weights[i]});
  }
  for (std::size_t i = 0; i < p2.size(); ++i) {
    if (!pole_ok(dom, p2[i])) throw Error(ErrorCode::PolesTooClose, "retracted node left E2");
    f2.poles.push_back({p2[i], 1, mu2.measure.weights[i]});
  }
  out.f11_w = f11(w);
  out.f2_w = f2(w);
  RationalFunction f = f11;
  for (auto p : f2.poles) {
    p.coeff = -p.coeff;
    f.poles.push_back(p);
  }
  out.norm2 = norm2(dom, f, opt.quad);
  out.value = std::norm(out.f11_w - out.f2_w) / out.norm2;
  return out;
}

FENormCheck f_E_norm_lemma_check(const std::vector<Disk>& E, std::size_t nodes, double eta,
                                 double t, std::uint64_t seed, const QuadratureOptions& q) {
  const PlanarDomain dom(Disk{0.0, 0.25}, E, false);
  const ArcSet set = full_circles(E);
  const ArcSample s = discretize(set, nodes);
  const auto eq = equilibrium_measure(s.points);
  const auto poles = retract(set, s, eta);
  RationalFunction f;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    f.poles.push_back({poles[i], 1, eq.measure.weights[i]});
  }
  FENormCheck out;
  out.capacity = eq.capacity;
  out.lhs = norm2(dom, f, q);
  out.rhs = std::log(1.0 / eq.capacity);
  out.ratio = out.lhs / out.rhs;

  RationalFunction ft = f;
  for (auto& p : ft.poles) p.center *= t;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 16; ++i) {
    const cplx w = std::polar(0.3 + 0.7 * u(rng), 2.0 * std::numbers::pi * u(rng));
    const cplx lhs = ft(w);
    const cplx rhs = f(w / t) / t;
    out.dilation_error = std::max(out.dilation_error, std::abs(lhs - rhs) / std::abs(rhs));
  }
  return out;
}

std::vector<double> distance_grid(const ZalcmanDomain& domain, int k_max, int per_band) {
  if (k_max < 1 || k_max > domain.depth()) {
    throw Error(ErrorCode::ScaleNotRetained, "k_max outside the retained bands");
  }
  std::vector<double> xs;
  for (int k = 1; k <= k_max; ++k) {
    const double a = domain.log_x()[k - 1], b = domain.log_x()[k];
    xs.push_back(domain.x(k));
    for (int i = 1; i < per_band; ++i) xs.push_back(std::exp(a + (b - a) * i / per_band));
  }
  xs.push_back(domain.x(k_max + 1));
  return xs;
}

DistanceProfile distance_profile(const GramSystem& G, const std::vector<double>& x_grid,
                                 const ZalcmanDomain* domain) {
  DistanceProfile p;
  std::vector<MetricEstimate> est(x_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < x_grid.size(); ++i) est[i] = subspace_metric(G, -x_grid[i]);
  double d = 0.0;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (i > 0) {
      if (!(x_grid[i] < x_grid[i - 1])) {
        throw Error(ErrorCode::PreconditionViolated, "distance grid must be decreasing");
      }
      d += 0.5 * (est[i - 1].b_est * x_grid[i - 1] + est[i].b_est * x_grid[i]) *
           std::log(x_grid[i - 1] / x_grid[i]);
    }
    DistanceRow row;
    row.x = x_grid[i];
    row.band = domain ? domain->band_of(x_grid[i]) : 0;
    row.b_est = est[i].b_est;
    row.d_est = d;
    p.rows.push_back(row);
  }
  if (domain) {
    auto at = [&](double x) -> const DistanceRow* {
      for (const auto& r : p.rows) {
        if (r.x == x) return &r;
      }
      return nullptr;
    };
    for (int k = 1; k <= domain->depth(); ++k) {
      const auto* a = at(domain->x(k));
      const auto* b = at(domain->x(k + 1));
      if (a && b) {
        p.bands.push_back(k);
        p.increments.push_back(b->d_est - a->d_est);
      }
    }
  }
  return p;
}

}  // namespace berglab
