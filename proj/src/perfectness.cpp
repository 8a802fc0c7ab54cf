#include "berglab/perfectness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "berglab/error.hpp"

namespace berglab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double arg_0_2pi(cplx v) {
  const double t = std::arg(v);
  return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
}

}  // namespace

cplx boundary_point_at(const PlanarDomain& domain, cplx a, double d) {
  std::optional<cplx> best;
  double best_arg = 0.0;
  for (const auto& piece : domain.spectrum_pieces(a)) {
    if (d < piece.range.lo || d > piece.range.hi) continue;
    const cplx p = domain.point_at_distance(piece.component, a, d);
    const double t = arg_0_2pi(p - a);
    if (!best || t < best_arg) {
      best = p;
      best_arg = t;
    }
  }
  if (!best) throw Error(ErrorCode::EmptySet, "no boundary point at the requested distance");
  return *best;
}

namespace {

double log_c_star_of(const IntervalUnion& spec, double r, const ScaleFunction& h) {
  const auto dmax = spec.max_in(0.0, r);
  if (!dmax || *dmax <= 0.0) return kNegInf;
  return std::log(*dmax) - h.log_eval(std::log(r));
}

}  // namespace

AnnulusTestReport annulus_condition(const PlanarDomain& domain, cplx a, double r, double c,
                                    const ScaleFunction& h) {
  if (!(r > 0.0)) throw Error(ErrorCode::PreconditionViolated, "annulus needs r > 0");
  const IntervalUnion spec = domain.distance_spectrum(a);
  AnnulusTestReport rep;
  rep.a = a;
  rep.r = r;
  rep.c = c;
  const double log_h = h.log_eval(std::log(r));
  rep.h_r = std::exp(log_h);
  rep.log_c_star = log_c_star_of(spec, r, h);
  rep.c_star = std::exp(rep.log_c_star);
  rep.satisfied = c <= 0.0 || std::log(c) <= rep.log_c_star;
  if (rep.satisfied && rep.log_c_star > kNegInf) {
    const double lo = c > 0.0 ? std::exp(std::log(c) + log_h) : 0.0;
    double d = spec.min_in(lo, r).value_or(0.0);
    if (d <= 0.0) d = *spec.max_in(0.0, r);
    rep.witness_distance = d;
    rep.witness = boundary_point_at(domain, a, d);
  }
  return rep;
}

std::vector<cplx> default_boundary_samples(const PlanarDomain& domain) {
  std::vector<cplx> out;
  if (domain.punctured_origin()) out.emplace_back(0.0, 0.0);
  for (const cplx z : circle_nodes(domain.outer(), 8)) out.push_back(z);
  for (const auto& hole : domain.holes()) {
    for (const cplx z : circle_nodes(hole, 8)) out.push_back(z);
  }
  return out;
}

std::vector<double> log_radii(double r_min, double r0, int r_per_decade) {
  if (!(r_min > 0.0 && r0 >= r_min) || r_per_decade < 1) {
    throw Error(ErrorCode::PreconditionViolated, "radius grid needs 0 < r_min <= r0");
  }
  const double lo = std::log10(r_min);
  const double hi = std::log10(r0);
  const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) * r_per_decade)));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) {
    out.push_back(std::pow(10.0, hi - (hi - lo) * static_cast<double>(i) / steps));
  }
  out.front() = r0;
  out.back() = r_min;
  return out;
}

ConstantProfile best_constant_profile(const PlanarDomain& domain, const ScaleFunction& h,
                                      double r0, double r_min,
                                      const std::vector<cplx>& a_samples, int r_per_decade) {
  const std::vector<cplx> samples =
      a_samples.empty() ? default_boundary_samples(domain) : a_samples;
  const std::vector<double> radii = log_radii(r_min, r0, r_per_decade);
  ConstantProfile prof;
  prof.table.resize(samples.size() * radii.size());
  const auto na = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < na; ++i) {
    const IntervalUnion spec = domain.distance_spectrum(samples[i]);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      ProfileRow& row = prof.table[i * radii.size() + j];
      row.a = samples[i];
      row.r = radii[j];
      row.log_c_star = log_c_star_of(spec, radii[j], h);
      row.c_star = std::exp(row.log_c_star);
    }
  }
  prof.log_c_star_global = std::numeric_limits<double>::infinity();
  for (const auto& row : prof.table) {
    prof.log_c_star_global = std::min(prof.log_c_star_global, row.log_c_star);
  }
  prof.c_star_global = std::exp(prof.log_c_star_global);
  return prof;
}

ConstantProfile best_constant_profile(const ZalcmanDomain& domain, const ScaleFunction& h,
                                      double r0, int r_per_decade) {
  const int K = domain.depth();
  if (r0 <= 0.0) r0 = domain.x(1) / 2.0;
  return best_constant_profile(domain.planar(), h, r0, domain.x(K) + domain.r(K), {},
                               r_per_decade);
}

WeakPerfectnessReport classify_weak_perfectness(const ZalcmanDomain& domain,
                                                const std::vector<double>& eps_list,
                                                double c_floor, double min_decay) {
  const ScaleFunction& h = domain.h();
  WeakPerfectnessReport rep;
  rep.param = h.param();
  rep.c_floor = c_floor;
  const ConstantProfile prof = best_constant_profile(domain, h);
  rep.c_star_global = prof.c_star_global;
  rep.satisfied = prof.c_star_global >= c_floor;

  if (!domain.planar().punctured_origin()) {
    throw Error(ErrorCode::PreconditionViolated, "failure witnesses need the origin on the boundary");
  }
  const IntervalUnion spec0 = domain.planar().distance_spectrum(0.0);
  for (double eps : eps_list) {
    FailureWitness fw;
    fw.eps = eps;
    fw.param = h.param() - eps;
    const ScaleFunction hw = h.with_param(fw.param);
    // Disk k+1 must be retained for the annulus at x_k / 2 to be exact.
    for (int k = 2; k < domain.depth(); ++k) {
      const double r = domain.x(k) / 2.0;
      fw.radii.push_back(r);
      fw.c_prime.push_back(std::exp(log_c_star_of(spec0, r, hw)));
      fw.implied.push_back(std::exp(log_c_star_of(spec0, r, h)));
    }
    bool decreasing = fw.c_prime.size() >= 2;
    for (std::size_t i = 1; i < fw.c_prime.size(); ++i) {
      decreasing = decreasing && fw.c_prime[i] < fw.c_prime[i - 1];
    }
    if (!fw.c_prime.empty()) {
      fw.decay = fw.c_prime.front() / fw.c_prime.back();
      const auto [mn, mx] = std::minmax_element(fw.implied.begin(), fw.implied.end());
      fw.implied_band = *mx / *mn;
    }
    fw.failed = decreasing && fw.decay >= min_decay && fw.implied_band <= 10.0;
    rep.weaker.push_back(std::move(fw));
  }
  return rep;
}

ConditionCProbe condition_C_probe(const PlanarDomain& domain, const ScaleFunction& h, cplx a,
                                  double r, int n, const FeketeOptions& opt) {
  if (!domain.on_boundary(a)) throw Error(ErrorCode::NotBoundaryPoint, "probe center off boundary");
  const ArcSet set = clipped_complement(domain, Disk{a, r});
  if (set.empty()) throw Error(ErrorCode::EmptySet, "closed disk misses the complement");
  ConditionCProbe p;
  p.a = a;
  p.r = r;
  p.arcs = set.arcs.size();
  const auto grid = arc_grid(set)(n);
  const DiameterResult d = nth_diameter(*grid, n, opt);
  p.cap = d.delta;
  p.ratio = std::exp(d.log_delta - h.log_eval(std::log(r)));
  return p;
}

ConditionCSweep condition_C_sweep(const PlanarDomain& domain, const ScaleFunction& h, cplx a,
                                  const std::vector<double>& radii, int n,
                                  const FeketeOptions& opt) {
  ConditionCSweep sw;
  for (double r : radii) sw.rows.push_back(condition_C_probe(domain, h, a, r, n, opt));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(sw.rows.size());
  sw.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& row : sw.rows) {
    const double x = std::log(row.r), y = std::log(row.cap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    sw.min_ratio = std::min(sw.min_ratio, row.ratio);
    sw.max_ratio = std::max(sw.max_ratio, row.ratio);
  }
  if (sw.rows.size() >= 2) sw.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return sw;
}

namespace {

// Boundary component carrying a point, or npos (generic position).
std::size_t component_of(const PlanarDomain& domain, cplx z) {
  const auto& b = domain.boundary();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].kind == BoundaryComponent::Kind::Point) {
      if (z == b[i].circle.center) return i;
    } else if (on_circle(z, b[i].circle)) {
      return i;
    }
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

PommerenkeCertificate pommerenke_construct(const PlanarDomain& domain, const ScaleFunction& h,
                                           cplx a, double c, int k, double s1) {
  if (k < 1 || k > 16) throw Error(ErrorCode::PreconditionViolated, "pommerenke depth must be 1..16");
  if (!(c > 0.0) || !(s1 > 0.0)) throw Error(ErrorCode::PreconditionViolated, "need c, s1 > 0");
  if (!domain.on_boundary(a)) throw Error(ErrorCode::NotBoundaryPoint, "a is not on the boundary");
  PommerenkeCertificate cert;
  cert.a = a;
  cert.c = c;
  std::vector<double> log_s{std::log(s1)};
  for (int m = 1; m <= k; ++m) log_s.push_back(std::log(c / 5.0) + h.log_eval(log_s.back()));
  for (double ls : log_s) cert.s.push_back(std::exp(ls));

  // Deep stages move by far less than one ulp of the coordinates, so each
  // point is kept as a chain of step vectors; same-circle steps use the chord
  // rho e^{i theta}(e^{it} - 1), exact to relative rounding.
  const std::size_t total = std::size_t{1} << k;
  const auto& boundary = domain.boundary();
  cert.points.assign(total, a);
  std::vector<cplx> step(total, 0.0);
  std::vector<std::size_t> comp(total, component_of(domain, a));
  std::vector<double> theta(total, 0.0);
  if (comp[0] < boundary.size()) theta[0] = std::arg(a - boundary[comp[0]].circle.center);

  for (int m = 1; m <= k; ++m) {
    const double lo = 5.0 * cert.s[m];
    const double hi = cert.s[m - 1];
    const std::size_t half = std::size_t{1} << (m - 1);
    for (std::size_t i = 0; i < half; ++i) {
      const cplx z = cert.points[i];
      const IntervalUnion spec = domain.distance_spectrum(z);
      // Step a hair inside the annulus so the realized point clears 5 s_{m+1}.
      auto d = spec.min_in(lo * (1.0 + 1e-9), hi);
      if (!d) d = spec.min_in(lo, hi);
      if (!d) {
        throw Error(ErrorCode::AnnulusEmpty,
                    "stage " + std::to_string(m) + ": no boundary point at distance in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
      }
      std::optional<cplx> best;
      double best_arg = 0.0;
      std::size_t best_comp = 0;
      double best_theta = 0.0;
      for (const auto& piece : domain.spectrum_pieces(z)) {
        if (*d < piece.range.lo || *d > piece.range.hi) continue;
        const auto& bc = boundary[piece.component];
        if (piece.component == comp[i] && bc.kind != BoundaryComponent::Kind::Point) {
          const double rho = bc.circle.radius;
          const double t = 2.0 * std::asin(std::min(1.0, *d / (2.0 * rho)));
          for (const double sgn : {1.0, -1.0}) {
            const double ts = sgn * t;
            const cplx chord = std::polar(rho, theta[i]) *
                               (cplx(0.0, 2.0 * std::sin(ts / 2.0)) * std::polar(1.0, ts / 2.0));
            const double ar = arg_0_2pi(chord);
            if (!best || ar < best_arg) {
              best = chord;
              best_arg = ar;
              best_comp = piece.component;
              best_theta = theta[i] + ts;
            }
          }
        } else {
          const cplx p = domain.point_at_distance(piece.component, z, *d);
          const double ar = arg_0_2pi(p - z);
          if (!best || ar < best_arg) {
            best = p - z;
            best_arg = ar;
            best_comp = piece.component;
            best_theta = std::arg(p - bc.circle.center);
          }
        }
      }
      if (!best) throw Error(ErrorCode::AnnulusEmpty, "stage " + std::to_string(m));
      step[i + half] = *best;
      comp[i + half] = best_comp;
      theta[i + half] = best_theta;
      cert.points[i + half] = z + *best;
    }
  }

  // z_i - z_j: only stages from the first difference on contribute; sum the
  // smallest steps first.
  auto difference = [&](std::size_t i, std::size_t j) {
    cplx acc = 0.0;
    for (int m = k; m >= 1; --m) {
      const std::size_t mask = (std::size_t{1} << m) - 1;
      const std::size_t bit = std::size_t{1} << (m - 1);
      if ((i & mask) == (j & mask)) break;
      if (i & bit) acc += step[i & mask];
      if (j & bit) acc -= step[j & mask];
    }
    return acc;
  };

  cert.distinct = true;
  cert.pairwise_ok = true;
  cert.min_pair_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const int stage = std::countr_zero(i ^ j) + 1;
      const double dist = std::abs(difference(i, j));
      if (!(dist > 0.0)) cert.distinct = false;
      const double bound = cert.s[stage];
      cert.min_pair_margin = std::min(cert.min_pair_margin, dist / bound);
      if (!(dist >= bound)) cert.pairwise_ok = false;
    }
  }
  cert.within_ok = true;
  for (std::size_t i = 1; i < total; ++i) {
    cert.within_ok = cert.within_ok && std::abs(difference(i, 0)) <= 2.0 * s1;
  }
  for (int l = 0; l < k; ++l) {
    cert.log_product_bound += std::ldexp(1.0, k - l - 1) * log_s[l];
    cert.log_capacity_floor += log_s[l] / std::ldexp(1.0, l + 1);
  }
  cert.capacity_floor = std::exp(cert.log_capacity_floor);
  return cert;
}

UCReport theorem_UC_report(const ZalcmanDomain& domain, int n, int r_per_decade,
                           double c_ratio_floor) {
  UCReport rep;
  const ScaleFunction& h = domain.h();
  const bool h1 = h.family() == ScaleFunction::Family::H1;
  rep.u = classify_weak_perfectness(domain, {h1 ? 0.1 : 0.5});
  rep.u_pass = rep.u.satisfied &&
               std::all_of(rep.u.weaker.begin(), rep.u.weaker.end(),
                           [](const FailureWitness& f) { return f.failed; });
  const int K = domain.depth();
  const auto radii = log_radii(domain.x(K) + domain.r(K), domain.x(1) / 2.0, r_per_decade);
  rep.c = condition_C_sweep(domain.planar(), h, 0.0, radii, n);
  if (h1) {
    rep.exponent_bound = h.alpha() < 2.0 ? 1.0 / (2.0 - h.alpha())
                                          : std::numeric_limits<double>::infinity();
    rep.c_pass = rep.c.slope <= rep.exponent_bound + 0.2;
  } else {
    rep.c_pass = rep.c.min_ratio >= c_ratio_floor;
  }
  return rep;
}

CantorUReport cantor_U_check(const CantorSet& set, double alpha, double c, int r_per_decade) {
  CantorUReport rep;
  rep.alpha = alpha;
  rep.c = c > 0.0 ? c : std::pow(2.0, -1.0 - alpha) * (1.0 - 1e-9);
  const int J = set.depth();
  const auto radii = log_radii(2.0 * set.length(J) * (1.0 + 1e-9), set.length(0), r_per_decade);
  const std::size_t count = set.endpoint_count();
  for (std::size_t e = 0; e < count; ++e) {
    const CantorSet::Point a = set.endpoint(e);
    const IntervalUnion spec = set.distance_spectrum(a);
    for (double r : radii) {
      ++rep.tests;
      const double lo = rep.c * std::pow(r, alpha);
      const auto d = spec.min_in(lo, r);
      if (!d) {
        if (rep.failures == 0) {
          rep.a = a;
          rep.r = r;
          rep.witness_distance = 0.0;
        }
        ++rep.failures;
      } else if (rep.failures == 0) {
        rep.a = a;
        rep.r = r;
        rep.witness_distance = *d;
      }
    }
  }
  rep.satisfied = rep.failures == 0;
  return rep;
}

CantorUCReport cantor_UC_report(double l0, double alpha, int max_depth, int n) {
  CantorUCReport rep;
  rep.u = cantor_U_check(build_cantor(l0, alpha, std::min(max_depth, 6)), alpha);
  for (int J = 1; J <= max_depth; ++J) {
    const CantorSet set = build_cantor(l0, alpha, J);
    rep.depths.push_back(J);
    rep.capacity_bound.push_back(cantor_capacity_bound(set));
    const auto g = cantor_grid(set)(n);
    rep.transfinite.push_back(nth_diameter(*g, n).delta);
  }
  bool dec = true;
  for (std::size_t i = 1; i < rep.capacity_bound.size(); ++i) {
    dec = dec && rep.capacity_bound[i] < rep.capacity_bound[i - 1];
  }
  rep.floor_to_zero = dec && rep.capacity_bound.size() >= 2 &&
                      rep.capacity_bound.back() < 1e-3 * rep.capacity_bound.front();
  return rep;
}

}  // namespace berglab
