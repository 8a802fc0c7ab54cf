#include "berglab/gram.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "berglab/error.hpp"

namespace berglab {

cplx RationalFunction::eval(cplx base, cplx off) const {
  const cplx z = base + off;
  cplx s = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) s = s * z + *it;
  for (const auto& p : poles) {
    const cplx d = (base - p.center) + off;
    s += p.coeff / std::pow(d, p.order);
  }
  return s;
}

cplx RationalFunction::derivative(cplx z) const {
  cplx s = 0.0;
  for (std::size_t j = poly.size(); j-- > 1;) s = s * z + static_cast<double>(j) * poly[j];
  for (const auto& p : poles) {
    const cplx d = z - p.center;
    s -= static_cast<double>(p.order) * p.coeff / std::pow(d, p.order + 1);
  }
  return s;
}

cplx RationalFunction::psi(cplx base, cplx off) const {
  const cplx z = base + off;
  cplx P = 0.0;
  for (std::size_t j = poly.size(); j-- > 0;) P = P * z + poly[j] / static_cast<double>(j + 1);
  P *= z;
  cplx logs = 0.0;
  for (const auto& p : poles) {
    const cplx d = (base - p.center) + off;
    if (p.order == 1) {
      logs += std::conj(p.coeff) * (2.0 * std::log(std::abs(d)));
    } else {
      P -= p.coeff / (static_cast<double>(p.order - 1) * std::pow(d, p.order - 1));
    }
  }
  return std::conj(P) + logs;
}

std::vector<RationalFunction> expand(const BasisSpec& spec) {
  std::vector<RationalFunction> out;
  for (int j = 0; j <= spec.degree; ++j) {
    RationalFunction f;
    f.poly.assign(static_cast<std::size_t>(j) + 1, 0.0);
    f.poly.back() = 1.0;
    out.push_back(std::move(f));
  }
  for (const auto& p : spec.poles) {
    for (int m = 1; m <= p.max_order; ++m) {
      RationalFunction f;
      f.poles.push_back({p.center, m, std::pow(p.scale, m - 1)});
      out.push_back(std::move(f));
    }
  }
  return out;
}

BasisSpec default_basis(const ZalcmanDomain& domain, int degree, int max_order) {
  BasisSpec spec;
  spec.degree = degree;
  for (int k = 1; k <= domain.depth(); ++k) {
    spec.poles.push_back({domain.x(k), max_order, domain.r(k)});
  }
  if (domain.variant() == Truncation::Sandwich) {
    spec.poles.push_back({0.0, max_order, domain.origin_hole_radius()});
  }
  return spec;
}

namespace {

struct Circle {
  cplx center;
  double radius;
  double sign;  // +1 outer (counterclockwise), -1 hole
};

void check_poles(const PlanarDomain& domain, const std::vector<RationalFunction>& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (const auto& p : f[i].poles) {
      bool ok = std::abs(p.center - domain.outer().center) > domain.outer().radius;
      for (const auto& h : domain.holes()) ok = ok || std::abs(p.center - h.center) < h.radius;
      if (!ok) {
        throw Error(ErrorCode::PreconditionViolated,
                    "basis function " + std::to_string(i) + " has a pole in the closed domain");
      }
    }
  }
}

// (N x B) contribution of one circle, already in the <b_a, b_b> orientation.
Eigen::MatrixXcd circle_contribution(const Circle& c, int N, const std::vector<RationalFunction>& f,
                                     Exec exec) {
  const auto B = static_cast<Eigen::Index>(f.size());
  Eigen::MatrixXcd F(N, B), Psi(N, B);
  Eigen::VectorXcd w(N);
  auto row = [&](int n) {
    const double th = 2.0 * std::numbers::pi * n / N;
    const cplx e = std::polar(1.0, th);
    const cplx off = c.radius * e;
    w(n) = (std::numbers::pi / N) * c.sign * c.radius * e;
    for (Eigen::Index b = 0; b < B; ++b) {
      F(n, b) = f[b].eval(c.center, off);
      Psi(n, b) = f[b].psi(c.center, off);
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int n = 0; n < N; ++n) row(n);
  } else {
    for (int n = 0; n < N; ++n) row(n);
  }
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(B, B);
  kernels::gram_accumulate(F, Psi, w, G, exec);
  return G;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const PlanarDomain& domain, const std::vector<RationalFunction>& f,
                             const QuadratureOptions& opt, QuadratureInfo* info) {
  check_poles(domain, f);
  std::vector<Circle> circles{{domain.outer().center, domain.outer().radius, 1.0}};
  for (const auto& h : domain.holes()) circles.push_back({h.center, h.radius, -1.0});

  const auto B = static_cast<Eigen::Index>(f.size());
  struct State {
    int N;
    Eigen::MatrixXcd prev, cur;
    double err = 0.0;
  };
  std::vector<State> st;
  for (const auto& c : circles) {
    State s{opt.n0, circle_contribution(c, opt.n0, f, opt.exec),
            circle_contribution(c, 2 * opt.n0, f, opt.exec)};
    s.N = 2 * opt.n0;
    st.push_back(std::move(s));
  }

  Eigen::MatrixXcd G;
  for (;;) {
    G = Eigen::MatrixXcd::Zero(B, B);
    for (const auto& s : st) G += s.cur;
    Eigen::VectorXd scale(B);
    for (Eigen::Index i = 0; i < B; ++i) scale(i) = std::sqrt(std::abs(G(i, i).real()));
    bool all = true;
    for (std::size_t ci = 0; ci < st.size(); ++ci) {
      auto& s = st[ci];
      double e = 0.0;
      for (Eigen::Index j = 0; j < B; ++j) {
        for (Eigen::Index i = 0; i < B; ++i) {
          const double den = scale(i) * scale(j);
          const double diff = std::abs(s.cur(i, j) - s.prev(i, j));
          if (diff > 0.0) e = std::max(e, den > 0.0 ? diff / den : std::numeric_limits<double>::infinity());
        }
      }
      s.err = e;
      if (e > opt.tol) {
        all = false;
        if (2 * s.N > opt.n_max) {
          throw Error(ErrorCode::QuadratureStall,
                      "circle " + std::to_string(ci) + ": change " + std::to_string(e) +
                          " at " + std::to_string(s.N) + " nodes");
        }
        s.N *= 2;
        s.prev = std::move(s.cur);
        s.cur = circle_contribution(circles[ci], s.N, f, opt.exec);
      }
    }
    if (all) break;
  }
  if (info) {
    info->nodes_per_circle.clear();
    info->achieved_tol = 0.0;
    for (const auto& s : st) {
      info->nodes_per_circle.push_back(s.N);
      info->achieved_tol = std::max(info->achieved_tol, s.err);
    }
  }
  // G(a,b) = <b_a, b_b>; H_ij = <b_j, b_i>.
  Eigen::MatrixXcd H = G.transpose();
  return (H + H.adjoint().eval()) * 0.5;
}

double norm2(const PlanarDomain& domain, const RationalFunction& f, const QuadratureOptions& opt,
             QuadratureInfo* info) {
  return gram_matrix(domain, {f}, opt, info)(0, 0).real();
}

GramSystem assemble_gram(const PlanarDomain& domain, const BasisSpec& spec,
                         const QuadratureOptions& qopt, const FactorOptions& fopt) {
  GramSystem g = assemble_gram(domain, expand(spec), qopt, fopt);
  g.spec = spec;
  return g;
}

GramSystem assemble_gram(const PlanarDomain& domain, std::vector<RationalFunction> basis,
                         const QuadratureOptions& qopt, const FactorOptions& fopt) {
  GramSystem g{domain, {}, std::move(basis), {}, {}, {}, {}, 0, 0.0, {}};
  g.H = gram_matrix(domain, g.basis, qopt, &g.quad);
  const auto n = g.H.rows();
  g.jacobi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = g.H(i, i).real();
    g.jacobi(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  const Eigen::MatrixXcd A = g.jacobi.asDiagonal() * g.H * g.jacobi.asDiagonal();

  // Outer-product pivoted Cholesky.
  std::vector<int> perm(n);
  for (Eigen::Index i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = A(i, i).real();
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  Eigen::Index r = 0;
  for (; r < n; ++r) {
    Eigen::Index p = r;
    for (Eigen::Index i = r + 1; i < n; ++i) {
      if (d(i) > d(p)) p = i;
    }
    if (!(d(p) > fopt.drop_tol)) break;
    std::swap(perm[r], perm[p]);
    std::swap(d(r), d(p));
    L.row(r).swap(L.row(p));
    const double lkk = std::sqrt(d(r));
    L(r, r) = lkk;
    for (Eigen::Index i = r + 1; i < n; ++i) {
      cplx s = A(perm[i], perm[r]);
      for (Eigen::Index j = 0; j < r; ++j) s -= L(i, j) * std::conj(L(r, j));
      L(i, r) = s / lkk;
      d(i) -= std::norm(L(i, r));
    }
  }
  g.min_pivot = 0.0;
  for (Eigen::Index i = r; i < n; ++i) g.min_pivot = std::min(g.min_pivot, d(i));
  g.effective_rank = static_cast<int>(r);
  g.pivots.assign(perm.begin(), perm.begin() + r);
  g.L = L.topLeftCorner(r, r);
  if (2 * r < n) {
    throw Error(ErrorCode::RankCollapse, "effective rank " + std::to_string(r) + " of " +
                                             std::to_string(n) + " basis functions");
  }
  return g;
}

MonteCarloGram monte_carlo_gram(const PlanarDomain& domain, const std::vector<RationalFunction>& f,
                                std::size_t samples, std::uint64_t seed) {
  const auto B = static_cast<Eigen::Index>(f.size());
  MonteCarloGram mc;
  mc.H = Eigen::MatrixXcd::Zero(B, B);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(B, B);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Disk& outer = domain.outer();
  Eigen::VectorXcd v(B);
  for (std::size_t s = 0; s < samples; ++s) {
    const double rad = outer.radius * std::sqrt(u(rng));
    const double th = 2.0 * std::numbers::pi * u(rng);
    const cplx z = outer.center + std::polar(rad, th);
    if (!domain.contains(z)) continue;
    ++mc.accepted;
    for (Eigen::Index i = 0; i < B; ++i) v(i) = f[i](z);
    for (Eigen::Index j = 0; j < B; ++j) {
      for (Eigen::Index i = 0; i < B; ++i) {
        const cplx t = v(j) * std::conj(v(i));
        mc.H(i, j) += t;
        sq(i, j) += std::norm(t);
      }
    }
  }
  const double area = std::numbers::pi * outer.radius * outer.radius;
  const double M = static_cast<double>(samples);
  mc.stderr_.resize(B, B);
  for (Eigen::Index j = 0; j < B; ++j) {
    for (Eigen::Index i = 0; i < B; ++i) {
      const cplx mean = mc.H(i, j) / M;
      const double var = std::max(0.0, sq(i, j) / M - std::norm(mean));
      mc.stderr_(i, j) = area * std::sqrt(var / M);
    }
  }
  mc.H *= area / M;
  return mc;
}

}  // namespace berglab
