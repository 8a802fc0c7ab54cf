#include "berglab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "berglab/error.hpp"

namespace berglab {

double potential(const WeightedPointSet& mu, cplx z) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weights[i] <= 0.0) continue;
    const double d = std::abs(z - mu.nodes[i]);
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    s += mu.weights[i] * std::log(d);
  }
  return s;
}

double energy(const WeightedPointSet& mu, Exec exec) {
  mu.validate();
  std::vector<double> row;
  kernels::log_matvec(mu.nodes, mu.cells, mu.weights, row, exec);
  double s = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) s += mu.weights[i] * row[i];
  return s;
}

DiameterResult nth_diameter(const CandidateGrid& grid, int n, const FeketeOptions& opt) {
  if (n < 2) throw Error(ErrorCode::PreconditionViolated, "n-th diameter needs n >= 2");
  const std::size_t N = grid.size();
  if (N < 4 * static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::GridTooSmall, "candidate grid has " + std::to_string(N) +
                                             " points, need >= " + std::to_string(4 * n));
  }
  std::vector<double> P(N, 0.0);
  std::vector<int> occ(N, 0);
  std::vector<std::size_t> sel;
  sel.reserve(n);

  // Seed: the candidate farthest from the centroid.
  cplx centroid = 0.0;
  for (std::size_t c = 0; c < N; ++c) centroid += grid.position(c);
  centroid /= static_cast<double>(N);
  std::size_t first = 0;
  double far = -1.0;
  for (std::size_t c = 0; c < N; ++c) {
    const double d = std::abs(grid.position(c) - centroid);
    if (d > far) {
      far = d;
      first = c;
    }
  }
  auto place = [&](std::size_t c) {
    sel.push_back(c);
    occ[c] += 1;
    kernels::add_point_potential(grid, c, 1.0, P, opt.exec);
  };
  place(first);
  while (sel.size() < static_cast<std::size_t>(n)) {
    const std::size_t c = kernels::argmax_free(P, occ, opt.exec);
    if (c == N) throw Error(ErrorCode::GridTooSmall, "ran out of free candidates");
    place(c);
  }

  DiameterResult res;
  for (int pass = 0; pass < opt.max_passes; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < sel.size(); ++i) {
      const std::size_t cur = sel[i];
      kernels::add_point_potential(grid, cur, -1.0, P, opt.exec);
      occ[cur] -= 1;
      const std::size_t best = kernels::argmax_free(P, occ, opt.exec);
      // P[cur] now holds the potential of the other n-1 points at cur.
      std::size_t next = cur;
      if (best != N && P[best] > P[cur] + 1e-14 * std::max(1.0, std::abs(P[cur]))) {
        next = best;
        moved = true;
      }
      sel[i] = next;
      occ[next] += 1;
      kernels::add_point_potential(grid, next, 1.0, P, opt.exec);
    }
    res.passes = pass + 1;
    if (!moved) break;
  }

  double total = 0.0;
  for (std::size_t c : sel) total += P[c];
  const double nn = static_cast<double>(n);
  res.log_delta = total / (nn * (nn - 1.0));
  res.delta = std::exp(res.log_delta);
  res.indices = sel;
  for (std::size_t c : sel) res.config.nodes.push_back(grid.position(c));
  return res;
}

GridFactory circle_grid(const Disk& circle, int per_point) {
  return [circle, per_point](int n) -> std::unique_ptr<CandidateGrid> {
    return std::make_unique<PointGrid>(
        circle_nodes(circle, static_cast<std::size_t>(per_point) * n));
  };
}

GridFactory segment_grid(cplx a, cplx b, int per_point) {
  return [a, b, per_point](int n) -> std::unique_ptr<CandidateGrid> {
    const std::size_t N = static_cast<std::size_t>(per_point) * n;
    std::vector<cplx> pts(N);
    for (std::size_t k = 0; k < N; ++k) {
      const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) /
                                             static_cast<double>(N - 1)));
      pts[k] = a + (b - a) * t;
    }
    return std::make_unique<PointGrid>(std::move(pts));
  };
}

GridFactory arc_grid(const ArcSet& set, int per_point) {
  return [set, per_point](int n) -> std::unique_ptr<CandidateGrid> {
    const std::size_t total = static_cast<std::size_t>(per_point) * n;
    return std::make_unique<PointGrid>(discretize(set, total, 4).points.nodes);
  };
}

GridFactory point_cloud_grid(std::vector<cplx> points) {
  return [points](int) -> std::unique_ptr<CandidateGrid> {
    return std::make_unique<PointGrid>(points);
  };
}

GridFactory cantor_grid(const CantorSet& set, int per_point) {
  return [set, per_point](int n) -> std::unique_ptr<CandidateGrid> {
    const std::size_t intervals = std::size_t{1} << set.depth();
    const std::size_t want = static_cast<std::size_t>(per_point) * n;
    const std::size_t per = std::max<std::size_t>(2, (want + intervals - 1) / intervals);
    return std::make_unique<CantorGrid>(set, per);
  };
}

std::string_view to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::Transfinite: return "transfinite";
    case CapacityMethod::Energy: return "energy";
    case CapacityMethod::ClosedForm: return "closed_form";
    case CapacityMethod::CantorBound: return "cantor_bound";
  }
  return "unknown";
}

CapacityEstimate capacity_via_transfinite(const GridFactory& grid,
                                          const std::vector<int>& schedule,
                                          const FeketeOptions& opt) {
  if (schedule.empty()) throw Error(ErrorCode::PreconditionViolated, "empty n schedule");
  CapacityEstimate est;
  est.method = CapacityMethod::Transfinite;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i] <= schedule[i - 1]) {
      throw Error(ErrorCode::PreconditionViolated, "n schedule must increase");
    }
    const auto g = grid(schedule[i]);
    const DiameterResult r = nth_diameter(*g, schedule[i], opt);
    est.schedule.push_back(schedule[i]);
    est.diagnostics.push_back(r.delta);
  }
  est.n = schedule.back();
  est.value = est.diagnostics.back();
  return est;
}

namespace {

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

std::vector<double> inferred_cells(const std::vector<cplx>& z) {
  std::vector<double> cells(z.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (i != j) cells[i] = std::min(cells[i], std::abs(z[i] - z[j]));
    }
  }
  for (double c : cells) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::PreconditionViolated, "equilibrium nodes must be distinct");
    }
  }
  return cells;
}

double kkt_residual(const Eigen::VectorXd& Lw, const Eigen::VectorXd& w, double I) {
  const double floor = 1e-10 / static_cast<double>(w.size());
  double res = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > floor) res = std::max(res, std::abs(Lw(i) - I));
  }
  return res;
}

// Solve L_SS w = lambda 1, sum w = 1 on a support set, growing and shrinking
// the set until the discrete KKT conditions hold. Returns false when it does
// not settle.
bool active_set_polish(const Eigen::MatrixXd& L, Eigen::VectorXd& w) {
  const Eigen::Index n = w.size();
  std::vector<char> in(n, 0);
  const double floor = 1e-12 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) in[i] = w(i) > floor;
  for (int round = 0; round < 50; ++round) {
    std::vector<Eigen::Index> S;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in[i]) S.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(S.size());
    if (m == 0) return false;
    Eigen::MatrixXd A(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) A(a, b) = L(S[a], S[b]);
      A(a, m) = -1.0;
      A(m, a) = 1.0;
    }
    A(m, m) = 0.0;
    rhs(m) = 1.0;
    const Eigen::VectorXd x = A.fullPivLu().solve(rhs);
    if (!x.allFinite()) return false;
    // Drop negative weights first.
    bool changed = false;
    for (Eigen::Index a = 0; a < m; ++a) {
      if (x(a) < 0.0) {
        in[S[a]] = 0;
        changed = true;
      }
    }
    if (changed) continue;
    Eigen::VectorXd cand = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < m; ++a) cand(S[a]) = x(a);
    const Eigen::VectorXd Lw = L * cand;
    const double lambda = x(m);
    const double tol = 1e-12 * std::max(1.0, std::abs(lambda));
    Eigen::Index worst = -1;
    double worst_v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!in[i] && Lw(i) - lambda > tol && Lw(i) - lambda > worst_v) {
        worst = i;
        worst_v = Lw(i) - lambda;
      }
    }
    if (worst >= 0) {
      in[worst] = 1;
      continue;
    }
    w = cand;
    return true;
  }
  return false;
}

}  // namespace

EquilibriumSolution equilibrium_measure(const WeightedPointSet& candidates,
                                        const EquilibriumOptions& opt) {
  const std::size_t n = candidates.size();
  if (n < 2) {
    throw Error(ErrorCode::PreconditionViolated, "equilibrium needs at least 2 nodes");
  }
  const std::vector<double> cells =
      candidates.has_cells() ? candidates.cells : inferred_cells(candidates.nodes);
  const Eigen::MatrixXd L = kernels::log_matrix(candidates.nodes, cells, opt.exec);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / n);
  Eigen::VectorXd Lw = L * w;
  double I = w.dot(Lw);
  // Initial step from the Frobenius bound on the Lipschitz constant of 2Lw.
  double step = 1.0 / (2.0 * L.norm());
  int iter = 0;
  int quiet = 0;
  bool converged = false;
  for (; iter < opt.max_iter; ++iter) {
    const Eigen::VectorXd g = 2.0 * Lw;
    Eigen::VectorXd w_new;
    double I_new = 0.0;
    Eigen::VectorXd Lw_new;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      w_new = project_simplex(w + step * g);
      Lw_new = L * w_new;
      I_new = w_new.dot(Lw_new);
      const Eigen::VectorXd d = w_new - w;
      if (I_new >= I + g.dot(d) - d.squaredNorm() / (2.0 * step) - 1e-15 * std::abs(I)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Frank-Wolfe step toward the best vertex.
      Eigen::Index k = 0;
      g.maxCoeff(&k);
      Eigen::VectorXd dir = -w;
      dir(k) += 1.0;
      const double a = dir.dot(L * dir);
      const double b = 2.0 * dir.dot(Lw);
      double gamma = (a < 0.0) ? std::clamp(-b / (2.0 * a), 0.0, 1.0) : (b > 0.0 ? 1.0 : 0.0);
      w_new = w + gamma * dir;
      Lw_new = L * w_new;
      I_new = w_new.dot(Lw_new);
    }
    const double change = std::abs(I_new - I) / std::max(1.0, std::abs(I));
    w = w_new;
    Lw = Lw_new;
    I = I_new;
    step *= 1.5;
    quiet = change < opt.tol ? quiet + 1 : 0;
    if (quiet >= 5) {
      converged = true;
      break;
    }
  }

  EquilibriumSolution sol;
  sol.iterations = iter;
  if (opt.polish) {
    Eigen::VectorXd wp = w;
    if (active_set_polish(L, wp)) {
      const double Ip = wp.dot(L * wp);
      if (Ip >= I - 1e-12 * std::max(1.0, std::abs(I))) {
        w = wp;
        Lw = L * w;
        I = Ip;
        sol.polished = true;
        converged = true;
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NonConvergence,
                "equilibrium solver stopped after " + std::to_string(iter) + " iterations");
  }
  sol.measure.nodes = candidates.nodes;
  sol.measure.cells = cells;
  sol.measure.weights.assign(w.data(), w.data() + w.size());
  // Renormalize away rounding drift in the simplex sum.
  const double total = std::accumulate(sol.measure.weights.begin(), sol.measure.weights.end(), 0.0);
  for (double& x : sol.measure.weights) x /= total;
  sol.energy = I;
  sol.capacity = std::exp(I);
  sol.kkt_residual = kkt_residual(Lw, w, I);
  return sol;
}

CapacityEstimate capacity_via_energy(const WeightedPointSet& candidates,
                                     const EquilibriumOptions& opt) {
  const EquilibriumSolution sol = equilibrium_measure(candidates, opt);
  CapacityEstimate est;
  est.method = CapacityMethod::Energy;
  est.value = sol.capacity;
  est.n = static_cast<int>(candidates.size());
  est.schedule = {est.n};
  est.diagnostics = {sol.capacity};
  return est;
}

double cantor_log_capacity_bound(const CantorSet& set) {
  if (set.depth() < 1) throw Error(ErrorCode::PreconditionViolated, "cantor bound needs J >= 1");
  const auto l = set.lengths();
  double s = std::log(0.5);
  double scale = 1.0;
  for (int j = 0; j < set.depth(); ++j) {
    s += scale * std::log(2.0 * l[j + 1] / l[j]);
    scale *= 0.5;
  }
  return s;
}

double cantor_capacity_bound(const CantorSet& set) {
  return std::exp(cantor_log_capacity_bound(set));
}

PlaneMap PlaneMap::dilate(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::PreconditionViolated, "dilation needs t > 0");
  PlaneMap m;
  m.kind = Kind::Dilate;
  m.t = t;
  m.f = [t](cplx z) { return t * z; };
  return m;
}

PlaneMap PlaneMap::holder(double A, double c, std::function<cplx(cplx)> f) {
  if (!(A > 0.0) || !(c > 0.0 && c <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "holder map needs A > 0, 0 < c <= 1");
  }
  PlaneMap m;
  m.kind = Kind::Holder;
  m.A = A;
  m.c = c;
  m.f = std::move(f);
  return m;
}

ScalingReport scaling_law_check(const std::vector<cplx>& nodes, int n, const PlaneMap& map,
                                const FeketeOptions& opt) {
  // Non-injective maps fold nodes onto each other; keep one copy.
  std::vector<cplx> image;
  for (const cplx z : nodes) {
    const cplx fz = map.f(z);
    const bool seen = std::any_of(image.begin(), image.end(), [&](cplx q) {
      return std::abs(q - fz) <= 1e-12 * std::max(1.0, std::abs(fz));
    });
    if (!seen) image.push_back(fz);
  }
  ScalingReport rep;
  rep.cap = nth_diameter(PointGrid(nodes), n, opt).delta;
  rep.cap_image = nth_diameter(PointGrid(image), n, opt).delta;
  if (map.kind == PlaneMap::Kind::Dilate) {
    rep.predicted = map.t * rep.cap;
    rep.ratio = rep.cap_image / rep.predicted;
    rep.holds = std::abs(rep.cap_image - rep.predicted) <= 0.02 * rep.predicted;
  } else {
    rep.predicted = map.A * std::pow(rep.cap, map.c);
    rep.ratio = rep.cap_image / rep.predicted;
    rep.holds = rep.cap_image <= 1.02 * rep.predicted;
  }
  return rep;
}

SubadditivityReport subadditivity_check(const std::vector<std::vector<cplx>>& parts, int n,
                                        double d, const FeketeOptions& opt) {
  if (parts.empty()) throw Error(ErrorCode::PreconditionViolated, "no parts");
  std::vector<cplx> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  double diam = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) diam = std::max(diam, std::abs(all[i] - all[j]));
  }
  SubadditivityReport rep;
  rep.d = d > 0.0 ? d : 2.0 * diam;
  rep.cap_union = nth_diameter(PointGrid(all), n, opt).delta;
  if (diam > rep.d || rep.cap_union > rep.d) {
    throw Error(ErrorCode::PreconditionViolated, "d below diameter or capacity of the union");
  }
  rep.lhs = 1.0 / std::log(rep.d / rep.cap_union);
  for (const auto& p : parts) {
    const double c = nth_diameter(PointGrid(p), n, opt).delta;
    rep.cap_parts.push_back(c);
    rep.rhs += 1.0 / std::log(rep.d / c);
  }
  rep.holds = rep.lhs <= 1.05 * rep.rhs;
  return rep;
}

}  // namespace berglab
