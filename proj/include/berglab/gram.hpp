#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "berglab/domain.hpp"
#include "berglab/kernels.hpp"

namespace berglab {

using kernels::Exec;

// coeff / (z - center)^order, order >= 1.
struct PoleTerm {
  cplx center;
  int order = 1;
  cplx coeff{1.0, 0.0};
};

// Polynomial plus a finite sum of pole terms.
struct RationalFunction {
  std::vector<cplx> poly;  // poly[j] z^j
  std::vector<PoleTerm> poles;

  // Point given as base + off; pole distances use (base - center) + off so a
  // node on a tiny circle keeps full relative accuracy.
  cplx operator()(cplx z) const { return eval(z, 0.0); }
  cplx eval(cplx base, cplx off) const;
  cplx derivative(cplx z) const;
  // Psi with d/dzbar Psi = conj(f): conjugate of the single-valued antiderivative
  // plus conj(residue) * log|z - c|^2 for every simple pole.
  cplx psi(cplx base, cplx off) const;
};

struct BasisPole {
  cplx center;
  int max_order = 1;
  double scale = 1.0;  // term m is scale^(m-1) / (z - c)^m
};

struct BasisSpec {
  int degree = 8;  // polynomials z^0..z^degree; -1 for none
  std::vector<BasisPole> poles;
};

std::vector<RationalFunction> expand(const BasisSpec& spec);

// Polynomials of the given degree plus poles at every removed-disk center
// (scaled by the disk radius); Sandwich adds a pole at 0 inside the origin hole.
BasisSpec default_basis(const ZalcmanDomain& domain, int degree = 8, int max_order = 2);

struct QuadratureOptions {
  double tol = 1e-10;  // per-entry change under doubling, relative to sqrt(G_ii G_jj)
  int n0 = 32;
  int n_max = 1 << 17;
  Exec exec = Exec::Parallel;
};

struct QuadratureInfo {
  std::vector<int> nodes_per_circle;  // outer circle first, then holes
  double achieved_tol = 0.0;
};

// H_ij = <b_j, b_i> = integral over the domain of b_j conj(b_i), so that
// ||sum c_j b_j||^2 = c^* H c. Boundary-integral form: each circle is
// integrated by the trapezoid rule and doubled until converged.
// Throws QuadratureStall, or PreconditionViolated when a pole is not strictly
// inside a hole or outside the outer disk.
Eigen::MatrixXcd gram_matrix(const PlanarDomain& domain, const std::vector<RationalFunction>& f,
                             const QuadratureOptions& opt = {}, QuadratureInfo* info = nullptr);

double norm2(const PlanarDomain& domain, const RationalFunction& f,
             const QuadratureOptions& opt = {}, QuadratureInfo* info = nullptr);

struct GramSystem {
  PlanarDomain domain;
  BasisSpec spec;
  std::vector<RationalFunction> basis;
  Eigen::MatrixXcd H;
  Eigen::VectorXd jacobi;          // 1 / sqrt(H_ii)
  std::vector<int> pivots;         // selected basis indices, pivot order
  Eigen::MatrixXcd L;              // lower factor of the normalized pivot block
  int effective_rank = 0;
  double min_pivot = 0.0;          // most negative trailing pivot (normalized)
  QuadratureInfo quad;
};

struct FactorOptions {
  double drop_tol = 1e-12;
};

// Assemble, symmetrize and factor. Throws RankCollapse when fewer than half
// of the basis functions survive the pivoted factorization.
GramSystem assemble_gram(const PlanarDomain& domain, const BasisSpec& spec,
                         const QuadratureOptions& qopt = {}, const FactorOptions& fopt = {});
GramSystem assemble_gram(const PlanarDomain& domain, std::vector<RationalFunction> basis,
                         const QuadratureOptions& qopt = {}, const FactorOptions& fopt = {});

struct MonteCarloGram {
  Eigen::MatrixXcd H;
  Eigen::MatrixXd stderr_;
  std::size_t accepted = 0;
};

// Independent oracle: uniform rejection sampling over the outer disk.
MonteCarloGram monte_carlo_gram(const PlanarDomain& domain,
                                const std::vector<RationalFunction>& f,
                                std::size_t samples = 1000000, std::uint64_t seed = 1);

}  // namespace berglab
