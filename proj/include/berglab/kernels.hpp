#pragma once

// Hot loops, each in a serial reference form and an OpenMP form. The
// parallel versions write per-row partial results and reduce them serially,
// so both forms return bit-identical values.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "berglab/geometry.hpp"
#include "berglab/point_set.hpp"

namespace berglab::kernels {

enum class Exec { Serial, Parallel };

// out_i = sum_j L_ij w_j with L_ij = log|z_i - z_j| off the diagonal and
// L_ii = log(cell_i) - 3/2 (zero contribution when cells are empty).
void log_matvec(const std::vector<cplx>& z, const std::vector<double>& cells,
                const std::vector<double>& w, std::vector<double>& out, Exec exec);

// Dense log-interaction matrix with the same diagonal convention.
Eigen::MatrixXd log_matrix(const std::vector<cplx>& z, const std::vector<double>& cells,
                           Exec exec);

// P[c] += sign * log_dist(c, p) for every candidate c != p.
void add_point_potential(const CandidateGrid& grid, std::size_t p, double sign,
                         std::vector<double>& P, Exec exec);

// Index of the largest P[c] over free candidates (occupied[c] == 0); ties go to
// the smallest index. Returns grid.size() when nothing is free.
std::size_t argmax_free(const std::vector<double>& P, const std::vector<int>& occupied,
                        Exec exec);

// G += F^T diag(w) Psi, the boundary-trapezoid contribution of one circle.
void gram_accumulate(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& Psi,
                     const Eigen::VectorXcd& w, Eigen::MatrixXcd& G, Exec exec);

}  // namespace berglab::kernels
