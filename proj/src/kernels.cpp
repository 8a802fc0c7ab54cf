#include "berglab/kernels.hpp"

#include <cmath>
#include <limits>

namespace berglab::kernels {

namespace {

double row_log_sum(const std::vector<cplx>& z, const std::vector<double>& cells,
                   const std::vector<double>& w, std::size_t i) {
  double s = 0.0;
  const std::size_t n = z.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      if (!cells.empty()) s += w[j] * (std::log(cells[j]) - 1.5);
      continue;
    }
    s += w[j] * std::log(std::abs(z[i] - z[j]));
  }
  return s;
}

}  // namespace

void log_matvec(const std::vector<cplx>& z, const std::vector<double>& cells,
                const std::vector<double>& w, std::vector<double>& out, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(z.size());
  out.assign(z.size(), 0.0);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = row_log_sum(z, cells, w, i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = row_log_sum(z, cells, w, i);
  }
}

Eigen::MatrixXd log_matrix(const std::vector<cplx>& z, const std::vector<double>& cells,
                           Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(z.size());
  Eigen::MatrixXd L(n, n);
  auto fill_row = [&](std::ptrdiff_t i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (i == j) {
        L(i, j) = cells.empty() ? 0.0 : std::log(cells[i]) - 1.5;
      } else {
        L(i, j) = std::log(std::abs(z[i] - z[j]));
      }
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) fill_row(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) fill_row(i);
  }
  return L;
}

void add_point_potential(const CandidateGrid& grid, std::size_t p, double sign,
                         std::vector<double>& P, Exec exec) {
  const auto N = static_cast<std::ptrdiff_t>(grid.size());
  const auto pp = static_cast<std::ptrdiff_t>(p);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < N; ++c) {
      if (c != pp) P[c] += sign * grid.log_dist(c, p);
    }
  } else {
    for (std::ptrdiff_t c = 0; c < N; ++c) {
      if (c != pp) P[c] += sign * grid.log_dist(c, p);
    }
  }
}

std::size_t argmax_free(const std::vector<double>& P, const std::vector<int>& occupied,
                        Exec exec) {
  const auto N = static_cast<std::ptrdiff_t>(P.size());
  std::size_t best = P.size();
  double best_v = -std::numeric_limits<double>::infinity();
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t c = 0; c < N; ++c) {
      if (occupied[c] == 0 && (best == P.size() || P[c] > best_v)) {
        best = c;
        best_v = P[c];
      }
    }
    return best;
  }
#pragma omp parallel
  {
    std::size_t lb = P.size();
    double lv = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t c = 0; c < N; ++c) {
      if (occupied[c] == 0 && (lb == P.size() || P[c] > lv)) {
        lb = c;
        lv = P[c];
      }
    }
#pragma omp critical
    {
      if (lb != P.size() &&
          (best == P.size() || lv > best_v || (lv == best_v && lb < best))) {
        best = lb;
        best_v = lv;
      }
    }
  }
  return best;
}

void gram_accumulate(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& Psi,
                     const Eigen::VectorXcd& w, Eigen::MatrixXcd& G, Exec exec) {
  const auto B = static_cast<std::ptrdiff_t>(F.cols());
  const auto N = F.rows();
  // Column j of W Psi, then one dot product per entry; columns are independent.
  auto column = [&](std::ptrdiff_t j) {
    Eigen::VectorXcd wp = w.cwiseProduct(Psi.col(j));
    for (std::ptrdiff_t i = 0; i < B; ++i) {
      std::complex<double> s = 0.0;
      for (Eigen::Index n = 0; n < N; ++n) s += F(n, i) * wp(n);
      G(i, j) += s;
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < B; ++j) column(j);
  } else {
    for (std::ptrdiff_t j = 0; j < B; ++j) column(j);
  }
}

}  // namespace berglab::kernels
