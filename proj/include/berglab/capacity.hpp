#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "berglab/domain.hpp"
#include "berglab/kernels.hpp"
#include "berglab/point_set.hpp"

namespace berglab {

using kernels::Exec;

// sum_i w_i log|z - z_i|; -inf when z hits a node of positive weight.
double potential(const WeightedPointSet& mu, cplx z);
// sum_{i != j} w_i w_j log|z_i - z_j|, plus w_i^2 (log cell_i - 3/2) on the
// diagonal when the measure carries cells.
double energy(const WeightedPointSet& mu, Exec exec = Exec::Parallel);

struct FeketeOptions {
  int max_passes = 64;
  Exec exec = Exec::Parallel;
};

struct DiameterResult {
  double delta = 0.0;
  double log_delta = 0.0;
  std::vector<std::size_t> indices;  // chosen candidates
  WeightedPointSet config;           // unweighted node configuration
  int passes = 0;
};

// Greedy Leja seeding, then coordinate exchange over the grid until no point
// can move to a better candidate. The attained value is a lower bound for the
// true n-th diameter.
DiameterResult nth_diameter(const CandidateGrid& grid, int n, const FeketeOptions& opt = {});

using GridFactory = std::function<std::unique_ptr<CandidateGrid>(int n)>;

GridFactory circle_grid(const Disk& circle, int per_point = 4);
// Chebyshev-Lobatto points on [a, b].
GridFactory segment_grid(cplx a, cplx b, int per_point = 8);
GridFactory arc_grid(const ArcSet& set, int per_point = 4);
GridFactory point_cloud_grid(std::vector<cplx> points);
GridFactory cantor_grid(const CantorSet& set, int per_point = 4);

enum class CapacityMethod { Transfinite, Energy, ClosedForm, CantorBound };
std::string_view to_string(CapacityMethod m);

struct CapacityEstimate {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::Transfinite;
  int n = 0;
  std::vector<int> schedule;
  std::vector<double> diagnostics;  // delta_n along the schedule
};

CapacityEstimate capacity_via_transfinite(const GridFactory& grid,
                                          const std::vector<int>& schedule,
                                          const FeketeOptions& opt = {});

struct EquilibriumOptions {
  int max_iter = 10000;
  double tol = 1e-10;
  bool polish = true;  // active-set solve of the stationarity system at the end
  Exec exec = Exec::Parallel;
};

struct EquilibriumSolution {
  WeightedPointSet measure;
  double energy = 0.0;
  double capacity = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool polished = false;
};

// Maximizes the discrete energy over the weight simplex. Missing cells are
// inferred from nearest-neighbour spacing: without a self-energy the maximum
// degenerates to pairs of atoms.
EquilibriumSolution equilibrium_measure(const WeightedPointSet& candidates,
                                        const EquilibriumOptions& opt = {});

CapacityEstimate capacity_via_energy(const WeightedPointSet& candidates,
                                     const EquilibriumOptions& opt = {});

// 1/2 prod_{j<J} (2 l_{j+1} / l_j)^{2^-j}.
double cantor_capacity_bound(const CantorSet& set);
double cantor_log_capacity_bound(const CantorSet& set);

struct PlaneMap {
  enum class Kind { Dilate, Holder };
  Kind kind = Kind::Dilate;
  double t = 1.0;  // dilation factor
  double A = 1.0;  // Hoelder constant
  double c = 1.0;  // Hoelder exponent
  std::function<cplx(cplx)> f;  // the map itself (Holder only)

  static PlaneMap dilate(double t);
  static PlaneMap holder(double A, double c, std::function<cplx(cplx)> f);
};

struct ScalingReport {
  double cap = 0.0;         // Cap(E)
  double cap_image = 0.0;   // Cap(T(E))
  double predicted = 0.0;   // t Cap(E) or A Cap(E)^c
  double ratio = 0.0;       // cap_image / predicted
  bool holds = false;
};

// Compares capacities of a node set and its image at matched n.
ScalingReport scaling_law_check(const std::vector<cplx>& nodes, int n, const PlaneMap& map,
                                const FeketeOptions& opt = {});

struct SubadditivityReport {
  double d = 0.0;
  double cap_union = 0.0;
  std::vector<double> cap_parts;
  double lhs = 0.0;  // 1 / log(d / Cap(union))
  double rhs = 0.0;  // sum 1 / log(d / Cap(part))
  bool holds = false;
};

// d <= 0 selects 2 diam(union).
SubadditivityReport subadditivity_check(const std::vector<std::vector<cplx>>& parts, int n,
                                        double d = 0.0, const FeketeOptions& opt = {});

}  // namespace berglab
