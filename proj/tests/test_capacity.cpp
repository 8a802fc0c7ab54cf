#include "doctest.h"

#include <cmath>
#include <numbers>

#include "berglab/capacity.hpp"
#include "berglab/error.hpp"

using namespace berglab;

TEST_CASE("potential of a uniform circle measure") {
  const auto mu = uniform_measure(circle_nodes(Disk{0.0, 0.5}, 256));
  CHECK(potential(mu, 0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-6));
  CHECK(std::abs(potential(mu, 2.0) - std::log(2.0)) <= 1e-4);
  const auto atom = uniform_measure({cplx{1.0, 0.0}});
  CHECK(std::isinf(potential(atom, 1.0)));
  CHECK(potential(atom, 1.0) < 0.0);
}

TEST_CASE("discrete energies") {
  CHECK(energy(uniform_measure({cplx{-0.5, 0.0}, cplx{0.5, 0.0}})) == 0.0);
  const double h1 = 2.0 * std::numbers::pi / 256;
  const auto unit = uniform_measure(circle_nodes(Disk{}, 256), std::vector<double>(256, h1));
  CHECK(std::abs(energy(unit)) <= 1e-2);
  const auto half = uniform_measure(circle_nodes(Disk{0.0, 0.5}, 256),
                                    std::vector<double>(256, 0.5 * h1));
  CHECK(std::abs(energy(half) - std::log(0.5)) <= 1e-2);
  // Serial and parallel paths agree bit for bit.
  CHECK(energy(half, Exec::Serial) == energy(half, Exec::Parallel));
}

TEST_CASE("n-th diameter of the unit circle") {
  for (int n = 2; n <= 16; ++n) {
    const auto g = circle_grid(Disk{})(n);
    const auto r = nth_diameter(*g, n);
    CHECK(r.delta == doctest::Approx(std::pow(n, 1.0 / (n - 1))).epsilon(1e-6));
  }
  const auto g = circle_grid(Disk{0.0, 0.37})(7);
  CHECK(nth_diameter(*g, 7).delta == doctest::Approx(0.37 * std::pow(7.0, 1.0 / 6)).epsilon(1e-6));
  CHECK_THROWS_AS(nth_diameter(PointGrid(circle_nodes(Disk{}, 10)), 3), Error);
}

TEST_CASE("serial and parallel fekete searches agree") {
  const auto g = segment_grid(-1.0, 1.0)(24);
  FeketeOptions s{64, Exec::Serial}, p{64, Exec::Parallel};
  const auto a = nth_diameter(*g, 24, s);
  const auto b = nth_diameter(*g, 24, p);
  CHECK(a.indices == b.indices);
  CHECK(a.delta == b.delta);
}

TEST_CASE("transfinite capacity estimates") {
  const auto disk = capacity_via_transfinite(circle_grid(Disk{0.0, 0.25}), {8, 16, 32, 64});
  CHECK(disk.value >= 0.25);
  CHECK(disk.value <= 0.27);
  for (std::size_t i = 1; i < disk.diagnostics.size(); ++i) {
    CHECK(disk.diagnostics[i] <= disk.diagnostics[i - 1] + 1e-9);
  }
  // Segment: the exact 64-point Fekete value is 0.5402 (Legendre nodes).
  const auto seg = capacity_via_transfinite(segment_grid(-1.0, 1.0), {64});
  CHECK(seg.value == doctest::Approx(0.54017).epsilon(2e-3));
  const auto two = capacity_via_transfinite(
      arc_grid(full_circles({Disk{-0.5, 0.1}, Disk{0.5, 0.1}})), {32});
  CHECK(two.value >= 0.1);
}

TEST_CASE("equilibrium measure on a circle") {
  const std::size_t n = 128;
  const auto sol = equilibrium_measure(
      uniform_measure(circle_nodes(Disk{0.0, 0.5}, n),
                      std::vector<double>(n, std::numbers::pi / n)));
  for (double w : sol.measure.weights) CHECK(std::abs(w * n - 1.0) <= 0.02);
  CHECK(sol.capacity == doctest::Approx(0.5).epsilon(0.02));
  CHECK(sol.kkt_residual <= 1e-3 * std::abs(sol.energy) + 1e-6);
  CHECK(sol.capacity == std::exp(sol.energy));
}

TEST_CASE("equilibrium measure of two points and a segment") {
  const auto two = equilibrium_measure(uniform_measure({cplx{0.0, 0.0}, cplx{1.0, 0.0}}));
  CHECK(two.measure.weights[0] == doctest::Approx(0.5));
  CHECK(two.measure.weights[1] == doctest::Approx(0.5));

  const std::size_t n = 128;
  const auto seg = equilibrium_measure(
      uniform_measure(segment_nodes(-1.0, 1.0, n), std::vector<double>(n, 2.0 / n)));
  CHECK(seg.capacity == doctest::Approx(0.5).epsilon(0.05));
  CHECK(seg.measure.weights.front() > seg.measure.weights[n / 2]);
  const auto fek = capacity_via_transfinite(point_cloud_grid(segment_nodes(-1.0, 1.0, n)), {32});
  CHECK(std::abs(seg.capacity - fek.value) <= 0.15 * fek.value);
}

TEST_CASE("measure dilatation is node-for-node") {
  const std::size_t n = 64;
  const auto base = uniform_measure(segment_nodes(-1.0, 1.0, n), std::vector<double>(n, 2.0 / n));
  auto scaled = base;
  for (auto& z : scaled.nodes) z *= 0.3;
  for (auto& c : scaled.cells) c *= 0.3;
  const auto a = equilibrium_measure(base);
  const auto b = equilibrium_measure(scaled);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(a.measure.weights[i] - b.measure.weights[i]) <= 1e-9);
  }
  CHECK(b.capacity == doctest::Approx(0.3 * a.capacity).epsilon(1e-9));
}

TEST_CASE("cantor capacity bound") {
  const auto c = build_cantor(0.1, 2.0, 4);
  const double hand = 0.5 * 0.2 * std::sqrt(0.02) * std::pow(2e-4, 0.25) * std::pow(2e-8, 0.125);
  CHECK(cantor_capacity_bound(c) == doctest::Approx(hand).epsilon(1e-12));
  CHECK(cantor_capacity_bound(c) == doctest::Approx(1.834e-4).epsilon(1e-3));
  double prev = 1.0;
  for (int J = 1; J <= 8; ++J) {
    const double b = cantor_capacity_bound(build_cantor(0.1, 2.0, J));
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 1e-5);
  // l_{j+1} = l_j / 4: partial products decrease to 1/2 * 2^(-sum 2^-j) -> 1/8.
  std::vector<double> l{0.25};
  for (int j = 0; j < 30; ++j) l.push_back(l.back() / 4.0);
  const double lim = cantor_capacity_bound(build_cantor_lengths(l));
  CHECK(lim == doctest::Approx(0.125).epsilon(1e-6));
  CHECK(lim > 0.125);
}

TEST_CASE("scaling laws") {
  const auto nodes = circle_nodes(Disk{}, 256);
  const auto dil = scaling_law_check(nodes, 32, PlaneMap::dilate(0.3));
  CHECK(dil.holds);
  CHECK(dil.ratio == doctest::Approx(1.0).epsilon(0.02));
  const auto id = scaling_law_check(nodes, 32, PlaneMap::holder(1.0, 1.0, [](cplx z) { return z; }));
  CHECK(id.ratio == doctest::Approx(1.0).epsilon(1e-12));
  const auto sq = scaling_law_check(nodes, 32, PlaneMap::holder(2.0, 1.0, [](cplx z) { return z * z; }));
  CHECK(sq.holds);
}

TEST_CASE("subadditivity") {
  const auto one = subadditivity_check({circle_nodes(Disk{0.0, 0.2}, 128)}, 32, 4.0);
  CHECK(one.lhs == doctest::Approx(one.rhs).epsilon(1e-12));
  const auto two = subadditivity_check(
      {circle_nodes(Disk{-0.5, 0.1}, 128), circle_nodes(Disk{0.5, 0.1}, 128)}, 32, 4.0);
  CHECK(two.holds);
  CHECK(two.lhs < two.rhs);
  CHECK_THROWS_AS(subadditivity_check({circle_nodes(Disk{0.0, 1.0}, 128)}, 16, 0.5), Error);
}
