#include "doctest.h"

#include <cmath>
#include <numbers>

#include "berglab/bergman.hpp"
#include "berglab/error.hpp"

using namespace berglab;
using std::numbers::pi;

namespace {

GramSystem disk_gram(int degree) {
  BasisSpec s;
  s.degree = degree;
  return assemble_gram(PlanarDomain::unit_disk(), s);
}

}  // namespace

TEST_CASE("disk kernel and metric oracles") {
  const auto G0 = disk_gram(0);
  CHECK(subspace_kernel(G0, 0.0).K_low == doctest::Approx(1 / pi).epsilon(1e-12));
  const auto G8 = disk_gram(8);
  double partial = 0.0;
  for (int j = 0; j <= 8; ++j) partial += (j + 1) * std::pow(0.25, j) / pi;
  CHECK(subspace_kernel(G8, 0.5).K_low == doctest::Approx(partial).epsilon(1e-10));
  CHECK(std::abs(partial / (1 / (pi * 0.75 * 0.75)) - 1) <= 1e-3);

  const auto m = subspace_metric(disk_gram(1), 0.0);
  CHECK(m.S_low == doctest::Approx(std::sqrt(2 / pi)).epsilon(1e-12));
  CHECK(m.b_est == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(subspace_metric(disk_gram(10), 0.5).b_est ==
        doctest::Approx(std::sqrt(2.0) / 0.75).epsilon(1e-2));
}

TEST_CASE("annulus kernel matches the Laurent series") {
  BasisSpec s;
  s.degree = 8;
  s.poles.push_back({0.0, 8, 0.5});
  const auto G = assemble_gram(PlanarDomain::annulus(0.5), s);
  double series = 0.0;
  for (int n = -8; n <= 8; ++n) {
    const double nn = n == -1 ? 2 * pi * std::log(2.0) : pi * (1 - std::pow(0.25, n + 1)) / (n + 1);
    series += std::pow(0.49, n) / nn;
  }
  CHECK(subspace_kernel(G, 0.7).K_low == doctest::Approx(series).epsilon(1e-8));
}

TEST_CASE("kernel grows with the basis and Superset sits below Sandwich") {
  const auto h = ScaleFunction::power(1.5);
  const auto sup = build_zalcman(h, 0.01, 8, Truncation::Superset);
  const auto san = build_zalcman(h, 0.01, 8, Truncation::Sandwich);
  for (int k = 2; k <= 5; ++k) {
    const double x = sup.mid_band(k);
    const auto small = assemble_gram(sup.planar(), default_basis(sup, 4, 1));
    const auto big = assemble_gram(sup.planar(), default_basis(sup, 8, 2));
    const double ks = subspace_kernel(small, -x).K_low;
    const double kb = subspace_kernel(big, -x, true).K_low;
    CHECK(ks <= kb * (1 + 1e-12));
    // Same basis on the smaller domain: the kernel can only grow.
    const auto on_san = assemble_gram(san.planar(), default_basis(sup, 8, 2));
    CHECK(kb <= subspace_kernel(on_san, -x).K_low * (1 + 1e-9));
  }
  const auto sat = saturated_kernel(sup, -sup.mid_band(3));
  CHECK(sat.saturation >= 0.0);
  CHECK(sat.saturation < 0.5);
}

TEST_CASE("metric on a Zalcman domain scales like 1/x_k") {
  const auto z = build_zalcman(ScaleFunction::power(1.5), 0.01, 10);
  const auto G = assemble_gram(z.planar(), default_basis(z));
  for (int k = 2; k <= 6; ++k) {
    const double bx = subspace_metric(G, -z.mid_band(k)).b_est * z.x(k);
    CHECK(bx >= 0.05);
    CHECK(bx <= 20);
  }
}

TEST_CASE("witness kernel bound arithmetic") {
  const auto z = build_zalcman(ScaleFunction::power(2.0), 0.1, 6);
  const auto w = witness_kernel_bound(z, 0.05);
  CHECK(w.k == 1);
  CHECK(w.f_abs2 == doctest::Approx(1 / 0.0036).epsilon(1e-12));
  CHECK(w.norm_bound == doctest::Approx(2 * pi * std::log(2 / 1e-4)).epsilon(1e-12));
  CHECK(w.value == doctest::Approx(4.4641).epsilon(1e-4));
  // The witness is a certified lower bound, so it cannot exceed a subspace
  // kernel whose basis contains 1/(z - x_{k+1}).
  const auto G = assemble_gram(z.planar(), default_basis(z));
  for (int k = 2; k <= 4; ++k) {
    const double x = z.mid_band(k);
    CHECK(witness_kernel_bound(z, x).value <= subspace_kernel(G, -x).K_low);
  }
}

TEST_CASE("two and three pole metric witnesses") {
  const auto z = build_zalcman(ScaleFunction::power(2.0), 0.1, 6);
  const auto two = witness_metric_bound(z, -0.05, WitnessVariant::TwoPole, 1);
  CHECK(two.fprime == doctest::Approx(0.09 / (0.06 * 0.15 * 0.15)).epsilon(1e-10));
  CHECK(two.residual <= 1e-10);

  const auto h2 = build_zalcman(ScaleFunction::log_power(1.0), 1e-3, 30);
  for (int k = 3; k <= 25; k += 2) {
    const double x = h2.mid_band(k);
    const auto t = witness_metric_bound(h2, -x, WitnessVariant::ThreePole, k);
    CHECK(std::abs(t.a_k) <= 10);
    CHECK(t.residual <= 1e-10);
    CHECK(t.norm2 <= 50 * std::log(std::log(1 / h2.x(k))));
  }
  try {
    witness_metric_bound(h2, -h2.mid_band(30), WitnessVariant::TwoPole, 30);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleNotRetained);
  }
}

TEST_CASE("equilibrium witness sector selection") {
  const auto z = build_zalcman(ScaleFunction::power(1.5), 0.01, 10);
  for (int k = 2; k <= 4; ++k) {
    const double x = z.mid_band(k);
    const auto e = equilibrium_witness_bound(z, -x);
    CHECK(e.cap_sectors.size() == 3);
    CHECK(std::log(1 / e.cap_E11) <= 3 * std::log(1 / e.cap_E1) * 1.05);
    if (e.chosen_sector == 0) CHECK(std::abs(e.f11_w) >= 0.9 / (4 * e.delta));
    const double wb = witness_kernel_bound(z, x).value;
    CHECK(e.value > 0.0);
    CHECK(std::max(wb / e.value, e.value / wb) <= 50);
  }
  try {
    equilibrium_witness_bound(z, -z.mid_band(1));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSecondPoint);
  }
}

TEST_CASE("f_E norm lemma") {
  const auto one = f_E_norm_lemma_check({Disk{0.0, 0.1}});
  CHECK(one.lhs == doctest::Approx(2 * pi * std::log(2.5)).epsilon(1e-6));
  CHECK(one.rhs == doctest::Approx(std::log(10.0)).epsilon(1e-2));
  CHECK(one.dilation_error <= 1e-6);
  const auto two = f_E_norm_lemma_check({Disk{-0.1, 0.01}, Disk{0.1, 0.01}});
  CHECK(two.dilation_error <= 1e-6);
  CHECK(std::max(two.ratio / one.ratio, one.ratio / two.ratio) <= 20);
}

TEST_CASE("distance profile on the unit disk") {
  BasisSpec s;
  s.degree = 24;
  const auto G = assemble_gram(PlanarDomain::unit_disk(), s);
  std::vector<double> xs;
  for (int i = 0; i <= 40; ++i) xs.push_back(0.9 * std::pow(1e-3 / 0.9, i / 40.0));
  const auto p = distance_profile(G, xs);
  REQUIRE(p.rows.size() == xs.size());
  for (std::size_t i = 1; i < p.rows.size(); ++i) {
    CHECK(p.rows[i].d_est > p.rows[i - 1].d_est);
    const double exact = std::sqrt(2.0) * (std::atanh(0.9) - std::atanh(p.rows[i].x));
    CHECK(p.rows[i].d_est == doctest::Approx(exact).epsilon(0.05));
  }
}

TEST_CASE("distance increments on H1") {
  const auto z = build_zalcman(ScaleFunction::power(1.2), 0.01, 12);
  const auto G = assemble_gram(z.planar(), default_basis(z));
  const auto p = distance_profile(G, distance_grid(z, 10), &z);
  REQUIRE(!p.increments.empty());
  for (double d : p.increments) {
    CHECK(d >= 0.05);
    CHECK(d <= 20);
  }
}
