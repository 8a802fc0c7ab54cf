#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "berglab/error.hpp"
#include "berglab/perfectness.hpp"

using namespace berglab;

TEST_CASE("annulus condition examples") {
  const auto z = build_zalcman(ScaleFunction::power(2.0), 0.1, 8);
  const auto rep = annulus_condition(z.planar(), 0.0, 0.09, 1.0, z.h());
  CHECK(rep.satisfied);
  REQUIRE(rep.witness.has_value());
  CHECK(z.planar().on_boundary(*rep.witness));
  CHECK(rep.witness_distance >= rep.h_r);
  CHECK(rep.witness_distance <= 0.09);
  CHECK(std::abs(*rep.witness - cplx{}) == doctest::Approx(rep.witness_distance));
  CHECK(rep.c_star > 1.0);

  const auto disk = PlanarDomain::unit_disk();
  for (double c : {1.0, 0.5, 1e-3}) {
    CHECK(annulus_condition(disk, 1.0, 0.1, c, ScaleFunction::power(2.0)).satisfied);
  }
  CHECK_THROWS_AS(annulus_condition(disk, 0.5, 0.1, 1.0, ScaleFunction::power(2.0)), Error);
}

TEST_CASE("weaker exponent empties the witness annuli") {
  const auto z = build_zalcman(ScaleFunction::power(2.0), 0.1, 8);
  const auto weak = ScaleFunction::power(1.9);
  // Once empty, the annulus stays empty for every deeper k.
  bool seen_empty = false;
  for (int k = 2; k < z.depth(); ++k) {
    const bool sat = annulus_condition(z.planar(), 0.0, z.x(k) / 2.0, 1.0 / k, weak).satisfied;
    if (seen_empty) CHECK_FALSE(sat);
    seen_empty = seen_empty || !sat;
  }
  CHECK(seen_empty);
  CHECK_FALSE(annulus_condition(z.planar(), 0.0, z.x(7) / 2.0, 1.0 / 7, weak).satisfied);
}

TEST_CASE("annulus test agrees with dense boundary sampling") {
  const auto z = build_zalcman(ScaleFunction::power(2.0), 0.2, 3);
  const auto& dom = z.planar();
  const auto samples = default_boundary_samples(dom);
  std::vector<cplx> dense{0.0};
  double spacing = 0.0;
  const int per = 20000;
  for (const auto& bc : dom.boundary()) {
    if (bc.kind == BoundaryComponent::Kind::Point) continue;
    for (int i = 0; i < per; ++i) {
      dense.push_back(bc.circle.center +
                      std::polar(bc.circle.radius, 2.0 * std::numbers::pi * i / per));
    }
    spacing = std::max(spacing, 2.0 * std::numbers::pi * bc.circle.radius / per);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0;
  for (int q = 0; q < 100; ++q) {
    const cplx a = samples[rng() % samples.size()];
    const double r = std::pow(10.0, -3.0 + 3.0 * u(rng)) * 0.9;
    const double c = std::pow(10.0, -2.0 + 2.5 * u(rng));
    const auto rep = annulus_condition(dom, a, r, c, z.h());
    const double lo = c * z.h()(r);
    bool strict = false, loose = false;
    for (cplx p : dense) {
      const double d = std::abs(p - a);
      strict = strict || (d >= lo && d <= r);
      loose = loose || (d >= lo - spacing && d <= r + spacing);
    }
    if ((!strict || rep.satisfied) && (!rep.satisfied || loose)) ++agree;
  }
  CHECK(agree == 100);
}

TEST_CASE("best constant profiles") {
  const auto z = build_zalcman(ScaleFunction::power(2.0), 0.1, 8);
  const auto prof = best_constant_profile(z, z.h());
  CHECK(prof.c_star_global > 0.0);
  CHECK_FALSE(prof.table.empty());
  for (const auto& row : prof.table) CHECK(row.c_star > 0.0);

  const auto disk = PlanarDomain::unit_disk();
  CHECK(best_constant_profile(disk, ScaleFunction::power(1.5), 1.0, 1e-3).c_star_global >= 1.0);

  // Against r^1.9 the constant at the origin decays toward 0 with r.
  const auto weak = ScaleFunction::power(1.9);
  const auto c3 = annulus_condition(z.planar(), 0.0, z.x(3) / 2, 1.0, weak).c_star;
  const auto c6 = annulus_condition(z.planar(), 0.0, z.x(6) / 2, 1.0, weak).c_star;
  CHECK(c6 < c3);
  CHECK(c6 < 1e-2 * c3);
}

TEST_CASE("classify weak perfectness") {
  SUBCASE("H1") {
    const auto z = build_zalcman(ScaleFunction::power(1.5), 0.01, 10);
    const auto rep = classify_weak_perfectness(z, {0.1});
    CHECK(rep.satisfied);
    CHECK(rep.c_star_global > 0.0);
    REQUIRE(rep.weaker.size() == 1);
    CHECK(rep.weaker[0].failed);
    CHECK(rep.weaker[0].param == doctest::Approx(1.4));
    CHECK(rep.weaker[0].radii.size() == rep.weaker[0].c_prime.size());
    CHECK(rep.weaker[0].radii.front() == doctest::Approx(z.x(2) / 2));
  }
  SUBCASE("H2") {
    const auto z = build_zalcman(ScaleFunction::log_power(1.0), 0.01, 10);
    const auto rep = classify_weak_perfectness(z, {0.5});
    CHECK(rep.satisfied);
    REQUIRE(rep.weaker.size() == 1);
    CHECK(rep.weaker[0].failed);
  }
}

TEST_CASE("condition C probes") {
  const auto z = build_zalcman(ScaleFunction::power(1.5), 0.01, 10);
  for (int k : {2, 3}) {
    const double r = (z.x(k) + z.r(k)) * 1.001;
    const auto p = condition_C_probe(z.planar(), z.h(), 0.0, r, 64);
    CHECK(p.cap >= 0.95 * z.r(k));
  }
  const auto disk = PlanarDomain::unit_disk();
  const auto arc = condition_C_probe(disk, ScaleFunction::power(1.5), 1.0, 0.1, 64);
  CHECK(arc.cap >= 0.025);
  CHECK(arc.cap <= 0.1);
  CHECK_THROWS_AS(condition_C_probe(disk, ScaleFunction::power(1.5), 0.5, 0.1, 8), Error);
}

TEST_CASE("Pommerenke construction") {
  SUBCASE("single stage") {
    const auto disk = PlanarDomain::unit_disk();
    const auto cert = pommerenke_construct(disk, ScaleFunction::power(1.5), 1.0, 1.0, 1, 0.1);
    REQUIRE(cert.points.size() == 2);
    CHECK(cert.distinct);
    CHECK(cert.pairwise_ok);
    CHECK(std::abs(cert.points[1] - cert.points[0]) >= cert.s[1]);
    CHECK(std::abs(cert.points[1] - cert.points[0]) <= cert.s[0]);
  }
  SUBCASE("H1 depth 5") {
    const auto z = build_zalcman(ScaleFunction::power(1.5), 0.01, 10);
    const double s1 = z.x(1) / 2;
    const auto cert = pommerenke_construct(z.planar(), z.h(), 0.0, 1.0, 5, s1);
    CHECK(cert.points.size() == 32);
    CHECK(cert.distinct);
    CHECK(cert.pairwise_ok);
    CHECK(cert.within_ok);
    CHECK(cert.min_pair_margin >= 1.0);
    const auto probe = condition_C_probe(z.planar(), z.h(), 0.0, 2 * s1, 64);
    CHECK(cert.capacity_floor <= 1.05 * probe.cap);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 5; ++k) {
      const auto ck = pommerenke_construct(z.planar(), z.h(), 0.0, 1.0, k, s1);
      CHECK(ck.capacity_floor <= prev);
      prev = ck.capacity_floor;
    }
  }
  SUBCASE("empty annulus") {
    const auto z = build_zalcman(ScaleFunction::power(1.5), 0.01, 10);
    // From the origin nothing lies in [5 s_2, s_1] for s_1 = 0.5.
    CHECK_THROWS_AS(pommerenke_construct(z.planar(), z.h(), 0.0, 1.0, 2, 0.5), Error);
  }
}

TEST_CASE("Cantor (U) and capacity floor") {
  const auto set = build_cantor(0.1, 2.0, 4);
  const auto u = cantor_U_check(set, 2.0);
  CHECK(u.satisfied);
  CHECK(u.tests > 0);
  CHECK(u.failures == 0);
  const auto rep = cantor_UC_report(0.1, 2.0, 5, 64);
  CHECK(rep.u.satisfied);
  CHECK(rep.floor_to_zero);
  for (std::size_t i = 1; i < rep.transfinite.size(); ++i) {
    CHECK(rep.transfinite[i] < rep.transfinite[i - 1]);
  }
}

TEST_CASE("theorem UC diagnostics") {
  const auto h2 = build_zalcman(ScaleFunction::log_power(1.0), 0.01, 10);
  const auto r2 = theorem_UC_report(h2);
  CHECK(r2.u_pass);
  CHECK(r2.c_pass);
  const auto h1 = build_zalcman(ScaleFunction::power(1.5), 0.01, 6);
  const auto r1 = theorem_UC_report(h1);
  CHECK(r1.u_pass);
  CHECK(r1.c_pass);
  CHECK(r1.exponent_bound == doctest::Approx(2.0));
}
