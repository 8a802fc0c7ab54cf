#include "berglab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "berglab/asymptotics.hpp"
#include "berglab/bergman.hpp"
#include "berglab/capacity.hpp"
#include "berglab/perfectness.hpp"

namespace berglab {

namespace fs = std::filesystem;

ToleranceProfile tolerance_profile(const std::string& name) {
  if (name == "fast") return {"fast", 1e-6, 32, 8};
  if (name == "default") return {"default", 1e-10, 64, 16};
  if (name == "strict") return {"strict", 1e-12, 128, 32};
  throw Error(ErrorCode::ConfigInvalid, "unknown tolerance profile '" + name + "'");
}

json error_document(const Error& e) {
  return {{"status", "error"}, {"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

template <class T>
T knob(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(std::string("config: '") + key + "' has the wrong type");
  }
}

struct Ctx {
  const json& cfg;
  DomainSpec domain;
  ToleranceProfile tol;
  std::uint64_t seed = 0;
  fs::path out;
  std::vector<std::string> files;
  json summary = json::object();

  fs::path file(const std::string& name) {
    files.push_back(name);
    return out / name;
  }
  QuadratureOptions quad() const {
    QuadratureOptions q;
    q.tol = tol.quad_tol;
    return q;
  }
};

std::pair<int, int> k_range(const Ctx& c, int lo, int hi) {
  if (c.cfg.contains("k_range")) {
    const auto r = knob<std::vector<int>>(c.cfg, "k_range", {});
    if (r.size() != 2 || r[0] > r[1]) invalid("config: k_range must be [lo, hi]");
    return {r[0], r[1]};
  }
  return {lo, hi};
}

CsvCell opt_cell(const std::optional<double>& v) {
  return v ? CsvCell{*v} : CsvCell{};
}

// capacity ------------------------------------------------------------------

void run_capacity(Ctx& c) {
  const int n = knob(c.cfg, "n", c.tol.n);
  if (c.domain.type == DomainSpec::Type::Cantor) {
    CsvWriter csv(c.file("capacity.csv"), {"J", "bound", "transfinite"});
    for (int j = 1; j <= c.domain.J; ++j) {
      const auto set = build_cantor(c.domain.l0, c.domain.param, j);
      const auto d = nth_diameter(*cantor_grid(set)(n), n);
      csv.row({std::int64_t{j}, cantor_capacity_bound(set), d.delta});
    }
    return;
  }
  if (c.domain.type == DomainSpec::Type::Zalcman) {
    const auto z = make_zalcman(c.domain);
    const auto radii = log_radii(z.x(z.depth()) + z.r(z.depth()), z.x(1) / 2, 2);
    CsvWriter csv(c.file("capacity.csv"), {"a_re", "a_im", "r", "c_star", "cap", "ratio"});
    for (double r : radii) {
      const auto p = condition_C_probe(z.planar(), z.h(), 0.0, r, n);
      const auto a = annulus_condition(z.planar(), 0.0, r, 1.0, z.h());
      csv.row({0.0, 0.0, r, a.c_star, p.cap, p.ratio});
    }
    return;
  }
  // Reference domains: the removed compact set is a closed disk.
  const double R = c.domain.type == DomainSpec::Type::Disk ? c.domain.radius : c.domain.inner;
  const auto grid = circle_grid(Disk{0.0, R});
  CsvWriter csv(c.file("capacity.csv"), {"method", "n", "value", "exact"});
  for (int m : knob<std::vector<int>>(c.cfg, "n_schedule", {8, 16, 32, n})) {
    csv.row({std::string("transfinite"), std::int64_t{m}, nth_diameter(*grid(m), m).delta, R});
  }
  const auto e = capacity_via_energy(uniform_measure(circle_nodes(Disk{0.0, R}, 128)));
  csv.row({std::string("energy"), std::int64_t{128}, e.value, R});
}

// perfect -------------------------------------------------------------------

void run_perfect(Ctx& c) {
  if (c.domain.type == DomainSpec::Type::Cantor) {
    const auto rep = cantor_UC_report(c.domain.l0, c.domain.param, c.domain.J,
                                      knob(c.cfg, "n", 256));
    CsvWriter csv(c.file("perfect.csv"), {"J", "bound", "transfinite"});
    for (std::size_t i = 0; i < rep.depths.size(); ++i) {
      csv.row({std::int64_t{rep.depths[i]}, rep.capacity_bound[i], rep.transfinite[i]});
    }
    c.summary = {{"u_satisfied", rep.u.satisfied}, {"u_tests", rep.u.tests},
                 {"u_failures", rep.u.failures}, {"floor_to_zero", rep.floor_to_zero}};
    return;
  }
  const auto z = make_zalcman(c.domain);
  const auto eps = knob<std::vector<double>>(c.cfg, "eps", {c.domain.family == "h1" ? 0.1 : 0.5});
  const auto rep = classify_weak_perfectness(z, eps);
  const auto prof = best_constant_profile(z, z.h(), 0.0, knob(c.cfg, "r_per_decade", c.tol.r_per_decade));
  {
    CsvWriter csv(c.file("profile.csv"), {"a_re", "a_im", "r", "c_star", "cap", "ratio"});
    for (const auto& row : prof.table) csv.row({row.a.real(), row.a.imag(), row.r, row.c_star, {}, {}});
  }
  {
    CsvWriter csv(c.file("witness.csv"), {"eps", "param", "r", "c_prime", "implied"});
    for (const auto& f : rep.weaker) {
      for (std::size_t i = 0; i < f.radii.size(); ++i) {
        csv.row({f.eps, f.param, f.radii[i], f.c_prime[i], f.implied[i]});
      }
    }
  }
  const auto uc = theorem_UC_report(z, knob(c.cfg, "n", c.tol.n));
  {
    CsvWriter csv(c.file("condition_c.csv"), {"a_re", "a_im", "r", "c_star", "cap", "ratio"});
    for (const auto& p : uc.c.rows) {
      const auto a = annulus_condition(z.planar(), p.a, p.r, 1.0, z.h());
      csv.row({p.a.real(), p.a.imag(), p.r, a.c_star, p.cap, p.ratio});
    }
  }
  json weaker = json::array();
  for (const auto& f : rep.weaker) {
    weaker.push_back({{"eps", f.eps}, {"param", f.param}, {"failed", f.failed},
                      {"decay", f.decay}, {"implied_band", f.implied_band}, {"radii", f.radii}});
  }
  c.summary = {{"param", rep.param},       {"satisfied", rep.satisfied},
               {"c_star_global", rep.c_star_global}, {"weaker", weaker},
               {"c_slope", uc.c.slope},    {"c_min_ratio", uc.c.min_ratio},
               {"u_pass", uc.u_pass},      {"c_pass", uc.c_pass}};
  write_json(c.file("perfect.json"), c.summary);
}

// pommerenke ----------------------------------------------------------------

void run_pommerenke(Ctx& c) {
  const auto z = make_zalcman(c.domain);
  const int k = knob(c.cfg, "k", 5);
  const double cc = knob(c.cfg, "c", 1.0);
  const double s1 = knob(c.cfg, "s1", z.x(1) / 2);
  const auto av = knob<std::vector<double>>(c.cfg, "a", {0.0, 0.0});
  if (av.size() != 2) invalid("config: a must be [re, im]");
  const cplx a{av[0], av[1]};
  const auto cert = pommerenke_construct(z.planar(), z.h(), a, cc, k, s1);
  const auto probe = condition_C_probe(z.planar(), z.h(), a, 2 * s1, knob(c.cfg, "n", c.tol.n));
  {
    CsvWriter csv(c.file("points.csv"), {"index", "re", "im"});
    for (std::size_t i = 0; i < cert.points.size(); ++i) {
      csv.row({static_cast<std::int64_t>(i), cert.points[i].real(), cert.points[i].imag()});
    }
  }
  c.summary = {{"k", k},
               {"c", cc},
               {"s", cert.s},
               {"points", cert.points.size()},
               {"distinct", cert.distinct},
               {"pairwise_ok", cert.pairwise_ok},
               {"within_ok", cert.within_ok},
               {"min_pair_margin", cert.min_pair_margin},
               {"log_product_bound", cert.log_product_bound},
               {"capacity_floor", cert.capacity_floor},
               {"measured_cap", probe.cap},
               {"floor_ok", cert.capacity_floor <= 1.05 * probe.cap}};
  write_json(c.file("certificate.json"), c.summary);
}

// kernel / metric -----------------------------------------------------------

GramSystem zalcman_gram(const Ctx& c, const ZalcmanDomain& z) {
  const json b = c.cfg.value("basis", json::object());
  return assemble_gram(z.planar(), default_basis(z, b.value("degree", 8), b.value("max_order", 2)),
                       c.quad());
}

json fit_json(const ModelSelection& s) {
  json fits = json::array();
  for (const auto& f : s.fits) {
    fits.push_back({{"model", std::string(to_string(f.model))}, {"C", f.C},
                    {"rel_residual", f.rel_residual}, {"band", {f.band_min, f.band_max}}});
  }
  return {{"preferred", std::string(to_string(s.preferred))}, {"margin", s.margin},
          {"inconclusive", s.inconclusive}, {"fits", fits}};
}

void run_kernel(Ctx& c) {
  const auto z = make_zalcman(c.domain);
  const auto [klo, khi] = k_range(c, std::min(3, z.depth() - 1), z.depth() - 2);
  const bool eq = knob(c.cfg, "equilibrium", false);
  const auto G = zalcman_gram(c, z);
  const bool cert = z.variant() == Truncation::Superset;
  CsvWriter csv(c.file("kernel.csv"),
                {"k", "x", "K_low", "witness_bound", "equilibrium_bound", "b_est"});
  std::vector<Sample> best;
  for (int k = klo; k <= khi; ++k) {
    const double x = z.mid_band(k);
    const auto ke = subspace_kernel(G, -x, cert);
    const auto me = subspace_metric(G, -x);
    const double wb = witness_kernel_bound(z, x).value;
    std::optional<double> eb;
    if (eq) {
      try {
        eb = equilibrium_witness_bound(z, -x).value;
      } catch (const Error&) {
        // NoSecondPoint and friends are reported as empty cells.
      }
    }
    csv.row({std::int64_t{k}, x, ke.K_low, wb, opt_cell(eb), me.b_est});
    // Certified lower bounds only: the Superset subspace kernel and the witness.
    best.push_back({x, cert ? std::max(wb, ke.K_low) : wb, k});
  }
  const auto sel = select_model(best, {Model::K1, Model::K2});
  c.summary = fit_json(sel);
  c.summary["effective_rank"] = G.effective_rank;
  c.summary["basis_size"] = G.basis.size();
  c.summary["quadrature_tol"] = G.quad.achieved_tol;
  write_json(c.file("fit.json"), c.summary);
}

void run_metric(Ctx& c) {
  const auto z = make_zalcman(c.domain);
  const auto [klo, khi] = k_range(c, 2, z.depth() - 2);
  const auto G = zalcman_gram(c, z);
  CsvWriter csv(c.file("metric.csv"),
                {"k", "x", "K_low", "b_est", "b_est_x_k", "two_pole_ratio", "three_pole_ratio"});
  for (int k = klo; k <= khi; ++k) {
    const double x = z.mid_band(k);
    const auto me = subspace_metric(G, -x);
    const double two = witness_metric_bound(z, -x, WitnessVariant::TwoPole, k, c.quad()).ratio;
    std::optional<double> three;
    if (k >= 2) three = witness_metric_bound(z, -x, WitnessVariant::ThreePole, k, c.quad()).ratio;
    csv.row({std::int64_t{k}, x, me.K_low, me.b_est, me.b_est * z.x(k), two, opt_cell(three)});
  }
}

// distance ------------------------------------------------------------------

void run_distance(Ctx& c) {
  if (c.domain.type == DomainSpec::Type::Disk) {
    BasisSpec spec;
    spec.degree = knob(c.cfg, "degree", 24);
    const auto G = assemble_gram(make_planar(c.domain), spec, c.quad());
    std::vector<double> xs;
    for (int i = 0; i <= 40; ++i) xs.push_back(0.9 * std::pow(1e-3 / 0.9, i / 40.0));
    const auto p = distance_profile(G, xs);
    CsvWriter csv(c.file("distance.csv"), {"x", "b_est", "d_est", "d_exact"});
    for (const auto& r : p.rows) {
      csv.row({r.x, r.b_est, r.d_est, std::numbers::sqrt2 * (std::atanh(0.9) - std::atanh(r.x))});
    }
    return;
  }
  const auto z = make_zalcman(c.domain);
  const int kmax = knob(c.cfg, "k_max", z.depth() - 1);
  const auto G = zalcman_gram(c, z);
  const auto p = distance_profile(G, distance_grid(z, kmax, knob(c.cfg, "per_band", 8)), &z);
  {
    CsvWriter csv(c.file("distance.csv"), {"x", "band", "b_est", "d_est"});
    for (const auto& r : p.rows) csv.row({r.x, std::int64_t{r.band}, r.b_est, r.d_est});
  }
  {
    CsvWriter csv(c.file("increments.csv"), {"k", "increment"});
    for (std::size_t i = 0; i < p.bands.size(); ++i) csv.row({std::int64_t{p.bands[i]}, p.increments[i]});
  }
  const auto [klo, khi] = k_range(c, std::min(3, kmax), kmax - 1);
  std::vector<Sample> s;
  std::vector<double> ks, ds;
  for (const auto& r : p.rows) {
    for (int k = klo; k <= khi; ++k) {
      if (r.x == z.x(k + 1)) {
        s.push_back({r.x, r.d_est, k});
        ks.push_back(k);
        ds.push_back(r.d_est);
      }
    }
  }
  c.summary = fit_json(select_model(s, {Model::D1, Model::D2}));
  const auto lf = linear_fit(ks, ds);
  c.summary["linear_in_k"] = {{"slope", lf.slope}, {"intercept", lf.intercept}, {"r2", lf.r2}};
  write_json(c.file("fit.json"), c.summary);
}

// fit -----------------------------------------------------------------------

Model parse_model(const std::string& s) {
  if (s == "K1") return Model::K1;
  if (s == "K2") return Model::K2;
  if (s == "D1") return Model::D1;
  if (s == "D2") return Model::D2;
  invalid("config: unknown model '" + s + "'");
}

void run_fit(Ctx& c) {
  const auto input = knob<std::string>(c.cfg, "input", "");
  if (input.empty()) invalid("config: fit needs 'input'");
  const auto table = read_csv(input);
  const auto xcol = table.column(knob<std::string>(c.cfg, "x_column", "x"));
  const auto vcol = table.column(knob<std::string>(c.cfg, "column", "K_low"));
  const auto kcol = table.column(knob<std::string>(c.cfg, "band_column", "k"));
  if (!xcol || !vcol) invalid("config: fit columns not found in " + input);
  std::vector<Sample> s;
  for (const auto& row : table.rows) {
    if (row.size() <= std::max(*xcol, *vcol) || row[*vcol].empty()) continue;
    Sample smp{std::stod(row[*xcol]), std::stod(row[*vcol]), 0};
    if (kcol && *kcol < row.size() && !row[*kcol].empty()) smp.band = std::stoi(row[*kcol]);
    s.push_back(smp);
  }
  std::vector<Model> models;
  for (const auto& m : knob<std::vector<std::string>>(c.cfg, "models", {"K1", "K2"})) {
    models.push_back(parse_model(m));
  }
  c.summary = fit_json(select_model(s, models));
  write_json(c.file("fit.json"), c.summary);
}

// selfcheck -----------------------------------------------------------------

void run_selfcheck(Ctx& c) {
  struct Check {
    std::string name;
    double value, expected, tol;
    bool relative;
  };
  std::vector<Check> checks;
  const double pi = std::numbers::pi;
  const auto disk = PlanarDomain::unit_disk();
  BasisSpec s1;
  s1.degree = 1;
  const auto G1 = assemble_gram(disk, s1, c.quad());
  checks.push_back({"disk_K0", subspace_kernel(G1, 0.0).K_low, 1 / pi, 1e-6, false});
  checks.push_back({"disk_b0", subspace_metric(G1, 0.0).b_est, std::sqrt(2.0), 1e-6, false});
  BasisSpec s16;
  s16.degree = 16;
  const auto G16 = assemble_gram(disk, s16, c.quad());
  checks.push_back({"disk_K_half", subspace_kernel(G16, 0.5).K_low, 1 / (pi * 0.5625), 5e-3, true});
  checks.push_back({"disk_b_half", subspace_metric(G16, 0.5).b_est, std::sqrt(2.0) / 0.75, 1e-2, true});
  const auto ann = PlanarDomain::annulus(0.5);
  BasisSpec sa;
  sa.degree = 8;
  sa.poles.push_back({0.0, 8, 0.5});
  const auto Ga = assemble_gram(ann, sa, c.quad());
  double laurent = 0.0;
  for (int n = -8; n <= 8; ++n) {
    const double nn = n == -1 ? 2 * pi * std::log(2.0) : pi * (1 - std::pow(0.25, n + 1)) / (n + 1);
    laurent += std::pow(0.49, n) / nn;
  }
  checks.push_back({"annulus_K_0.7", subspace_kernel(Ga, 0.7).K_low, laurent, 2e-2, true});
  checks.push_back({"annulus_norm_inv_z", Ga.H(9, 9).real(), 2 * pi * std::log(2.0), 1e-3, true});
  const auto mc = monte_carlo_gram(ann, {Ga.basis[9]}, knob(c.cfg, "mc_samples", 200000), c.seed);
  checks.push_back({"annulus_norm_inv_z_mc", mc.H(0, 0).real(), 2 * pi * std::log(2.0),
                    5 * mc.stderr_(0, 0) / (2 * pi * std::log(2.0)), true});
  for (int n = 2; n <= 16; ++n) {
    const double d = nth_diameter(*circle_grid(Disk{})(n), n).delta;
    checks.push_back({"circle_delta_" + std::to_string(n), d, std::pow(n, 1.0 / (n - 1)), 1e-3, false});
  }
  CsvWriter csv(c.file("selfcheck.csv"), {"check", "value", "expected", "tolerance", "relative", "pass"});
  bool all = true;
  for (const auto& ch : checks) {
    const double err = std::abs(ch.value - ch.expected) / (ch.relative ? std::abs(ch.expected) : 1.0);
    const bool pass = err <= ch.tol;
    all = all && pass;
    csv.row({ch.name, ch.value, ch.expected, ch.tol, std::int64_t{ch.relative}, std::int64_t{pass}});
  }
  c.summary = {{"all_pass", all}, {"checks", checks.size()}};
}

}  // namespace

json run(const json& config, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!config.is_object()) invalid("config must be a JSON object");
  const auto pipeline = knob<std::string>(config, "pipeline", "");
  static const std::set<std::string> known{"capacity", "perfect",  "pommerenke", "kernel",
                                           "metric",   "distance", "fit",        "selfcheck"};
  if (!known.count(pipeline)) invalid("config: unknown pipeline '" + pipeline + "'");
  Ctx c{config, {}, tolerance_profile(opt.tolerance_profile), 0, opt.out, {}, json::object()};
  const bool needs_domain = pipeline != "fit" && pipeline != "selfcheck";
  if (needs_domain) {
    if (!config.contains("domain")) invalid("config: missing 'domain'");
    c.domain = parse_domain(config.at("domain"));
  }
  c.seed = opt.seed ? *opt.seed : knob<std::uint64_t>(config, "seed", 0);
#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
  fs::create_directories(opt.out);

  if (pipeline == "capacity") run_capacity(c);
  else if (pipeline == "perfect") run_perfect(c);
  else if (pipeline == "pommerenke") run_pommerenke(c);
  else if (pipeline == "kernel") run_kernel(c);
  else if (pipeline == "metric") run_metric(c);
  else if (pipeline == "distance") run_distance(c);
  else if (pipeline == "fit") run_fit(c);
  else run_selfcheck(c);

  json outputs = json::array();
  for (const auto& f : c.files) {
    const auto p = opt.out / f;
    outputs.push_back({{"file", f}, {"sha256", sha256_file(p)}, {"bytes", fs::file_size(p)}});
  }
  json manifest{{"status", "ok"},
                {"pipeline", pipeline},
                {"config", config},
                {"seed", c.seed},
                {"threads", opt.threads},
                {"tolerance_profile", c.tol.name},
                {"tolerances", {{"quadrature", c.tol.quad_tol}, {"n", c.tol.n},
                                {"r_per_decade", c.tol.r_per_decade}}},
                {"outputs", outputs},
                {"summary", c.summary}};
  if (needs_domain) manifest["domain"] = to_json(c.domain);
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(opt.out / "manifest.json", manifest);
  return manifest;
}

}  // namespace berglab
