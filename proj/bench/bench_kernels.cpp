#include <benchmark/benchmark.h>

#include "berglab/capacity.hpp"
#include "berglab/gram.hpp"

using namespace berglab;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_Gram(benchmark::State& st) {
  const auto z = build_zalcman(ScaleFunction::log_power(1.0), 1e-3, 40);
  const auto f = expand(default_basis(z));
  QuadratureOptions q;
  q.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(z.planar(), f, q));
  label(st);
}

void BM_Energy(benchmark::State& st) {
  const std::size_t n = 2048;
  const auto mu = uniform_measure(circle_nodes(Disk{}, n), std::vector<double>(n, 6.283185307179586 / n));
  for (auto _ : st) benchmark::DoNotOptimize(energy(mu, exec_of(st)));
  label(st);
}

void BM_Fekete(benchmark::State& st) {
  const auto g = segment_grid(-1.0, 1.0)(64);
  FeketeOptions opt;
  opt.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(nth_diameter(*g, 64, opt));
  label(st);
}

void BM_Equilibrium(benchmark::State& st) {
  const std::size_t n = 256;
  const auto mu = uniform_measure(segment_nodes(-1.0, 1.0, n), std::vector<double>(n, 2.0 / n));
  EquilibriumOptions opt;
  opt.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(equilibrium_measure(mu, opt));
  label(st);
}

}  // namespace

BENCHMARK(BM_Gram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Energy)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Fekete)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Equilibrium)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
