#include <benchmark/benchmark.h>

#include <cmath>

#include "epdt/iteration.hpp"
#include "epdt/kato.hpp"
#include "epdt/kernel.hpp"
#include "epdt/linear1d.hpp"
#include "epdt/model.hpp"
#include "epdt/radon.hpp"
#include "epdt/semilinear.hpp"
#include "epdt/special.hpp"

using namespace epdt;

namespace {

double bump(double x) { return default_bump(x, 1.0); }

}  // namespace

static void BM_SpectralConstants(benchmark::State& state) {
  ModelParams pm{0.5, 1.5, 0.05, 3, 1.0};
  for (auto _ : state) {
    pm.mu += 1e-12;
    benchmark::DoNotOptimize(spectral_constants(pm));
  }
}
BENCHMARK(BM_SpectralConstants);

static void BM_Hypergeometric(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(special::gauss_2f1(0.3, 0.3, 1.0, z));
}
BENCHMARK(BM_Hypergeometric)->Arg(10)->Arg(50)->Arg(90)->Arg(99);

static void BM_KernelE(benchmark::State& state) {
  const ModelParams pm{0.5, 1.5, 0.05, 1, 1.0};
  const KernelPoint pt{3.0, 0.2, 1.7, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_E(pt, pm));
}
BENCHMARK(BM_KernelE);

static void BM_RepresentationPoint(benchmark::State& state) {
  const LinearProblem lp{{0.5, 2.0, 0.1, 1, 1.0}, bump, bump, {}, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_representation(lp, 3.0, 0.7));
}
BENCHMARK(BM_RepresentationPoint)->Unit(benchmark::kMicrosecond);

static void BM_FdOracle(benchmark::State& state) {
  const LinearProblem lp{{0.5, 2.0, 0.1, 1, 1.0}, bump, bump, {}, 3.0};
  FdOptions fo;
  fo.dx = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fd_oracle(lp, fo));
}
BENCHMARK(BM_FdOracle)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_KatoSimulate(benchmark::State& state) {
  KatoProblem pr;
  pr.beta = default_beta(pr.p);
  for (auto _ : state) benchmark::DoNotOptimize(kato_simulate(pr));
}
BENCHMARK(BM_KatoSimulate)->Unit(benchmark::kMicrosecond);

static void BM_RadonRadial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RadialFunction f{sample(bump, 0.0, 1e-3, 1001, 1.0), n};
  for (auto _ : state) benchmark::DoNotOptimize(radon_radial(f, 0.4));
}
BENCHMARK(BM_RadonRadial)->Arg(2)->Arg(3)->Arg(4);

static void BM_SemilinearBlowup(benchmark::State& state) {
  const SemilinearProblem pr{{0.0, 0.0, 0.0, 1, 1.0}, 2.0, 1.0, bump, bump, true, true};
  SemilinearOptions o;
  o.t_max = 50.0;
  o.dx = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_semilinear(pr, o));
}
BENCHMARK(BM_SemilinearBlowup)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_IterationKj(benchmark::State& state) {
  IterationConfig cfg;
  cfg.params = {0.0, 0.0, 0.0, 3, 1.0};
  const auto j = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(K_j_log(j, 1e4, 0.7, cfg));
}
BENCHMARK(BM_IterationKj)->Arg(0)->Arg(15)->Arg(30);

BENCHMARK_MAIN();
