// OpenMP kernels against their serial reference versions.
// Second benchmark argument is the OpenMP thread count.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <hollowpca/kernels.hpp>
#include <hollowpca/linalg.hpp>
#include <hollowpca/rng.hpp>

using namespace hollowpca;

namespace {

DataMatrix data(Index n, Index d) {
  Philox4x32 gen(Seed(77, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)}));
  RowMatrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = gen.normal();
  return DataMatrix(std::move(x));
}

void BM_GramParallel(benchmark::State& state) {
  const auto x = data(state.range(0), state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(gram(x));
}

void BM_GramReference(benchmark::State& state) {
  const auto x = data(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::gram(x));
}

void BM_GaussianKernelParallel(benchmark::State& state) {
  const auto x = data(state.range(0), 64);
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_gram(x, GaussianKernel{0.01}));
}

void BM_GaussianKernelReference(benchmark::State& state) {
  const auto x = data(state.range(0), 64);
  for (auto _ : state) benchmark::DoNotOptimize(reference::kernel_gram(x, GaussianKernel{0.01}));
}

void BM_TopEigenDense(benchmark::State& state) {
  const auto g = hollow(gram(data(state.range(0), state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(eigh_window(g, EigenOrdering::DescendingByValue, 0, 1));
}

void BM_TopEigenKrylov(benchmark::State& state) {
  const auto g = hollow(gram(data(state.range(0), state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        eigh_window(g, EigenOrdering::DescendingByValue, 0, 1, kDefaultEigenTol, EigenSolver::Krylov));
}

void BM_EighJacobiReference(benchmark::State& state) {
  const auto g = hollow(gram(data(state.range(0), state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(reference::eigh_jacobi(g, EigenOrdering::DescendingByValue));
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max_threads = omp_get_num_procs();
  for (int n : {256, 1024})
    for (int t = 1; t <= max_threads; t *= 2) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_GramParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianKernelParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianKernelReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopEigenDense)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopEigenKrylov)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EighJacobiReference)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
