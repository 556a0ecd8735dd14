// Serial reference paths against the OpenMP kernels.

#include "phinull/curvature.hpp"
#include "phinull/jacobi.hpp"
#include "phinull/submersion.hpp"

#include <benchmark/benchmark.h>

using namespace phinull;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial" : "parallel");
}

void BM_RandomCurvature(benchmark::State& state) {
  const GffStructure S = canonical_structure(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_algebraic_curvature(S.g(), 1, 1.0, exec_of(state)));
  }
  label(state);
}

void BM_PhiModel(benchmark::State& state) {
  const GffStructure S = canonical_structure(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(phi_model_family(S, 1.0, 0.5, exec_of(state)));
  label(state);
}

void BM_JacobiForm(benchmark::State& state) {
  const GffStructure S = canonical_structure(static_cast<int>(state.range(0)), 2);
  const CurvatureTensor R = random_algebraic_curvature(S.g(), 2);
  const Vector v = Vector::LinSpaced(S.dim(), 0.1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(R.jacobi_form(v, exec_of(state)));
  label(state);
}

void BM_PhiNullDecider(benchmark::State& state) {
  const GffStructure S = canonical_structure(static_cast<int>(state.range(0)), 3);
  const CurvatureTensor R = random_algebraic_curvature(S.g(), 3);
  DeciderOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(is_phi_null_osserman_wrt(R, S, opts));
  label(state);
}

void BM_TheoremReport(benchmark::State& state) {
  const GffStructure S = canonical_structure(static_cast<int>(state.range(0)), 3);
  const CurvatureTensor R = phi_model_family(S, 1.0, 1.0);
  TheoremOptions opts;
  opts.decider.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(theorem_equivalence_report(R, S, opts));
  label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {1, 2, 4})
    for (int e : {0, 1}) b->Args({n, e});
}

}  // namespace

BENCHMARK(BM_RandomCurvature)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PhiModel)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_JacobiForm)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PhiNullDecider)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheoremReport)->Apply(sizes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
