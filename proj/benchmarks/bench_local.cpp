#include <benchmark/benchmark.h>

#include "primal/local.hpp"

using namespace primal;

static void ResidueDensity(benchmark::State& state) {
  i64 p = state.range(0);
  auto basis = forms::monomial_basis(2, 3);
  local::ResidueDensityTable table(u64(p), basis);
  Rng rng(1);
  std::vector<i64> a(basis.size());
  for (auto _ : state) {
    for (auto& c : a) c = i64(rng.below(u64(p)));
    a[0] |= 1;
    benchmark::DoNotOptimize(table.density(a));
  }
}
BENCHMARK(ResidueDensity)->Arg(3)->Arg(7)->Arg(11)->Arg(19);

static void UnitSolubility(benchmark::State& state) {
  i64 p = state.range(0);
  auto basis = forms::monomial_basis(2, 3);
  Rng rng(2);
  for (auto _ : state) {
    std::vector<i64> coeffs(basis.size());
    for (auto& c : coeffs) c = rng.uniform_int(-50, 50);
    coeffs[0] |= 1;
    auto v = local::unit_solubility(forms::Form::make(basis, coeffs), p);
    benchmark::DoNotOptimize(v.status);
  }
}
BENCHMARK(UnitSolubility)->Arg(2)->Arg(5)->Arg(13)->Arg(101);

static void RealSolubility(benchmark::State& state) {
  auto basis = forms::monomial_basis(2, 3);
  Rng rng(3);
  for (auto _ : state) {
    std::vector<i64> coeffs(basis.size());
    for (auto& c : coeffs) c = rng.uniform_int(-50, 50);
    coeffs[0] |= 1;
    auto v = local::real_positive_soluble(forms::Form::make(basis, coeffs));
    benchmark::DoNotOptimize(v.status);
  }
}
BENCHMARK(RealSolubility);

static void ArchimedeanDensity(benchmark::State& state) {
  auto f = forms::Form::make(forms::monomial_basis(2, 2), {1, 0, 0, 1, 0, -1});
  for (auto _ : state) {
    auto est = local::archimedean_density(f, 10.0, {u64(state.range(0)), 9});
    benchmark::DoNotOptimize(est.estimate);
  }
}
BENCHMARK(ArchimedeanDensity)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
