#include <benchmark/benchmark.h>

#include "primal/forms.hpp"
#include "primal/lattice.hpp"

using namespace primal;

static void SolutionLatticeDet(benchmark::State& state) {
  Rng rng(4);
  int N = int(state.range(0));
  for (auto _ : state) {
    std::vector<i64> c(static_cast<std::size_t>(N));
    for (auto& v : c) v = rng.uniform_int(-9, 9);
    c[0] |= 1;
    auto L = lattice::solution_lattice(c);
    benchmark::DoNotOptimize(L.determinant());
  }
}
BENCHMARK(SolutionLatticeDet)->Arg(4)->Arg(8)->Arg(12)->Arg(20);

static void VeroneseIntersection(benchmark::State& state) {
  auto basis = forms::monomial_basis(2, 3);
  std::vector<i64> x{2, 3, 5, 2}, y{3, 2, 2, 5};
  auto u = forms::veronese(std::span<const i64>(x), basis);
  auto v = forms::veronese(std::span<const i64>(y), basis);
  for (auto _ : state) {
    auto I = lattice::intersect(lattice::solution_lattice(u), lattice::solution_lattice(v));
    benchmark::DoNotOptimize(I.determinant());
  }
}
BENCHMARK(VeroneseIntersection);

static void SuccessiveMinima(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state) {
    state.PauseTiming();
    lattice::IntegerLattice L;
    for (;;) {
      lattice::Mat basis(3, std::vector<i64>(6));
      for (auto& row : basis)
        for (auto& v : row) v = rng.uniform_int(-4, 4);
      try {
        L = lattice::lattice_from_basis(basis, 6);
        break;
      } catch (const std::invalid_argument&) {
      }
    }
    state.ResumeTiming();
    benchmark::DoNotOptimize(L.minima_squared());
  }
}
BENCHMARK(SuccessiveMinima);

static void PointEnumeration(benchmark::State& state) {
  auto L = lattice::solution_lattice({3, -1, 2, 5});
  double X = double(state.range(0));
  for (auto _ : state) {
    auto pts = lattice::enumerate_points(L, X);
    benchmark::DoNotOptimize(pts.size());
  }
}
BENCHMARK(PointEnumeration)->Arg(5)->Arg(10)->Arg(20);

BENCHMARK_MAIN();
