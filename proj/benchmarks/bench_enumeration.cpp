#include <benchmark/benchmark.h>

#include "primal/arith.hpp"
#include "primal/counts.hpp"

using namespace primal;

static void SievePrimes(benchmark::State& state) {
  for (auto _ : state) {
    auto primes = arith::primes_up_to(double(state.range(0)));
    benchmark::DoNotOptimize(primes);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SievePrimes)->Range(1 << 10, 1 << 22)->Complexity();

static void PrimeTupleEnumeration(benchmark::State& state) {
  double B = double(state.range(0));
  for (auto _ : state) {
    auto xi = counts::prime_vectors(2, 3, B);
    benchmark::DoNotOptimize(xi.vectors.size());
  }
}
BENCHMARK(PrimeTupleEnumeration)->Arg(100)->Arg(400)->Arg(1600)->Arg(6400);

static void PairIntersectionSum(benchmark::State& state) {
  double B = double(state.range(0));
  for (auto _ : state) {
    double e = counts::e_prime(2, 3, B);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(PairIntersectionSum)->Arg(50)->Arg(100)->Arg(200);

static void CountSolutions(benchmark::State& state) {
  auto f = forms::Form::make(forms::monomial_basis(2, 3),
                             {1, 0, 0, 0, 1, 0, 0, -1, 0, -1});
  auto xi = counts::prime_vectors(2, 3, double(state.range(0)));
  for (auto _ : state) {
    auto rep = counts::count_solutions(f, xi);
    benchmark::DoNotOptimize(rep.n_ploc);
  }
}
BENCHMARK(CountSolutions)->Arg(100)->Arg(400)->Arg(1600);

BENCHMARK_MAIN();
