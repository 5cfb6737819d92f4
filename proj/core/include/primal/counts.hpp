#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "primal/arith.hpp"
#include "primal/forms.hpp"
#include "primal/lattice.hpp"

namespace primal::counts {

struct XiBudget {
  double sieve_limit = 1e7;           // largest admissible prime bound
  std::size_t vector_limit = 2'000'000;
};

/// Non-diagonal prime tuples within the counting radius B^(1/(n+1-d)),
/// in ascending lexicographic order.
struct PrimeVectorSet {
  int d = 0;
  int n = 0;
  double B = 0;
  double radius = 0;
  std::vector<std::vector<i64>> vectors;
};

PrimeVectorSet prime_vectors(int d, int n, double B, const XiBudget& budget = {});

/// Prime tuples in the closed ball (diagonal included; used by pair counts).
std::vector<std::vector<i64>> prime_tuples_in_ball(int dims, double radius,
                                                   const XiBudget& budget = {});

/// |<v,t>| <= |v| |t| / (2 gamma), decided on exact squared integers.
bool in_cone(std::span<const i64> v, std::span<const i64> t, double gamma);
bool in_cone(std::span<const double> v, std::span<const double> t, double gamma);

struct CountReport {
  double B = 0;
  arith::ScaleParams scale;
  i64 solution_count = 0;  // exact Veronese-orthogonal tuples in Xi'
  double n_prime = 0;      // (log B)^(n+1) * solution_count
  double n_ploc = 0;       // smoothed congruence-cone count
  double ploc_sum = 0;     // sum of 1/|nu(x)| over the filtered tuples
  i64 ploc_terms = 0;
  std::optional<std::vector<std::vector<i64>>> solutions;
};

/// N' and N^ploc in one sweep over Xi'. The harmonic accumulation runs in
/// ascending lex order of x, so reports are bit-reproducible.
CountReport count_solutions(const forms::Form& f, const PrimeVectorSet& xi,
                            bool keep_solutions = false);
CountReport count_solutions(const forms::Form& f, double B, bool keep_solutions = false,
                            const XiBudget& budget = {});

/// Ordered pairs of distinct Xi' members.
std::vector<std::pair<std::vector<i64>, std::vector<i64>>> ordered_pairs(
    const PrimeVectorSet& xi, std::size_t pair_budget = 10'000'000);

/// det of the lattice orthogonal to both Veronese images, via the
/// complement identity sqrt(|u|^2 |v|^2 - <u,v>^2) / gcd-of-minors.
double pair_intersection_det(const std::vector<i64>& x, const std::vector<i64>& y,
                             const forms::MonomialBasis& basis);

/// E'(B) = (log B)^(2n+2) * sum over ordered pairs of 1/det.
double e_prime(int d, int n, double B, const XiBudget& budget = {},
               std::size_t pair_budget = 60'000'000);

/// Pair error weight: min{1, defect^2/alpha^2} plus the indicator that the
/// ambient minor gcd fails to divide W/rad(W).
double pair_error_weight(const std::vector<i64>& x, const std::vector<i64>& y, double B,
                         const forms::MonomialBasis& basis);

/// Harmonic companion sums over Xi': the exact-solution sum of 1/|nu| and
/// the congruence-cone sum of 1/|nu|^2, with their scale prefactors.
double solution_harmonic_sum(const forms::Form& f, const PrimeVectorSet& xi);
double local_harmonic_sum(const forms::Form& f, const PrimeVectorSet& xi);

/// Pairs of independent prime vectors spanning a plane of determinant <= Delta.
i64 thin_pair_count(int n, double X, double Y, double Delta, const XiBudget& budget = {},
                    std::size_t pair_budget = 10'000'000);

double unit_ball_volume(int m);
/// Riemann zeta for s >= 2, Euler-Maclaurin, absolute error below 1e-12.
double zeta(double s);
/// V_(N-2) / (2 zeta(N-2)) with N the monomial count of (d, n).
double primitive_point_constant(int d, int n);

struct VarianceRow {
  u64 index = 0;
  double n_prime = 0;
  double n_ploc = 0;
  double diff_sq = 0;
  std::vector<i64> coeffs;
};

struct VarianceResult {
  int d = 0, n = 0;
  double A = 0, B = 0, epsilon = 0;
  double mean_sq_diff = 0;
  double std_error = 0;
  double comparison_scale = 0;  // B^2 / (A^2 (loglog A)^(n-2-eps)), annotation only
  std::vector<VarianceRow> rows;
};

/// Seeded ensemble mean of (N' - N^ploc)^2 over primitive coefficient
/// vectors in the ball of radius A. Pass B <= 0 to use the convention
/// B = A (log A)^(2n+2+epsilon).
VarianceResult variance_experiment(int d, int n, double A, double B, u64 samples, u64 seed,
                                   double epsilon = 0.1, const XiBudget& budget = {});

}  // namespace primal::counts
