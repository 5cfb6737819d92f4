#pragma once

#include <utility>
#include <vector>

#include "primal/util.hpp"

namespace primal::arith {

/// Ascending primes <= x (empty for x < 2).
std::vector<i64> primes_up_to(double x);

bool is_prime(i64 n);

/// Prime factorization of k >= 1 as (prime, exponent) pairs, ascending.
std::vector<std::pair<u64, int>> factorize(u64 k);

/// k-fold iterated logarithm with the max{1, .} clamp at every level:
/// level 0 is x itself, level k+1 is max{1, log(level k)}.
double iterated_log(double x, int k);

/// The (B, w, W, alpha) bundle driving the smoothed local counts:
///   w     = iterated_log(B,2) / iterated_log(B,3)
///   W     = prod_{p <= w} p^(ceil(log w / log p) + 1)   (exact, refuses on overflow)
///   alpha = log B
struct ScaleParams {
  double B = 0;
  double w = 0;
  u64 W = 1;
  double alpha = 0;
};

ScaleParams scale_params(double B);

/// Product of the distinct primes dividing k (rad(1) = 1).
u64 radical(u64 k);

u64 euler_phi(u64 k);

/// Number of distinct prime divisors.
int prime_omega(u64 k);

/// Number of divisors of k >= 1.
i64 divisor_count(u64 k);

/// Sum of p^t over the distinct primes p dividing k. For k = 0 the sum runs
/// over all primes and diverges when t >= -1; that case returns the tagged
/// infinity. k = 0 with t < -1 is rejected (nothing downstream needs the
/// convergent prime zeta values).
Extended prime_power_sum(u64 k, int t);

using IntMat = std::vector<std::vector<i64>>;

/// Row gcds and pairwise 2x2 minor gcds of [A | b], with their product g.
/// A zero row or a dependent row pair contributes a zero factor, so g = 0
/// exactly in the degenerate cases.
struct MinorGcdProfile {
  std::vector<i64> row_gcds;                      // d_j, 0 for a zero row
  std::vector<std::vector<i64>> pair_gcds;        // d_{i,j} for i < j
  bool degenerate = false;                        // some factor is zero
  std::vector<i64> prime_support;                 // distinct primes dividing g (empty if degenerate)
  std::string g_str;                              // decimal g (may exceed 64 bits)
};

MinorGcdProfile minor_gcd_profile(const IntMat& A, const std::vector<i64>& b);

/// exp(m * sum_{p | g} 1/p) where m is the row count of A; the tagged
/// infinity when g = 0.
Extended sieve_loss_factor(const IntMat& A, const std::vector<i64>& b);
Extended sieve_loss_factor(const MinorGcdProfile& profile, int m);

}  // namespace primal::arith
