#include "primal/arith.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace primal::arith {

std::vector<i64> primes_up_to(double x) {
  if (std::isnan(x)) throw std::invalid_argument("primes_up_to: nan bound");
  if (x < 2.0) return {};
  if (x > 4e9) throw BudgetExceeded("primes_up_to: bound beyond supported sieve size");
  i64 limit = i64(std::floor(x));
  std::vector<bool> composite(std::size_t(limit) + 1, false);
  std::vector<i64> primes;
  for (i64 p = 2; p <= limit; ++p) {
    if (composite[std::size_t(p)]) continue;
    primes.push_back(p);
    for (i64 q = p * p; q <= limit; q += p) composite[std::size_t(q)] = true;
  }
  return primes;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<u64, int>> factorize(u64 k) {
  if (k == 0) throw std::invalid_argument("factorize(0)");
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= k; p += (p == 2 ? 1 : 2)) {
    if (k % p) continue;
    int e = 0;
    while (k % p == 0) { k /= p; ++e; }
    out.emplace_back(p, e);
  }
  if (k > 1) out.emplace_back(k, 1);
  return out;
}

double iterated_log(double x, int k) {
  if (!(x > 0)) throw std::invalid_argument("iterated_log: x must be positive");
  if (k < 0) throw std::invalid_argument("iterated_log: negative depth");
  double v = x;
  for (int i = 0; i < k; ++i) v = std::max(1.0, std::log(v));
  return v;
}

ScaleParams scale_params(double B) {
  if (!(B > 1)) throw std::invalid_argument("scale_params: B must exceed 1");
  ScaleParams s;
  s.B = B;
  s.w = iterated_log(B, 2) / iterated_log(B, 3);
  s.alpha = std::log(B);
  u64 W = 1;
  for (i64 p : primes_up_to(s.w)) {
    // smallest e with p^e >= w, computed without floating ceil
    int e = 0;
    double pe = 1;
    while (pe < s.w) { pe *= double(p); ++e; }
    for (int i = 0; i < e + 1; ++i) {
      if (W > UINT64_MAX / u64(p))
        throw std::overflow_error("scale_params: W exceeds 64 bits; B is beyond desk scale");
      W *= u64(p);
    }
  }
  s.W = W;
  return s;
}

u64 radical(u64 k) {
  u64 r = 1;
  for (auto& [p, e] : factorize(k)) r *= p;
  return r;
}

u64 euler_phi(u64 k) {
  u64 r = k;
  for (auto& [p, e] : factorize(k)) r = r / p * (p - 1);
  return r;
}

int prime_omega(u64 k) { return int(factorize(k).size()); }

i64 divisor_count(u64 k) {
  i64 t = 1;
  for (auto& [p, e] : factorize(k)) t *= i64(e) + 1;
  return t;
}

Extended prime_power_sum(u64 k, int t) {
  if (k == 0) {
    if (t >= -1) return Extended::inf();
    throw std::invalid_argument("prime_power_sum: k = 0 with t < -1 is unsupported");
  }
  double sum = 0;
  for (auto& [p, e] : factorize(k)) sum += std::pow(double(p), double(t));
  return Extended::of(sum);
}

namespace {

i64 row_gcd(const std::vector<i64>& row) {
  u64 g = 0;
  for (i64 v : row) g = positive_gcd(i64(g), v);
  return i64(g);
}

// gcd of the 2x2 minors of rows i and j of [A | b]
i64 pair_minor_gcd(const std::vector<i64>& ri, const std::vector<i64>& rj, i64 bi, i64 bj) {
  std::size_t n = ri.size();
  u64 g = 0;
  auto fold = [&](i128 m) {
    i64 v = narrow_i64(m < 0 ? -m : m);
    g = positive_gcd(i64(g), v);
  };
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l)
      fold(i128(ri[k]) * rj[l] - i128(ri[l]) * rj[k]);
  for (std::size_t k = 0; k < n; ++k)
    fold(i128(ri[k]) * bj - i128(bi) * rj[k]);
  return i64(g);
}

}  // namespace

MinorGcdProfile minor_gcd_profile(const IntMat& A, const std::vector<i64>& b) {
  std::size_t m = A.size();
  if (m == 0) throw std::invalid_argument("minor_gcd_profile: empty matrix");
  if (b.size() != m) throw std::invalid_argument("minor_gcd_profile: b length mismatch");
  std::size_t n = A[0].size();
  if (n == 0) throw std::invalid_argument("minor_gcd_profile: empty rows");
  for (auto& row : A)
    if (row.size() != n) throw std::invalid_argument("minor_gcd_profile: ragged matrix");

  MinorGcdProfile prof;
  prof.row_gcds.reserve(m);
  mpz_class g = 1;
  std::set<u64> primes;
  auto account = [&](i64 d) {
    if (d == 0) { prof.degenerate = true; return; }
    g *= d;
    for (auto& [p, e] : factorize(u64(d))) primes.insert(p);
  };

  for (std::size_t j = 0; j < m; ++j) {
    i64 d = row_gcd(A[j]);
    prof.row_gcds.push_back(d);
    account(d);
  }
  prof.pair_gcds.assign(m, {});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      i64 d = pair_minor_gcd(A[i], A[j], b[i], b[j]);
      prof.pair_gcds[i].push_back(d);
      account(d);
    }

  if (prof.degenerate) {
    prof.g_str = "0";
  } else {
    prof.g_str = g.get_str();
    prof.prime_support.assign(primes.begin(), primes.end());
  }
  return prof;
}

Extended sieve_loss_factor(const MinorGcdProfile& profile, int m) {
  if (profile.degenerate) return Extended::inf();
  double s = 0;
  for (i64 p : profile.prime_support) s += 1.0 / double(p);
  return Extended::of(std::exp(double(m) * s));
}

Extended sieve_loss_factor(const IntMat& A, const std::vector<i64>& b) {
  return sieve_loss_factor(minor_gcd_profile(A, b), int(A.size()));
}

}  // namespace primal::arith
