#include "primal/counts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primal::counts {

using forms::Form;
using forms::MonomialBasis;

namespace {

// Ball membership for prime tuples. When B is integral the comparison
// (norm^2)^(n+1-d) <= B^2 runs on exact integers, so boundary tuples land
// deterministically on the right side; otherwise long double decides.
struct RadiusTest {
  bool integral = false;
  i128 B_sq = 0;
  int power = 1;  // n + 1 - d
  long double radius_sq = 0;

  static RadiusTest make(double B, int power) {
    RadiusTest t;
    t.power = power;
    double rounded = std::nearbyint(B);
    if (std::fabs(B - rounded) < 1e-9 && rounded >= 1 && rounded < 9e18) {
      t.integral = true;
      t.B_sq = checked_mul(i128(i64(rounded)), i128(i64(rounded)));
    }
    t.radius_sq = std::pow((long double)B, 2.0L / power);
    return t;
  }

  bool contains(i64 norm_sq) const {
    if (!integral) return (long double)norm_sq <= radius_sq;
    i128 v = 1;
    for (int i = 0; i < power; ++i) {
      if (__builtin_mul_overflow(v, i128(norm_sq), &v)) return false;
      if (v > B_sq) return false;
    }
    return v <= B_sq;
  }
};

template <class Emit>
void enumerate_prime_tuples(int dims, const RadiusTest& radius, const std::vector<i64>& primes,
                            bool exclude_diagonal, std::size_t limit, Emit&& emit) {
  std::vector<i64> x(static_cast<std::size_t>(dims));
  std::size_t count = 0;
  auto rec = [&](auto&& self, int pos, i64 norm_sq, bool all_equal) -> void {
    if (pos == dims) {
      if (exclude_diagonal && all_equal) return;
      if (++count > limit) throw BudgetExceeded("prime tuple enumeration: vector limit exceeded");
      emit(x);
      return;
    }
    i64 tail = 4 * i64(dims - pos - 1);  // every later coordinate is at least 2
    for (i64 p : primes) {
      i64 nsq = norm_sq + p * p;
      if (!radius.contains(nsq + tail)) break;  // primes ascend, no later fit
      x[std::size_t(pos)] = p;
      self(self, pos + 1, nsq, all_equal && (pos == 0 || p == x[0]));
    }
  };
  rec(rec, 0, 0, true);
}

i64 norm_sq_of(std::span<const i64> v) {
  i128 s = 0;
  for (i64 x : v) s += i128(x) * x;
  return narrow_i64(s);
}

i128 dot_i128(std::span<const i64> a, std::span<const i64> b) {
  i128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(i128(a[i]), i128(b[i])));
  return s;
}

// gcd of all 2x2 minors of the two rows (fast 128-bit path for hot loops)
i64 minor_gcd_2(std::span<const i64> u, std::span<const i64> v) {
  u64 g = 0;
  for (std::size_t i = 0; i < u.size() && g != 1; ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      i128 m = i128(u[i]) * v[j] - i128(u[j]) * v[i];
      if (m < 0) m = -m;
      g = std::gcd(g, u64(narrow_i64(m)));
      if (g == 1) break;
    }
  return i64(g);
}

}  // namespace

PrimeVectorSet prime_vectors(int d, int n, double B, const XiBudget& budget) {
  if (d < 1 || n < 1) throw std::invalid_argument("prime_vectors: need d >= 1 and n >= 1");
  if (n + 1 <= d)
    throw std::invalid_argument(
        "prime_vectors: need n + 1 > d so the radius exponent 1/(n+1-d) is positive");
  if (!(B > 0)) throw std::invalid_argument("prime_vectors: B must be positive");

  PrimeVectorSet xi;
  xi.d = d;
  xi.n = n;
  xi.B = B;
  xi.radius = std::pow(B, 1.0 / (n + 1 - d));
  if (xi.radius > budget.sieve_limit)
    throw BudgetExceeded("prime_vectors: radius exceeds sieve limit");

  auto primes = arith::primes_up_to(xi.radius + 1);  // filter is exact, padding is safe
  RadiusTest radius = RadiusTest::make(B, n + 1 - d);
  enumerate_prime_tuples(n + 1, radius, primes, true, budget.vector_limit,
                         [&](const std::vector<i64>& x) { xi.vectors.push_back(x); });
  return xi;
}

std::vector<std::vector<i64>> prime_tuples_in_ball(int dims, double radius,
                                                   const XiBudget& budget) {
  if (dims < 1) throw std::invalid_argument("prime_tuples_in_ball: dims must be positive");
  if (radius > budget.sieve_limit)
    throw BudgetExceeded("prime_tuples_in_ball: radius exceeds sieve limit");
  std::vector<std::vector<i64>> out;
  if (!(radius >= 2)) return out;
  RadiusTest test;
  test.integral = false;
  test.radius_sq = (long double)radius * radius;
  test.power = 1;
  auto primes = arith::primes_up_to(radius);
  enumerate_prime_tuples(dims, test, primes, false, budget.vector_limit,
                         [&](const std::vector<i64>& x) { out.push_back(x); });
  return out;
}

bool in_cone(std::span<const i64> v, std::span<const i64> t, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("in_cone: gamma must be positive");
  i128 dot = dot_i128(v, t);
  i128 nv = dot_i128(v, v), nt = dot_i128(t, t);
  if (nv == 0 || nt == 0) throw std::invalid_argument("in_cone: zero vector");
  long double lhs = 4.0L * (long double)gamma * gamma * (long double)dot * (long double)dot;
  return lhs <= (long double)nv * (long double)nt;
}

bool in_cone(std::span<const double> v, std::span<const double> t, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("in_cone: gamma must be positive");
  double dot = 0, nv = 0, nt = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dot += v[i] * t[i];
    nv += v[i] * v[i];
    nt += t[i] * t[i];
  }
  if (nv == 0 || nt == 0) throw std::invalid_argument("in_cone: zero vector");
  return 4.0 * gamma * gamma * dot * dot <= nv * nt;
}

CountReport count_solutions(const Form& f, const PrimeVectorSet& xi, bool keep_solutions) {
  if (f.basis.d != xi.d || f.basis.n != xi.n)
    throw std::invalid_argument("count_solutions: form and tuple set disagree on (d, n)");
  CountReport rep;
  rep.B = xi.B;
  rep.scale = arith::scale_params(xi.B);
  if (keep_solutions) rep.solutions.emplace();

  double log_pow = std::pow(rep.scale.alpha, double(xi.n) + 1);
  u64 W = rep.scale.W;
  double ploc_sum = 0;
  for (auto& x : xi.vectors) {
    auto nu = forms::veronese(std::span<const i64>(x), f.basis);
    i128 s = dot_i128(f.coeffs, nu);
    if (s == 0) {
      ++rep.solution_count;
      if (keep_solutions) rep.solutions->push_back(x);
    }
    i128 rem = s % i128(W);
    if (rem == 0 && in_cone(nu, f.coeffs, rep.scale.alpha)) {
      ploc_sum += 1.0 / std::sqrt(double(norm_sq_of(nu)));
      ++rep.ploc_terms;
    }
  }
  rep.ploc_sum = ploc_sum;
  rep.n_prime = log_pow * double(rep.solution_count);
  rep.n_ploc = log_pow * rep.scale.alpha * double(W) / f.norm * ploc_sum;
  return rep;
}

CountReport count_solutions(const Form& f, double B, bool keep_solutions, const XiBudget& budget) {
  return count_solutions(f, prime_vectors(f.basis.d, f.basis.n, B, budget), keep_solutions);
}

std::vector<std::pair<std::vector<i64>, std::vector<i64>>> ordered_pairs(
    const PrimeVectorSet& xi, std::size_t pair_budget) {
  std::size_t m = xi.vectors.size();
  if (m > 1 && double(m) * double(m - 1) > double(pair_budget))
    throw BudgetExceeded("ordered_pairs: pair budget exceeded");
  std::vector<std::pair<std::vector<i64>, std::vector<i64>>> out;
  out.reserve(m * (m > 0 ? m - 1 : 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) out.emplace_back(xi.vectors[i], xi.vectors[j]);
  return out;
}

double pair_intersection_det(const std::vector<i64>& x, const std::vector<i64>& y,
                             const MonomialBasis& basis) {
  auto u = forms::veronese(std::span<const i64>(x), basis);
  auto v = forms::veronese(std::span<const i64>(y), basis);
  i128 g1 = checked_mul(dot_i128(u, u), dot_i128(v, v)) - checked_mul(dot_i128(u, v), dot_i128(u, v));
  if (g1 == 0) throw std::invalid_argument("pair_intersection_det: dependent Veronese images");
  i64 g = minor_gcd_2(u, v);
  return std::sqrt(double((long double)g1)) / double(g);
}

double e_prime(int d, int n, double B, const XiBudget& budget, std::size_t pair_budget) {
  auto xi = prime_vectors(d, n, B, budget);
  std::size_t m = xi.vectors.size();
  if (double(m) * double(m) > double(pair_budget))
    throw BudgetExceeded("e_prime: pair budget exceeded");
  auto basis = forms::monomial_basis(d, n);

  std::vector<std::vector<i64>> nus(m);
  std::vector<i128> norms(m);
  for (std::size_t i = 0; i < m; ++i) {
    nus[i] = forms::veronese(std::span<const i64>(xi.vectors[i]), basis);
    norms[i] = dot_i128(nus[i], nus[i]);
  }

  double sum = 0;  // fixed (i, j) order keeps the accumulation reproducible
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      i128 dot = dot_i128(nus[i], nus[j]);
      i128 g1 = checked_mul(norms[i], norms[j]) - checked_mul(dot, dot);
      i64 g = minor_gcd_2(nus[i], nus[j]);
      sum += 2.0 * double(g) / std::sqrt(double((long double)g1));
    }
  double alpha = std::log(B);
  return std::pow(alpha, 2.0 * n + 2.0) * sum;
}

double pair_error_weight(const std::vector<i64>& x, const std::vector<i64>& y, double B,
                         const MonomialBasis& basis) {
  auto scale = arith::scale_params(B);
  double defect = lattice::veronese_orthogonality_defect(x, y, basis);
  double term = std::min(1.0, defect * defect / (scale.alpha * scale.alpha));
  i64 g = lattice::gcd_minors({x, y});
  u64 cofactor = scale.W / arith::radical(scale.W);
  bool divides = g != 0 && cofactor % u64(g) == 0;
  return term + (divides ? 0.0 : 1.0);
}

double solution_harmonic_sum(const Form& f, const PrimeVectorSet& xi) {
  auto scale = arith::scale_params(xi.B);
  double sum = 0;
  for (auto& x : xi.vectors) {
    auto nu = forms::veronese(std::span<const i64>(x), f.basis);
    if (dot_i128(f.coeffs, nu) == 0) sum += 1.0 / std::sqrt(double(norm_sq_of(nu)));
  }
  double log_pow = std::pow(scale.alpha, double(xi.n) + 1);
  return log_pow * scale.alpha * double(scale.W) / f.norm * sum;
}

double local_harmonic_sum(const Form& f, const PrimeVectorSet& xi) {
  auto scale = arith::scale_params(xi.B);
  double sum = 0;
  for (auto& x : xi.vectors) {
    auto nu = forms::veronese(std::span<const i64>(x), f.basis);
    i128 s = dot_i128(f.coeffs, nu);
    if (s % i128(scale.W) == 0 && in_cone(nu, f.coeffs, scale.alpha))
      sum += 1.0 / double(norm_sq_of(nu));
  }
  double log_pow = std::pow(scale.alpha, double(xi.n) + 1);
  double aw = scale.alpha * double(scale.W) / f.norm;
  return log_pow * aw * aw * sum;
}

i64 thin_pair_count(int n, double X, double Y, double Delta, const XiBudget& budget,
                    std::size_t pair_budget) {
  if (n < 1) throw std::invalid_argument("thin_pair_count: n must be positive");
  if (Delta < 1) return 0;  // integer plane determinants are at least 1
  auto tx = prime_tuples_in_ball(n + 1, X, budget);
  auto ty = prime_tuples_in_ball(n + 1, Y, budget);
  if (double(tx.size()) * double(ty.size()) > double(pair_budget))
    throw BudgetExceeded("thin_pair_count: pair budget exceeded");
  i64 count = 0;
  for (auto& x : tx)
    for (auto& y : ty) {
      if (minor_gcd_2(x, y) == 0) continue;  // dependent pair spans a line
      if (lattice::min_sublattice_det(x, y, 2) <= Delta) ++count;
    }
  return count;
}

double unit_ball_volume(int m) {
  if (m < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
  double v0 = 1, v1 = 2;
  if (m == 0) return v0;
  if (m == 1) return v1;
  double v = (m % 2 == 0) ? v0 : v1;
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2) v *= 2.0 * M_PI / k;
  return v;
}

double zeta(double s) {
  if (!(s >= 2)) throw std::invalid_argument("zeta: need s >= 2");
  const int M = 64;
  double sum = 0;
  for (int k = 1; k < M; ++k) sum += std::pow(double(k), -s);
  double m = double(M);
  sum += std::pow(m, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(m, -s);
  sum += s * std::pow(m, -s - 1.0) / 12.0;
  sum -= s * (s + 1.0) * (s + 2.0) * std::pow(m, -s - 3.0) / 720.0;
  return sum;
}

double primitive_point_constant(int d, int n) {
  i64 N = forms::monomial_count(d, n);
  if (N - 2 < 2)
    throw std::invalid_argument("primitive_point_constant: needs monomial count >= 4");
  return unit_ball_volume(int(N - 2)) / (2.0 * zeta(double(N - 2)));
}

VarianceResult variance_experiment(int d, int n, double A, double B, u64 samples, u64 seed,
                                   double epsilon, const XiBudget& budget) {
  if (samples < 1) throw std::invalid_argument("variance_experiment: empty ensemble");
  if (!(A >= 1)) throw std::invalid_argument("variance_experiment: need A >= 1");
  if (B <= 0) {
    if (!(A > 1)) throw std::invalid_argument("variance_experiment: default B needs A > 1");
    B = A * std::pow(std::log(A), 2.0 * n + 2.0 + epsilon);
  }

  VarianceResult res;
  res.d = d;
  res.n = n;
  res.A = A;
  res.B = B;
  res.epsilon = epsilon;
  double loglog = arith::iterated_log(A, 2);
  res.comparison_scale = B * B / (A * A * std::pow(loglog, double(n) - 2.0 - epsilon));

  auto xi = prime_vectors(d, n, B, budget);
  auto basis = forms::monomial_basis(d, n);
  int N = int(basis.size());

  res.rows.resize(samples);
  Rng root(seed);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = root.derived(i);
    auto coeffs = forms::sample_primitive(N, A, rng);
    auto f = Form::make(basis, coeffs);
    auto rep = count_solutions(f, xi, false);
    double diff = rep.n_prime - rep.n_ploc;
    res.rows[i] = VarianceRow{u64(i), rep.n_prime, rep.n_ploc, diff * diff, std::move(coeffs)};
  });

  double mean = 0;
  for (auto& row : res.rows) mean += row.diff_sq;
  mean /= double(samples);
  res.mean_sq_diff = mean;
  if (samples > 1) {
    double ss = 0;
    for (auto& row : res.rows) ss += (row.diff_sq - mean) * (row.diff_sq - mean);
    res.std_error = std::sqrt(ss / (double(samples) * double(samples - 1)));
  }
  return res;
}

}  // namespace primal::counts
