#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace primal {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Thrown when an operation would exceed its configured work budget.
/// The CLI maps this to exit code 2.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- checked 64/128-bit arithmetic -------------------------------------
//
// Exact paths run on 64-bit integers, widen to 128 bits on demand and fail
// loudly beyond that.

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("i64 add overflow");
  return r;
}

inline i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("i64 sub overflow");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("i64 mul overflow");
  return r;
}

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("i128 add overflow");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("i128 mul overflow");
  return r;
}

inline i64 narrow_i64(i128 v) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) throw std::overflow_error("value does not fit in i64");
  return static_cast<i64>(v);
}

inline u64 positive_gcd(i64 a, i64 b) {
  u64 x = a < 0 ? u64(-(a + 1)) + 1 : u64(a);
  u64 y = b < 0 ? u64(-(b + 1)) + 1 : u64(b);
  return std::gcd(x, y);
}

// ---- exact rationals -----------------------------------------------------

/// Exact rational on 64-bit parts with 128-bit intermediates; always kept
/// normalized with positive denominator.
struct Rational {
  i64 num = 0;
  i64 den = 1;

  Rational() = default;
  Rational(i64 n) : num(n), den(1) {}
  Rational(i64 n, i64 d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    u64 g = positive_gcd(num, den);
    if (g > 1) { num /= i64(g); den /= i64(g); }
  }

  static Rational from_parts(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 a = n < 0 ? -n : n, b = d;
    while (b) { i128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    Rational r;
    r.num = narrow_i64(n);
    r.den = narrow_i64(d);
    return r;
  }

  Rational operator+(const Rational& o) const {
    return from_parts(i128(num) * o.den + i128(o.num) * den, i128(den) * o.den);
  }
  Rational operator-(const Rational& o) const {
    return from_parts(i128(num) * o.den - i128(o.num) * den, i128(den) * o.den);
  }
  Rational operator*(const Rational& o) const {
    return from_parts(i128(num) * o.num, i128(den) * o.den);
  }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("rational division by zero");
    return from_parts(i128(num) * o.den, i128(den) * o.num);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return i128(num) * o.den < i128(o.num) * den; }
  bool operator<=(const Rational& o) const { return i128(num) * o.den <= i128(o.num) * den; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  double to_double() const { return double(num) / double(den); }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

// ---- extended reals ------------------------------------------------------

/// Real value or a tagged +infinity sentinel. Reports never serialize a
/// float infinity; the tag survives JSON round trips.
struct Extended {
  bool infinite = false;
  double value = 0.0;

  static Extended inf() { return {true, 0.0}; }
  static Extended of(double v) { return {false, v}; }
  bool operator==(const Extended& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

// ---- deterministic RNG ---------------------------------------------------

inline u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xoshiro256** seeded via splitmix64. Hand-rolled so that streams are
/// reproducible across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(u64 seed) {
    u64 s = seed;
    for (auto& w : state_) { s = splitmix64(s); w = s; }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  /// Independent stream for a derived task; stable under any parallel schedule.
  Rng derived(u64 stream) const {
    return Rng(splitmix64(state_[0] ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL)));
  }

  u64 next() {
    u64 result = rotl(state_[1] * 5, 7) * 9;
    u64 t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, bound).
  u64 below(u64 bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    u64 threshold = (0 - bound) % bound;
    for (;;) {
      u64 r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform integer in [lo, hi], inclusive.
  i64 uniform_int(i64 lo, i64 hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_int empty range");
    return lo + i64(below(u64(hi) - u64(lo) + 1));
  }

 private:
  static u64 rotl(u64 x, int k) { return (x << k) | (x >> (64 - k)); }
  u64 state_[4];
};

// ---- deterministic parallelism --------------------------------------------

/// Worker count: PRIMAL_THREADS if set, otherwise hardware concurrency.
inline unsigned thread_count() {
  if (const char* s = std::getenv("PRIMAL_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return unsigned(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

/// Runs f(i) for i in [0, n). Each task must write only state owned by
/// index i; callers aggregate in index order, so results do not depend on
/// the schedule or the worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned workers = thread_count();
  if (n == 0) return;
  if (workers > n) workers = unsigned(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto work = [&] {
    try {
      for (;;) {
        std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        f(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!error) error = std::current_exception();
      next.store(n, std::memory_order_relaxed);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace primal
