#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "primal/forms.hpp"
#include "primal/lattice.hpp"

using namespace primal;
using namespace primal::forms;

namespace {

double norm_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("monomial basis smallest case is forced") {
  auto b = monomial_basis(2, 1);
  REQUIRE(b.size() == 3);
  CHECK(b.exponents[0] == std::vector<int>{2, 0});
  CHECK(b.exponents[1] == std::vector<int>{1, 1});
  CHECK(b.exponents[2] == std::vector<int>{0, 2});
}

TEST_CASE("monomial basis counts and invariants") {
  CHECK(monomial_basis(2, 2).size() == 6);
  CHECK(monomial_basis(3, 3).size() == 20);  // C(6,3)
  CHECK(monomial_count(3, 3) == 20);

  for (int d = 1; d <= 4; ++d)
    for (int n = 1; n <= 3; ++n) {
      auto basis = monomial_basis(d, n);
      CHECK(i64(basis.size()) == monomial_count(d, n));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        int sum = 0;
        for (int e : basis.exponents[i]) sum += e;
        CHECK(sum == d);
        if (i) CHECK(basis.exponents[i - 1] > basis.exponents[i]);  // strict descending lex
      }
    }

  CHECK_THROWS_AS(monomial_basis(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(monomial_basis(2, 0), std::invalid_argument);
}

TEST_CASE("veronese evaluation") {
  auto b = monomial_basis(2, 1);
  std::vector<i64> x{2, 3};
  CHECK(veronese(std::span<const i64>(x), b) == std::vector<i64>{4, 6, 9});

  auto b23 = monomial_basis(2, 3);
  std::vector<i64> ones(4, 1);
  auto nu = veronese(std::span<const i64>(ones), b23);
  CHECK(std::all_of(nu.begin(), nu.end(), [](i64 v) { return v == 1; }));
}

TEST_CASE("veronese norm dominates the sup-norm power and keeps positivity") {
  // |nu(x)| >= max_i |x_i|^d (the pure powers are among the monomials), so
  // |nu(x)| >= (|x| / sqrt(n+1))^d. The unweighted basis does not satisfy
  // |nu(x)| >= |x|^d pointwise: x = (1,1)/sqrt(2), d = 2 gives 0.866 < 1.
  Rng rng(42);
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 3; ++n) {
      auto basis = monomial_basis(d, n);
      for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(std::size_t(n) + 1);
        double sup = 0;
        for (auto& v : x) {
          v = 4.0 * rng.uniform() - 2.0;
          sup = std::max(sup, std::fabs(v));
        }
        auto nu = veronese(std::span<const double>(x), basis);
        CHECK(norm_of(nu) >= std::pow(sup, d) * (1 - 1e-12));
        CHECK(norm_of(nu) >=
              std::pow(norm_of(x) / std::sqrt(double(n + 1)), d) * (1 - 1e-12));

        for (auto& v : x) v = std::fabs(v) + 0.01;
        nu = veronese(std::span<const double>(x), basis);
        CHECK(std::all_of(nu.begin(), nu.end(), [](double v) { return v > 0; }));
      }
    }

  std::vector<double> diag{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  auto nu = veronese(std::span<const double>(diag), monomial_basis(2, 1));
  CHECK(norm_of(nu) < 1.0);  // the counterexample pinned down
}

TEST_CASE("evaluate exact examples") {
  auto f = Form::make(monomial_basis(2, 1), {1, 0, -1});  // x0^2 - x1^2
  std::vector<i64> x{3, 3};
  CHECK(evaluate(f, std::span<const i64>(x)) == 0);

  auto g = Form::make(monomial_basis(2, 3), {1, 0, 0, 0, 1, 0, 0, -1, 0, -1});
  std::vector<i64> y{2, 3, 3, 2};
  CHECK(evaluate(g, std::span<const i64>(y)) == 0);
  std::vector<i64> z{2, 3, 3, 3};
  CHECK(evaluate(g, std::span<const i64>(z)) == 4 + 9 - 9 - 9);
}

TEST_CASE("homogeneity on random integer points") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + int(rng.below(2)), n = 1 + int(rng.below(3));
    auto basis = monomial_basis(d, n);
    std::vector<i64> coeffs(basis.size());
    for (auto& c : coeffs) c = rng.uniform_int(-9, 9);
    if (std::all_of(coeffs.begin(), coeffs.end(), [](i64 c) { return c == 0; })) coeffs[0] = 1;
    auto f = Form::make(basis, coeffs);
    std::vector<i64> x(std::size_t(n) + 1), x2(std::size_t(n) + 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform_int(-7, 7);
      x2[i] = 2 * x[i];
    }
    CHECK(evaluate(f, std::span<const i64>(x2)) ==
          (i64(1) << d) * evaluate(f, std::span<const i64>(x)));
  }
}

TEST_CASE("evaluation widens and fails loudly") {
  auto basis = monomial_basis(3, 1);
  // terms overflow 64 bits individually but cancel: the widened path
  // must still produce the exact value
  auto f = Form::make(basis, {2, 0, 0, -2});
  std::vector<i64> x{2'000'000, 2'000'000};
  CHECK(evaluate(f, std::span<const i64>(x)) == 0);

  auto g = Form::make(basis, {3, 0, 0, -2});
  CHECK(evaluate(g, std::span<const i64>(x)) == 8'000'000'000'000'000'000LL);

  auto big = Form::make(basis, {i64(1) << 62, 0, 0, i64(1) << 62});
  std::vector<i64> huge{i64(1) << 40, i64(1) << 40};
  CHECK_THROWS_AS(evaluate(big, std::span<const i64>(huge)), std::overflow_error);
}

TEST_CASE("gradient examples and Euler identity") {
  auto g = Form::make(monomial_basis(2, 3), {1, 0, 0, 0, 1, 0, 0, -1, 0, -1});
  std::vector<i64> ones(4, 1);
  CHECK(gradient(g, std::span<const i64>(ones)) == std::vector<i64>{2, 2, -2, -2});

  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + int(rng.below(2)), n = 1 + int(rng.below(3));
    auto basis = monomial_basis(d, n);
    std::vector<i64> coeffs(basis.size());
    for (auto& c : coeffs) c = rng.uniform_int(-9, 9);
    coeffs[0] = coeffs[0] == 0 ? 1 : coeffs[0];
    auto f = Form::make(basis, coeffs);
    std::vector<i64> x(std::size_t(n) + 1);
    for (auto& v : x) v = rng.uniform_int(-6, 6);
    auto grad = gradient(f, std::span<const i64>(x));
    i64 euler = 0;
    for (std::size_t i = 0; i < x.size(); ++i) euler += x[i] * grad[i];
    CHECK(euler == i64(d) * evaluate(f, std::span<const i64>(x)));
  }
}

TEST_CASE("gradient agrees with central differences") {
  Rng rng(13);
  auto basis = monomial_basis(3, 2);
  std::vector<i64> coeffs(basis.size());
  for (auto& c : coeffs) c = rng.uniform_int(-5, 5);
  coeffs[0] = 2;
  auto f = Form::make(basis, coeffs);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(3);
    for (auto& v : x) v = 2.0 * rng.uniform() + 0.25;
    auto grad = gradient(f, std::span<const double>(x));
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (evaluate(f, std::span<const double>(xp)) -
                   evaluate(f, std::span<const double>(xm))) /
                  (2 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("zero set matches solution lattice membership") {
  Rng rng(17);
  auto basis = monomial_basis(2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<i64> x(3);
    for (auto& v : x) v = rng.uniform_int(-4, 4);
    if (std::all_of(x.begin(), x.end(), [](i64 v) { return v == 0; })) x[0] = 1;
    auto nu = veronese(std::span<const i64>(x), basis);
    if (std::all_of(nu.begin(), nu.end(), [](i64 v) { return v == 0; })) continue;
    auto L = lattice::solution_lattice(nu);
    std::vector<i64> coeffs(basis.size());
    for (auto& c : coeffs) c = rng.uniform_int(-5, 5);
    if (std::all_of(coeffs.begin(), coeffs.end(), [](i64 c) { return c == 0; })) coeffs[0] = 3;
    auto f = Form::make(basis, coeffs);
    bool zero = evaluate(f, std::span<const i64>(x)) == 0;
    CHECK(zero == lattice::membership(L, coeffs));
  }
}

TEST_CASE("sample_primitive support at A = 1") {
  Rng rng(23);
  std::set<std::vector<i64>> seen;
  for (int i = 0; i < 400; ++i) seen.insert(sample_primitive(2, 1.0, rng));
  std::set<std::vector<i64>> expected{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  CHECK(seen == expected);
}

TEST_CASE("sample_primitive always primitive, in ball, nonzero") {
  Rng rng(29);
  for (int i = 0; i < 500; ++i) {
    auto v = sample_primitive(4, 3.5, rng);
    u64 g = 0;
    double norm_sq = 0;
    for (i64 c : v) {
      g = positive_gcd(i64(g), c);
      norm_sq += double(c) * double(c);
    }
    CHECK(g == 1);
    CHECK(norm_sq <= 3.5 * 3.5);
    CHECK(norm_sq > 0);
  }
}

TEST_CASE("sample_primitive chi-square against exact enumeration at A=2, N=2") {
  // exact support: primitive vectors with norm <= 2
  std::vector<std::vector<i64>> support;
  for (i64 a = -2; a <= 2; ++a)
    for (i64 b = -2; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      if (a * a + b * b > 4) continue;
      if (positive_gcd(a, b) != 1) continue;
      support.push_back({a, b});
    }
  REQUIRE(support.size() == 8);  // 4 axis units and 4 diagonals; (2,1)-type has norm > 2

  std::map<std::vector<i64>, int> counts;
  Rng rng(31);
  const int draws = 24000;
  for (int i = 0; i < draws; ++i) ++counts[sample_primitive(2, 2.0, rng)];
  for (auto& [v, c] : counts)
    CHECK(std::find(support.begin(), support.end(), v) != support.end());

  double expected = double(draws) / double(support.size());
  double chi_sq = 0;
  for (auto& v : support) {
    double diff = counts[v] - expected;
    chi_sq += diff * diff / expected;
  }
  // 7 degrees of freedom; 99.9% quantile is 24.32
  CHECK(chi_sq < 24.32);
}

TEST_CASE("sample_primitive rejects pathological radius") {
  Rng rng(37);
  CHECK_THROWS_AS(sample_primitive(3, 0.5, rng, 1000), std::runtime_error);
}

TEST_CASE("form JSON round trip") {
  auto f = Form::make(monomial_basis(2, 3), {1, 0, 0, 0, 1, 0, 0, -1, 0, -1});
  auto g = form_from_json(to_json(f));
  CHECK(g.coeffs == f.coeffs);
  CHECK(g.basis.d == f.basis.d);
  CHECK(g.basis.n == f.basis.n);
  CHECK(g.norm == doctest::Approx(2.0));
}

TEST_CASE("form constructor rejections") {
  CHECK_THROWS_AS(Form::make(monomial_basis(2, 1), {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Form::make(monomial_basis(2, 1), {1, 0}), std::invalid_argument);
}
