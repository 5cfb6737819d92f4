#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "primal/forms.hpp"
#include "primal/lattice.hpp"

using namespace primal;
using namespace primal::lattice;

namespace {

i64 dot(const Vec& a, const Vec& b) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

i64 norm_sq(const Vec& v) { return dot(v, v); }

// test-local exact data for a vector pair: Gram determinant and minor gcd
i128 pair_gram(const Vec& x, const Vec& y) {
  i128 nx = 0, ny = 0, d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx += i128(x[i]) * x[i];
    ny += i128(y[i]) * y[i];
    d += i128(x[i]) * y[i];
  }
  return nx * ny - d * d;
}

i64 pair_minor_gcd(const Vec& x, const Vec& y) {
  u64 g = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      i64 m = x[i] * y[j] - x[j] * y[i];
      g = positive_gcd(i64(g), m);
    }
  return i64(g);
}

Vec random_primitive(int N, i64 box, Rng& rng) {
  for (;;) {
    Vec v(static_cast<std::size_t>(N));
    for (auto& c : v) c = rng.uniform_int(-box, box);
    u64 g = 0;
    for (i64 c : v) g = positive_gcd(i64(g), c);
    if (g == 1) return v;
  }
}

// independent minimal-determinant oracle for a pair: every rank-2 lattice
// containing {x, y} has a basis of vectors no longer than max(|x|, |y|), and
// plane points are recovered from two coordinates where a minor is nonzero
double brute_force_pair_det(const Vec& x, const Vec& y) {
  std::size_t N = x.size();
  std::size_t pi = 0, pj = 1;
  i64 minor = 0;
  for (std::size_t i = 0; i < N && minor == 0; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      minor = x[i] * y[j] - x[j] * y[i];
      if (minor != 0) { pi = i; pj = j; break; }
    }
  REQUIRE(minor != 0);

  i64 radius_sq = std::max(norm_sq(x), norm_sq(y));
  i64 box = i64(std::floor(std::sqrt(double(radius_sq)))) + 1;
  std::vector<Vec> plane;
  for (i64 zi = -box; zi <= box; ++zi)
    for (i64 zj = -box; zj <= box; ++zj) {
      // rational coordinates of z in the (x, y) frame, scaled by the minor
      i64 s_num = zi * y[pj] - zj * y[pi];
      i64 t_num = x[pi] * zj - x[pj] * zi;
      Vec z(N);
      bool integral = true;
      for (std::size_t k = 0; k < N && integral; ++k) {
        i64 num = s_num * x[k] + t_num * y[k];
        if (num % minor != 0) integral = false;
        else z[k] = num / minor;
      }
      if (!integral) continue;
      i64 nsq = norm_sq(z);
      if (nsq == 0 || nsq > radius_sq) continue;
      plane.push_back(z);
    }

  // membership of w in Z u + Z v via 2x2 Cramer on the pivot coordinates
  auto contains = [&](const Vec& u, const Vec& v, const Vec& w) {
    i64 det = u[pi] * v[pj] - u[pj] * v[pi];
    if (det == 0) return false;
    i64 a_num = w[pi] * v[pj] - w[pj] * v[pi];
    i64 b_num = u[pi] * w[pj] - u[pj] * w[pi];
    if (a_num % det || b_num % det) return false;
    i64 a = a_num / det, b = b_num / det;
    for (std::size_t k = 0; k < N; ++k)
      if (a * u[k] + b * v[k] != w[k]) return false;
    return true;
  };

  double best = -1;
  for (std::size_t i = 0; i < plane.size(); ++i)
    for (std::size_t j = i + 1; j < plane.size(); ++j) {
      const Vec& u = plane[i];
      const Vec& v = plane[j];
      if (!contains(u, v, x) || !contains(u, v, y)) continue;
      i128 g = pair_gram(u, v);
      if (g == 0) continue;
      double d = std::sqrt(double((long double)g));
      if (best < 0 || d < best) best = d;
    }
  REQUIRE(best > 0);
  return best;
}

}  // namespace

TEST_CASE("solution lattice examples") {
  auto L = solution_lattice({1, 1});
  CHECK(L.rank() == 1);
  CHECK(L.gram_determinant() == 2);  // det = sqrt(2) = |c|
  CHECK(std::abs(L.basis()[0][0]) == 1);
  CHECK(L.basis()[0][0] + L.basis()[0][1] == 0);

  L = solution_lattice({1, 0, 0});
  CHECK(L.rank() == 2);
  CHECK(L.gram_determinant() == 1);
  for (auto& row : L.basis()) CHECK(row[0] == 0);

  L = solution_lattice({2, 1});
  CHECK(L.gram_determinant() == 5);

  CHECK_THROWS_AS(solution_lattice({0, 0}), std::invalid_argument);
}

TEST_CASE("solution lattice determinant equals |c| for primitive c") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    int N = 2 + int(rng.below(11));  // up to 12
    Vec c = random_primitive(N, 9, rng);
    auto L = solution_lattice(c);
    CHECK(L.rank() == N - 1);
    CHECK(L.gram_determinant() == norm_sq(c));
    for (auto& row : L.basis()) CHECK(dot(row, c) == 0);
  }
}

TEST_CASE("congruence lattice examples") {
  auto L = congruence_lattice({{1, 0}, 2});
  CHECK(L.rank() == 2);
  CHECK(L.gram_determinant() == 4);  // index 2 in Z^2
  for (auto& row : L.basis()) CHECK(row[0] % 2 == 0);

  CHECK(congruence_lattice({{5, 3}, 1}).gram_determinant() == 1);
  CHECK(congruence_lattice({{2, 4}, 2}).gram_determinant() == 1);  // always even
  CHECK(congruence_lattice({{3, 3}, 3}).gram_determinant() == 1);
  CHECK(congruence_lattice({{0, 0}, 7}).gram_determinant() == 1);

  // for gcd(c, Q) = 1 the index is exactly Q
  auto M = congruence_lattice({{3, 5, 7}, 8});
  CHECK(M.gram_determinant() == 64);
}

TEST_CASE("congruence lattice membership matches the defining congruence") {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    int N = 2 + int(rng.below(3));
    Vec c(static_cast<std::size_t>(N));
    for (auto& v : c) v = rng.uniform_int(-6, 6);
    u64 Q = 1 + rng.below(8);
    auto L = congruence_lattice({c, Q});
    for (int k = 0; k < 40; ++k) {
      Vec y(static_cast<std::size_t>(N));
      for (auto& v : y) v = rng.uniform_int(-9, 9);
      bool congruent = ((dot(c, y) % i64(Q)) + i64(Q)) % i64(Q) == 0;
      CHECK(congruent == membership(L, y));
    }
  }
}

TEST_CASE("intersection examples") {
  auto L = intersect(solution_lattice({1, 0, 0}), solution_lattice({0, 1, 0}));
  CHECK(L.rank() == 1);
  CHECK(L.gram_determinant() == 1);
  CHECK(L.basis()[0][0] == 0);
  CHECK(L.basis()[0][1] == 0);

  auto A = solution_lattice({3, -1, 2});
  auto AA = intersect(A, A);
  CHECK(AA.rank() == A.rank());
  CHECK(AA.gram_determinant() == A.gram_determinant());
}

TEST_CASE("intersection membership is conjunction of memberships") {
  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    int N = 3 + int(rng.below(2));
    Vec c1 = random_primitive(N, 5, rng), c2 = random_primitive(N, 5, rng);
    auto L1 = solution_lattice(c1);
    auto L2 = congruence_lattice({c2, 2 + rng.below(5)});
    auto I = intersect(L1, L2);
    for (int k = 0; k < 60; ++k) {
      Vec v(static_cast<std::size_t>(N));
      for (auto& x : v) x = rng.uniform_int(-8, 8);
      CHECK(membership(I, v) == (membership(L1, v) && membership(L2, v)));
    }
  }
}

TEST_CASE("intersection determinant matches the complement identity oracle") {
  // spec pair x=(2,3,5,2), y=(3,2,2,5) at d=2 plus random primitive pairs
  auto basis = forms::monomial_basis(2, 3);
  auto check_pair = [&](const Vec& x, const Vec& y) {
    auto u = forms::veronese(std::span<const i64>(x), basis);
    auto v = forms::veronese(std::span<const i64>(y), basis);
    auto I = intersect(solution_lattice(u), solution_lattice(v));
    i128 g1 = pair_gram(u, v);
    i64 g = pair_minor_gcd(u, v);
    // det(I)^2 * G^2 == |u|^2 |v|^2 - <u,v>^2 exactly
    CHECK(i128(I.gram_determinant()) * g * g == g1);
  };
  check_pair({2, 3, 5, 2}, {3, 2, 2, 5});
  Rng rng(109);
  for (int trial = 0; trial < 25; ++trial) {
    Vec x{2 + 2 * rng.uniform_int(0, 3), 2 + rng.uniform_int(0, 5), 2, 3};
    Vec y{3, 2, 2 + rng.uniform_int(0, 5), 2};
    if (pair_minor_gcd(x, y) == 0) continue;
    check_pair(x, y);
  }
}

TEST_CASE("point enumeration examples") {
  CHECK(enumerate_points(standard_lattice(2), 1.5).size() == 9);

  auto L = solution_lattice({1, 1});
  auto pts = enumerate_points(L, 3.0);
  std::set<Vec> got(pts.begin(), pts.end());
  std::set<Vec> expected{{0, 0}, {1, -1}, {-1, 1}, {2, -2}, {-2, 2}};
  CHECK(got == expected);
}

TEST_CASE("point enumeration matches a brute-force ambient scan") {
  Rng rng(113);
  for (int trial = 0; trial < 20; ++trial) {
    Mat basis(2, Vec(4));
    do {
      for (auto& row : basis)
        for (auto& v : row) v = rng.uniform_int(-3, 3);
    } while (pair_minor_gcd(basis[0], basis[1]) == 0);
    auto L = lattice_from_basis(basis);
    double X = 4.0;
    auto pts = enumerate_points(L, X);
    std::set<Vec> got(pts.begin(), pts.end());

    std::set<Vec> oracle;
    for (i64 a = -4; a <= 4; ++a)
      for (i64 b = -4; b <= 4; ++b)
        for (i64 c = -4; c <= 4; ++c)
          for (i64 d = -4; d <= 4; ++d) {
            Vec v{a, b, c, d};
            if (norm_sq(v) > 16) continue;
            if (membership(L, v)) oracle.insert(v);
          }
    CHECK(got == oracle);
  }
}

TEST_CASE("successive minima examples") {
  CHECK(standard_lattice(2).minima_squared() == std::vector<i64>{1, 1});
  CHECK(lattice_from_basis({{1, 0}, {0, 5}}).minima_squared() == std::vector<i64>{1, 25});
  CHECK(lattice_from_basis({{1, 1}, {1, -1}}).minima_squared() == std::vector<i64>{2, 2});
}

TEST_CASE("minima agree with an exhaustive short-vector scan") {
  Rng rng(127);
  for (int trial = 0; trial < 30; ++trial) {
    int N = 3 + int(rng.below(2));
    Mat basis(2, Vec(std::size_t(N)));
    do {
      for (auto& row : basis)
        for (auto& v : row) v = rng.uniform_int(-4, 4);
    } while (pair_minor_gcd(basis[0], basis[1]) == 0);
    auto L = lattice_from_basis(basis);
    auto lambda_sq = L.minima_squared();

    // oracle: scan coefficients out to the dual-norm bound (|coeff| <=
    // max-basis-norm^2 / det <= 32 for these inputs)
    i64 best1 = -1, best2 = -1;
    Vec first;
    for (i64 a = -32; a <= 32; ++a)
      for (i64 b = -32; b <= 32; ++b) {
        if (a == 0 && b == 0) continue;
        Vec v(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) v[std::size_t(k)] = a * basis[0][std::size_t(k)] + b * basis[1][std::size_t(k)];
        i64 nsq = norm_sq(v);
        if (best1 < 0 || nsq < best1) {
          best1 = nsq;
          first = v;
        }
      }
    for (i64 a = -32; a <= 32; ++a)
      for (i64 b = -32; b <= 32; ++b) {
        if (a == 0 && b == 0) continue;
        Vec v(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) v[std::size_t(k)] = a * basis[0][std::size_t(k)] + b * basis[1][std::size_t(k)];
        if (pair_minor_gcd(first, v) == 0) continue;  // dependent on the shortest
        i64 nsq = norm_sq(v);
        if (best2 < 0 || nsq < best2) best2 = nsq;
      }
    CHECK(lambda_sq[0] == best1);
    CHECK(lambda_sq[1] == best2);
  }
}

TEST_CASE("reduced basis satisfies the greedy norm bounds and is a basis") {
  Rng rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    int N = 3 + int(rng.below(3));
    int r = 2 + int(rng.below(2));
    Mat basis;
    while (int(basis.size()) < r) {
      Vec v(static_cast<std::size_t>(N));
      for (auto& x : v) x = rng.uniform_int(-4, 4);
      Mat trial_basis = basis;
      trial_basis.push_back(v);
      try {
        lattice_from_basis(trial_basis, N);
        basis = std::move(trial_basis);
      } catch (const std::invalid_argument&) {
      }
    }
    auto L = lattice_from_basis(basis, N);
    auto lambda_sq = L.minima_squared();
    const Mat& reduced = L.reduced_basis();
    auto R = lattice_from_basis(reduced, N);
    CHECK(R.gram_determinant_str() == L.gram_determinant_str());  // index 1
    for (int i = 0; i < r; ++i) {
      double bound = std::pow(1.5, double(i)) * std::sqrt(double(lambda_sq[std::size_t(i)]));
      CHECK(std::sqrt(double(norm_sq(reduced[std::size_t(i)]))) <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("Minkowski sandwich on random lattices") {
  Rng rng(137);
  int done = 0;
  while (done < 100) {
    int N = 3 + int(rng.below(4));  // up to 6
    int r = 2 + int(rng.below(2));  // 2 or 3
    if (r > N) continue;
    Mat basis;
    for (int i = 0; i < r; ++i) {
      Vec v(static_cast<std::size_t>(N));
      for (auto& x : v) x = rng.uniform_int(-3, 3);
      basis.push_back(v);
    }
    IntegerLattice L;
    try {
      L = lattice_from_basis(basis, N);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ++done;
    auto lambda_sq = L.minima_squared();
    i128 prod_sq = 1;
    for (i64 s : lambda_sq) prod_sq *= s;
    i64 det_sq = L.gram_determinant();
    CHECK((long double)det_sq <= (long double)prod_sq * (1 + 1e-9));
    double vr = r == 2 ? M_PI : 4.0 * M_PI / 3.0;
    double mink = std::pow(std::pow(2.0, r) / vr, 2.0);
    CHECK((long double)prod_sq <= mink * (long double)det_sq * (1 + 1e-9));
  }
}

TEST_CASE("enumerated points expand with bounded coefficients in the reduced basis") {
  Rng rng(139);
  for (int trial = 0; trial < 20; ++trial) {
    Mat basis(2, Vec(4));
    do {
      for (auto& row : basis)
        for (auto& v : row) v = rng.uniform_int(-4, 4);
    } while (pair_minor_gcd(basis[0], basis[1]) == 0);
    auto L = lattice_from_basis(basis);
    const Mat& red = L.reduced_basis();
    auto lambda = L.minima();
    double X = 6.0;
    double C = std::pow(1.5, 2.0) * 2.0;  // (3/2)^r * r
    for (auto& p : enumerate_points(L, X)) {
      // solve p = a red[0] + b red[1] exactly via the oracle pivot trick
      std::size_t pi = 0, pj = 1;
      i64 det = 0;
      for (std::size_t i = 0; i < 4 && det == 0; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
          det = red[0][i] * red[1][j] - red[0][j] * red[1][i];
          if (det != 0) { pi = i; pj = j; break; }
        }
      i64 a_num = p[pi] * red[1][pj] - p[pj] * red[1][pi];
      i64 b_num = red[0][pi] * p[pj] - red[0][pj] * p[pi];
      REQUIRE(a_num % det == 0);
      REQUIRE(b_num % det == 0);
      double a = double(a_num / det), b = double(b_num / det);
      CHECK(std::fabs(a) <= C * X / lambda[0] * (1 + 1e-9));
      CHECK(std::fabs(b) <= C * X / lambda[1] * (1 + 1e-9));
    }
  }
}

TEST_CASE("prime point counts") {
  CHECK(prime_point_count(standard_lattice(2), 4.0) == 3);  // (2,2),(2,3),(3,2)
  CHECK(prime_point_count(solution_lattice({1, -1}), 10.0) == 4);  // (p,p), p <= 7
  CHECK(prime_point_count(standard_lattice(3), 3.0) == 0);  // all-prime needs norm >= 2 sqrt(3)
}

TEST_CASE("saturation") {
  auto [L1, idx1] = saturate({{2, 0}});
  CHECK(L1.rank() == 1);
  CHECK(L1.gram_determinant() == 1);
  CHECK(idx1 == 2);

  auto [L2, idx2] = saturate({{1, 0}, {0, 1}});
  CHECK(idx2 == 1);
  CHECK(L2.gram_determinant() == 1);

  // a full-rank span saturates to the whole integer lattice: the generated
  // lattice Z(2,2)+Z(2,-2) has det 8, hence index 8
  auto [L3, idx3] = saturate({{2, 2}, {2, -2}});
  CHECK(idx3 == 8);
  CHECK(L3.gram_determinant() == 1);
  CHECK(membership(L3, {2, 2}));
  CHECK(membership(L3, {2, -2}));
  CHECK(membership(L3, {1, 0}));

  // primitive generators can still span a non-saturated lattice: the
  // even-sum plane lattice has index 2 in the integer points of its plane
  auto [L4, idx4] = saturate({{1, 1, 0}, {1, -1, 0}});
  CHECK(idx4 == 2);
  CHECK(L4.gram_determinant() == 1);
  CHECK(membership(L4, {1, 0, 0}));
  CHECK(membership(L4, {0, 1, 0}));
  CHECK(!membership(L4, {0, 0, 1}));
}

TEST_CASE("gcd of k x k minors") {
  CHECK(gcd_minors({{1, 0, 0}, {0, 2, 0}}) == 2);
  CHECK(gcd_minors({{1, 0, 0}, {0, 1, 0}}) == 1);
  CHECK(gcd_minors({{2, 4, 6}, {4, 8, 12}}) == 0);
  CHECK(gcd_minors({{3, 6}}) == 3);
}

TEST_CASE("minimal sublattice determinants: examples") {
  CHECK(min_sublattice_det({1, 0}, {0, 1}, 2) == doctest::Approx(1.0));
  CHECK(min_sublattice_det({2, 2}, 2) == doctest::Approx(1.0));

  Vec x{3, 5, 7}, y{5, 7, 11};
  double formula = std::sqrt(double((long double)pair_gram(x, y))) / double(pair_minor_gcd(x, y));
  CHECK(min_sublattice_det(x, y, 2) == doctest::Approx(formula).epsilon(1e-12));
  CHECK(min_sublattice_det(x, y, 2) == doctest::Approx(brute_force_pair_det(x, y)).epsilon(1e-12));

  CHECK_THROWS_AS(min_sublattice_det({1, 2}, {2, 4}, 2), std::invalid_argument);
}

TEST_CASE("single-vector d2 matches a wider brute force") {
  // widen the search radius well beyond the frozen-U window and compare
  auto oracle = [](const Vec& x, i64 R) {
    double best = -1;
    std::size_t N = x.size();
    std::vector<i64> y(N, -R);
    for (;;) {
      Vec yy(y.begin(), y.end());
      if (pair_minor_gcd(x, yy) != 0 && norm_sq(yy) <= R * R) {
        i128 g = pair_gram(x, yy);
        double d = std::sqrt(double((long double)g)) / double(pair_minor_gcd(x, yy));
        if (best < 0 || d < best) best = d;
      }
      std::size_t k = 0;
      while (k < N && ++y[k] > R) y[k++] = -R;
      if (k == N) break;
    }
    return best;
  };
  CHECK(min_sublattice_det({2, 2}, 2) == doctest::Approx(oracle({2, 2}, 4)).epsilon(1e-12));
  CHECK(min_sublattice_det({3, 5}, 2) == doctest::Approx(oracle({3, 5}, 6)).epsilon(1e-12));
  CHECK(min_sublattice_det({2, 3, 5}, 2) == doctest::Approx(oracle({2, 3, 5}, 5)).epsilon(1e-12));
}

TEST_CASE("rank-3 minimal determinant on small cases") {
  // in Z^3 the saturation of two independent vectors plus anything hits Z^3
  CHECK(min_sublattice_det({1, 0, 0}, {0, 1, 0}, 3) == doctest::Approx(1.0));
  CHECK(min_sublattice_det({2, 3, 5}, {3, 2, 2}, 3) == doctest::Approx(1.0));
  CHECK(min_sublattice_det({1, 1, 1, 1}, {1, -1, 1, -1}, 3) <= 2.0 + 1e-9);
}

TEST_CASE("orthogonality defect") {
  CHECK(orthogonality_defect({1, 0, 0}, {0, 3, 0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(orthogonality_defect({2, 4}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(orthogonality_defect({1, 2}, {1, 2}), std::invalid_argument);

  // d=2, n=1 spec pair against the 2x2 Gram oracle
  auto basis = forms::monomial_basis(2, 1);
  Vec x{2, 3}, y{3, 2};
  auto u = forms::veronese(std::span<const i64>(x), basis);
  auto v = forms::veronese(std::span<const i64>(y), basis);
  long double g1 = (long double)pair_gram(u, v);
  double expected = std::sqrt(double(norm_sq(u))) * std::sqrt(double(norm_sq(v))) /
                    std::sqrt(double(g1));
  CHECK(veronese_orthogonality_defect(x, y, basis) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(veronese_orthogonality_defect(x, y, basis) >= 1.0);
}

TEST_CASE("sieve loss bounds") {
  auto z2 = sieve_loss_bounds(standard_lattice(2));
  CHECK(z2.lower == doctest::Approx(1.0));
  CHECK(z2.sup_estimate == doctest::Approx(1.0));

  auto L = lattice_from_basis({{2, 0}, {0, 1}});
  auto b = sieve_loss_bounds(L);
  CHECK(b.lower == doctest::Approx(std::exp(1.0)));  // g = 4, exp(2 * 1/2)
  CHECK(b.sup_estimate >= b.lower);
  CHECK(b.sup_estimate == doctest::Approx(std::exp(1.0)));

  auto R = lattice_from_basis({{6, 10}});
  auto rb = sieve_loss_bounds(R);
  CHECK(rb.lower == doctest::Approx(std::exp(0.5)));  // d1 = 2, exp(1 * 1/2)
  CHECK(rb.sup_estimate == doctest::Approx(std::exp(0.5)));
}

TEST_CASE("lattice JSON round trip") {
  auto L = solution_lattice({3, -1, 2});
  auto M = lattice_from_json(to_json(L));
  CHECK(M.ambient_dim() == L.ambient_dim());
  CHECK(M.basis() == L.basis());
}

TEST_CASE("enumeration budget refusal") {
  EnumerationBudget tiny;
  tiny.box_limit = 10;
  CHECK_THROWS_AS(enumerate_points(standard_lattice(3), 50.0, tiny), BudgetExceeded);
}
