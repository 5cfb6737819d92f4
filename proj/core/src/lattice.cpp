#include "primal/lattice.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "primal/arith.hpp"

namespace primal::lattice {

namespace {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;

ZMat to_z(const Mat& m) {
  ZMat z(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) z[i].assign(m[i].begin(), m[i].end());
  return z;
}

i64 narrow(const mpz_class& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("lattice: entry exceeds 64 bits");
  return i64(v.get_si());
}

Mat to_i64(const ZMat& z) {
  Mat m(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    m[i].reserve(z[i].size());
    for (auto& v : z[i]) m[i].push_back(narrow(v));
  }
  return m;
}

struct Elimination {
  ZMat work;               // input matrix after column operations
  ZMat transform_cols;     // transform_cols[c] is column c of the unimodular V
  std::size_t frontier;    // columns >= frontier annihilate every row
};

// Column elimination M -> M V with V unimodular tracked explicitly. After the
// sweep, columns of V beyond the frontier form a basis of {y : M y = 0}.
Elimination column_eliminate(const ZMat& M, std::size_t N) {
  std::size_t rows = M.size();
  Elimination e;
  e.work = M;
  e.transform_cols.assign(N, ZVec(N, 0));
  for (std::size_t c = 0; c < N; ++c) e.transform_cols[c][c] = 1;
  e.frontier = 0;

  for (std::size_t i = 0; i < rows && e.frontier < N; ++i) {
    for (;;) {
      std::size_t pivot = N;
      for (std::size_t c = e.frontier; c < N; ++c) {
        if (e.work[i][c] == 0) continue;
        if (pivot == N ||
            mpz_cmpabs(e.work[i][c].get_mpz_t(), e.work[i][pivot].get_mpz_t()) < 0)
          pivot = c;
      }
      if (pivot == N) break;
      bool clean = true;
      mpz_class q;
      for (std::size_t c = e.frontier; c < N; ++c) {
        if (c == pivot || e.work[i][c] == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), e.work[i][c].get_mpz_t(), e.work[i][pivot].get_mpz_t());
        if (q != 0) {
          for (std::size_t r = 0; r < rows; ++r) e.work[r][c] -= q * e.work[r][pivot];
          for (std::size_t r = 0; r < N; ++r) e.transform_cols[c][r] -= q * e.transform_cols[pivot][r];
        }
        if (e.work[i][c] != 0) clean = false;
      }
      if (clean) {
        if (pivot != e.frontier) {
          for (std::size_t r = 0; r < rows; ++r) std::swap(e.work[r][pivot], e.work[r][e.frontier]);
          std::swap(e.transform_cols[pivot], e.transform_cols[e.frontier]);
        }
        ++e.frontier;
        break;
      }
    }
  }
  return e;
}

// Basis (as rows) of {y in Z^N : M y = 0}.
ZMat integer_kernel(const ZMat& M, std::size_t N) {
  Elimination e = column_eliminate(M, N);
  ZMat kernel;
  kernel.reserve(N - e.frontier);
  for (std::size_t c = e.frontier; c < N; ++c) kernel.push_back(e.transform_cols[c]);
  return kernel;
}

// Row-style reduction: returns a basis of the lattice generated by the rows.
ZMat row_basis(ZMat U) {
  std::size_t m = U.size();
  std::size_t N = m ? U[0].size() : 0;
  std::size_t r = 0;
  mpz_class q;
  for (std::size_t j = 0; j < N && r < m; ++j) {
    for (;;) {
      std::size_t pivot = m;
      for (std::size_t i = r; i < m; ++i) {
        if (U[i][j] == 0) continue;
        if (pivot == m || mpz_cmpabs(U[i][j].get_mpz_t(), U[pivot][j].get_mpz_t()) < 0) pivot = i;
      }
      if (pivot == m) break;
      bool clean = true;
      for (std::size_t i = r; i < m; ++i) {
        if (i == pivot || U[i][j] == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), U[i][j].get_mpz_t(), U[pivot][j].get_mpz_t());
        if (q != 0)
          for (std::size_t k = 0; k < N; ++k) U[i][k] -= q * U[pivot][k];
        if (U[i][j] != 0) clean = false;
      }
      if (clean) {
        std::swap(U[pivot], U[r]);
        ++r;
        break;
      }
    }
  }
  U.resize(r);
  return U;
}

mpz_class bareiss_det(ZMat A) {
  std::size_t k = A.size();
  if (k == 0) return 1;
  mpz_class denom = 1;
  int sign = 1;
  for (std::size_t p = 0; p + 1 < k; ++p) {
    if (A[p][p] == 0) {
      std::size_t swap_row = k;
      for (std::size_t i = p + 1; i < k; ++i)
        if (A[i][p] != 0) { swap_row = i; break; }
      if (swap_row == k) return 0;
      std::swap(A[p], A[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) {
        mpz_class t = A[i][j] * A[p][p] - A[i][p] * A[p][j];
        mpz_divexact(A[i][j].get_mpz_t(), t.get_mpz_t(), denom.get_mpz_t());
      }
      A[i][p] = 0;
    }
    denom = A[p][p];
  }
  return sign * A[k - 1][k - 1];
}

ZMat gram_matrix(const ZMat& basis) {
  std::size_t r = basis.size();
  ZMat G(r, ZVec(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      mpz_class s = 0;
      for (std::size_t k = 0; k < basis[i].size(); ++k) s += basis[i][k] * basis[j][k];
      G[i][j] = s;
      if (j != i) G[j][i] = s;
    }
  return G;
}

mpz_class gram_det(const ZMat& basis) { return bareiss_det(gram_matrix(basis)); }

i64 norm_sq_i64(const Vec& v) {
  i128 s = 0;
  for (i64 x : v) s = checked_add(s, checked_mul(i128(x), i128(x)));
  return narrow_i64(s);
}

Vec canonical_sign(Vec v) {
  for (i64 x : v) {
    if (x > 0) return v;
    if (x < 0) {
      for (auto& e : v) e = -e;
      return v;
    }
  }
  return v;
}

}  // namespace

// ---- IntegerLattice ---------------------------------------------------------

struct IntegerLattice::State {
  Mat basis;
  int ambient = 0;
  std::string gram_str = "1";
  i64 gram_i64 = 1;  // -1 when the exact value exceeds 64 bits
  double det = 1.0;
  mutable std::mutex cache_mutex;
  mutable std::optional<MinimaData> minima_cache;
};

IntegerLattice::IntegerLattice() : s_(std::make_shared<State>()) {}

int IntegerLattice::ambient_dim() const { return s_->ambient; }
int IntegerLattice::rank() const { return int(s_->basis.size()); }
const Mat& IntegerLattice::basis() const { return s_->basis; }
double IntegerLattice::determinant() const { return s_->det; }
const std::string& IntegerLattice::gram_determinant_str() const { return s_->gram_str; }

i64 IntegerLattice::gram_determinant() const {
  if (s_->gram_i64 < 0) throw std::overflow_error("gram determinant exceeds 64 bits");
  return s_->gram_i64;
}

IntegerLattice lattice_from_basis(Mat basis, int ambient) {
  if (ambient < 0) {
    if (basis.empty()) throw std::invalid_argument("lattice_from_basis: ambient dimension unknown");
    ambient = int(basis[0].size());
  }
  for (auto& row : basis)
    if (row.size() != std::size_t(ambient))
      throw std::invalid_argument("lattice_from_basis: ragged basis");
  if (basis.size() > std::size_t(ambient))
    throw std::invalid_argument("lattice_from_basis: more rows than ambient dimension");

  IntegerLattice L;
  auto& st = *L.s_;
  st.ambient = ambient;
  st.basis = std::move(basis);
  mpz_class g = gram_det(to_z(st.basis));
  if (g <= 0 && !st.basis.empty())
    throw std::invalid_argument("lattice_from_basis: basis rows are dependent");
  st.gram_str = g.get_str();
  st.gram_i64 = g.fits_slong_p() ? i64(g.get_si()) : -1;
  st.det = std::sqrt(g.get_d());
  return L;
}

IntegerLattice standard_lattice(int N) {
  if (N < 1) throw std::invalid_argument("standard_lattice: N must be positive");
  Mat basis(std::size_t(N), Vec(std::size_t(N), 0));
  for (int i = 0; i < N; ++i) basis[std::size_t(i)][std::size_t(i)] = 1;
  return lattice_from_basis(std::move(basis), N);
}

IntegerLattice solution_lattice(const Vec& c) {
  if (c.empty() || std::all_of(c.begin(), c.end(), [](i64 x) { return x == 0; }))
    throw std::invalid_argument("solution_lattice: c must be nonzero");
  ZMat M(1);
  M[0].assign(c.begin(), c.end());
  return lattice_from_basis(to_i64(integer_kernel(M, c.size())), int(c.size()));
}

IntegerLattice congruence_lattice(const CongruenceSpec& spec) {
  if (spec.Q < 1) throw std::invalid_argument("congruence_lattice: Q must be >= 1");
  std::size_t N = spec.c.size();
  if (N == 0) throw std::invalid_argument("congruence_lattice: empty c");
  if (std::all_of(spec.c.begin(), spec.c.end(), [](i64 x) { return x == 0; }))
    return standard_lattice(int(N));

  ZMat M(1);
  M[0].assign(spec.c.begin(), spec.c.end());
  Elimination e = column_eliminate(M, N);
  mpz_class g = abs(e.work[0][0]);
  mpz_class Qz = mpz_class(std::to_string(spec.Q));
  mpz_class step = Qz / gcd(Qz, g);

  ZMat basis;
  basis.reserve(N);
  ZVec first = e.transform_cols[0];
  for (auto& v : first) v *= step;
  basis.push_back(first);
  for (std::size_t c2 = 1; c2 < N; ++c2) basis.push_back(e.transform_cols[c2]);
  return lattice_from_basis(to_i64(basis), int(N));
}

IntegerLattice intersect(const IntegerLattice& L1, const IntegerLattice& L2) {
  if (L1.ambient_dim() != L2.ambient_dim())
    throw std::invalid_argument("intersect: ambient dimensions differ");
  int N = L1.ambient_dim();
  std::size_t r1 = L1.basis().size(), r2 = L2.basis().size();
  if (r1 == 0 || r2 == 0) return lattice_from_basis({}, N);

  // y in L1 and L2  <=>  y = u B1 = v B2; the kernel of [B1^T | -B2^T] lists
  // exactly those coefficient pairs (u, v).
  ZMat M(std::size_t(N), ZVec(r1 + r2, 0));
  for (std::size_t j = 0; j < r1; ++j)
    for (int row = 0; row < N; ++row) M[std::size_t(row)][j] = L1.basis()[j][std::size_t(row)];
  for (std::size_t j = 0; j < r2; ++j)
    for (int row = 0; row < N; ++row) M[std::size_t(row)][r1 + j] = -L2.basis()[j][std::size_t(row)];

  ZMat K = integer_kernel(M, r1 + r2);
  ZMat result;
  result.reserve(K.size());
  for (auto& uv : K) {
    ZVec y(std::size_t(N), 0);
    for (std::size_t j = 0; j < r1; ++j)
      for (int k = 0; k < N; ++k) y[std::size_t(k)] += uv[j] * L1.basis()[j][std::size_t(k)];
    result.push_back(std::move(y));
  }
  return lattice_from_basis(to_i64(result), N);
}

bool membership(const IntegerLattice& L, const Vec& v) {
  if (v.size() != std::size_t(L.ambient_dim()))
    throw std::invalid_argument("membership: dimension mismatch");
  std::size_t r = L.basis().size();
  if (r == 0) return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });

  ZMat B = to_z(L.basis());
  ZMat G = gram_matrix(B);
  mpz_class d = bareiss_det(G);
  ZVec rhs(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < v.size(); ++k) rhs[i] += B[i][k] * v[k];

  ZVec coeff(r);
  for (std::size_t i = 0; i < r; ++i) {
    ZMat Gi = G;
    for (std::size_t row = 0; row < r; ++row) Gi[row][i] = rhs[row];
    mpz_class num = bareiss_det(Gi);
    if (!mpz_divisible_p(num.get_mpz_t(), d.get_mpz_t())) return false;
    mpz_divexact(coeff[i].get_mpz_t(), num.get_mpz_t(), d.get_mpz_t());
  }
  // exact reconstruction also rejects vectors outside the span
  for (std::size_t k = 0; k < v.size(); ++k) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < r; ++i) s += coeff[i] * B[i][k];
    if (s != v[k]) return false;
  }
  return true;
}

// ---- point enumeration ------------------------------------------------------

namespace {

struct BallPoint {
  Vec point;
  Vec coeffs;
  i64 norm_sq;
};

// Every x = sum u_j b_j with |x| <= X has |u_j| <= X |b_j*| (dual basis norm),
// so an odometer over that box plus an exact norm filter is complete.
std::vector<BallPoint> points_in_ball(const Mat& basis, double X, const EnumerationBudget& budget,
                                      bool include_origin) {
  std::size_t r = basis.size();
  std::size_t N = r ? basis[0].size() : 0;
  std::vector<BallPoint> out;
  if (include_origin) out.push_back({Vec(N, 0), Vec(r, 0), 0});
  if (r == 0 || X < 0) return out;

  ZMat B = to_z(basis);
  ZMat G = gram_matrix(B);
  mpz_class d = bareiss_det(G);
  std::vector<i64> bound(r);
  double volume = 1;
  for (std::size_t j = 0; j < r; ++j) {
    ZMat minor;
    minor.reserve(r - 1);
    for (std::size_t a = 0; a < r; ++a) {
      if (a == j) continue;
      ZVec row;
      row.reserve(r - 1);
      for (std::size_t b = 0; b < r; ++b)
        if (b != j) row.push_back(G[a][b]);
      minor.push_back(std::move(row));
    }
    mpz_class cof = bareiss_det(minor);
    double dual_norm = std::sqrt(cof.get_d() / d.get_d());
    bound[j] = i64(std::floor(X * dual_norm + 1e-7));
    volume *= 2.0 * double(bound[j]) + 1.0;
  }
  if (volume > budget.box_limit)
    throw BudgetExceeded("lattice enumeration: coefficient box exceeds budget");

  long double limit = (long double)X * (long double)X;
  Vec u(r, 0);
  std::vector<std::vector<i128>> partial(r + 1, std::vector<i128>(N, 0));
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == r) {
      i128 nsq = 0;
      for (std::size_t k = 0; k < N; ++k) nsq += partial[r][k] * partial[r][k];
      if ((long double)nsq > limit) return;
      bool zero = std::all_of(u.begin(), u.end(), [](i64 x) { return x == 0; });
      if (zero) return;  // origin handled by caller
      BallPoint bp;
      bp.coeffs = u;
      bp.norm_sq = narrow_i64(nsq);
      bp.point.resize(N);
      for (std::size_t k = 0; k < N; ++k) bp.point[k] = narrow_i64(partial[r][k]);
      out.push_back(std::move(bp));
      if (out.size() > budget.candidate_limit)
        throw BudgetExceeded("lattice enumeration: candidate limit exceeded");
      return;
    }
    for (i64 c = -bound[depth]; c <= bound[depth]; ++c) {
      u[depth] = c;
      for (std::size_t k = 0; k < N; ++k)
        partial[depth + 1][k] = partial[depth][k] + i128(c) * basis[depth][k];
      self(self, depth + 1);
    }
    u[depth] = 0;
  };
  rec(rec, 0);
  return out;
}

void sort_by_norm_then_lex(std::vector<BallPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const BallPoint& a, const BallPoint& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return a.point < b.point;
  });
}

// gcd of the k x k minors of the coefficient rows (exact, mpz).
mpz_class coeff_minor_gcd(const ZMat& rows) {
  std::size_t k = rows.size();
  std::size_t n = rows[0].size();
  if (k > n) return 0;
  std::vector<std::size_t> pick(k);
  mpz_class g = 0;
  auto rec = [&](auto&& self, std::size_t pos, std::size_t start) -> bool {
    if (pos == k) {
      ZMat sub(k, ZVec(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = rows[i][pick[j]];
      g = gcd(g, bareiss_det(sub));
      return g == 1;  // early out
    }
    for (std::size_t c = start; c + (k - pos - 1) < n; ++c) {
      pick[pos] = c;
      if (self(self, pos + 1, c + 1)) return true;
    }
    return false;
  };
  rec(rec, 0, 0);
  return abs(g);
}

MinimaData compute_minima(const Mat& basis, const EnumerationBudget& budget) {
  MinimaData md;
  std::size_t r = basis.size();
  if (r == 0) return md;

  i64 max_basis_norm_sq = 0;
  for (auto& row : basis) max_basis_norm_sq = std::max(max_basis_norm_sq, norm_sq_i64(row));
  double pool_radius = std::pow(1.5, double(r - 1)) * std::sqrt(double(max_basis_norm_sq)) * (1 + 1e-12);

  auto pool = points_in_ball(basis, pool_radius, budget, false);
  // keep one of each +-v pair, deterministically
  std::vector<BallPoint> canon;
  canon.reserve(pool.size() / 2);
  for (auto& bp : pool) {
    Vec cs = canonical_sign(bp.point);
    if (cs == bp.point) canon.push_back(std::move(bp));
  }
  sort_by_norm_then_lex(canon);

  // successive minima: first vectors of strictly increasing span dimension
  ZMat indep;
  for (auto& bp : canon) {
    if (md.lambda_sq.size() == r) break;
    ZMat trial = indep;
    ZVec z(bp.coeffs.begin(), bp.coeffs.end());
    trial.push_back(z);
    if (row_basis(trial).size() == indep.size() + 1) {
      indep.push_back(std::move(z));
      md.lambda_sq.push_back(bp.norm_sq);
    }
  }
  if (md.lambda_sq.size() != r)
    throw std::logic_error("compute_minima: enumeration missed independent vectors");

  // greedy reduced basis: at each step the shortest vector whose coefficient
  // rows extend the current set to a primitive one (minor gcd 1)
  ZMat chosen;
  for (std::size_t i = 0; i < r; ++i) {
    bool found = false;
    for (auto& bp : canon) {
      ZMat trial = chosen;
      trial.emplace_back(bp.coeffs.begin(), bp.coeffs.end());
      if (coeff_minor_gcd(trial) == 1) {
        chosen = std::move(trial);
        md.greedy.push_back(bp.point);
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("compute_minima: greedy extension failed");
  }
  if (gram_det(to_z(md.greedy)) != gram_det(to_z(basis)))
    throw std::logic_error("compute_minima: greedy basis has index != 1");
  return md;
}

}  // namespace

const std::vector<i64>& IntegerLattice::minima_squared(const EnumerationBudget& budget) const {
  std::lock_guard<std::mutex> lock(s_->cache_mutex);
  if (!s_->minima_cache) s_->minima_cache = compute_minima(s_->basis, budget);
  return s_->minima_cache->lambda_sq;
}

std::vector<double> IntegerLattice::minima(const EnumerationBudget& budget) const {
  std::vector<double> out;
  for (i64 sq : minima_squared(budget)) out.push_back(std::sqrt(double(sq)));
  return out;
}

const Mat& IntegerLattice::reduced_basis(const EnumerationBudget& budget) const {
  std::lock_guard<std::mutex> lock(s_->cache_mutex);
  if (!s_->minima_cache) s_->minima_cache = compute_minima(s_->basis, budget);
  return s_->minima_cache->greedy;
}

std::vector<Vec> enumerate_points(const IntegerLattice& L, double X,
                                  const EnumerationBudget& budget) {
  auto pts = points_in_ball(L.basis(), X, budget, true);
  std::vector<Vec> out;
  out.reserve(pts.size());
  for (auto& bp : pts) out.push_back(std::move(bp.point));
  return out;
}

i64 prime_point_count(const IntegerLattice& L, double X, const EnumerationBudget& budget) {
  i64 count = 0;
  for (auto& pt : points_in_ball(L.basis(), X, budget, false)) {
    bool all_prime = true;
    for (i64 c : pt.point)
      if (!arith::is_prime(c)) { all_prime = false; break; }
    if (all_prime) ++count;
  }
  return count;
}

std::pair<IntegerLattice, i64> saturate(const Mat& vectors) {
  if (vectors.empty()) throw std::invalid_argument("saturate: no vectors");
  std::size_t N = vectors[0].size();
  bool any = false;
  for (auto& v : vectors) {
    if (v.size() != N) throw std::invalid_argument("saturate: ragged input");
    for (i64 x : v) any = any || x != 0;
  }
  if (!any) throw std::invalid_argument("saturate: zero span");

  ZMat Z = to_z(vectors);
  // span-orthogonal constraints, then their kernel: the double kernel is the
  // saturation, and an empty constraint set falls out as the full lattice
  ZMat constraints = integer_kernel(Z, N);
  ZMat sat = integer_kernel(constraints, N);

  mpz_class span_g = gram_det(row_basis(Z));
  mpz_class sat_g = gram_det(sat);
  mpz_class idx_sq;
  mpz_divexact(idx_sq.get_mpz_t(), span_g.get_mpz_t(), sat_g.get_mpz_t());
  mpz_class idx = sqrt(idx_sq);
  if (idx * idx != idx_sq) throw std::logic_error("saturate: index^2 is not a perfect square");
  return {lattice_from_basis(to_i64(sat), int(N)), narrow(idx)};
}

i64 gcd_minors(const Mat& rows) {
  if (rows.empty()) throw std::invalid_argument("gcd_minors: no vectors");
  return narrow(coeff_minor_gcd(to_z(rows)));
}

// ---- minimal-determinant sublattices ----------------------------------------

namespace {

Vec unit_vector(std::size_t N, std::size_t i) {
  Vec e(N, 0);
  e[i] = 1;
  return e;
}

bool independent(const Mat& rows) { return coeff_minor_gcd(to_z(rows)) != 0; }

// Iterate z over the integer box [-m, m]^N with |z| <= radius.
template <class F>
void for_each_in_box(std::size_t N, i64 m, double radius, const EnumerationBudget& budget, F&& f) {
  double volume = std::pow(2.0 * double(m) + 1.0, double(N));
  if (volume > budget.box_limit)
    throw BudgetExceeded("min_sublattice_det: search box exceeds budget");
  long double limit = (long double)radius * radius;
  Vec z(N, 0);
  auto rec = [&](auto&& self, std::size_t depth, i128 norm_sq) -> void {
    if ((long double)norm_sq > limit) return;
    if (depth == N) {
      if (norm_sq > 0) f(z);
      return;
    }
    for (i64 c = -m; c <= m; ++c) {
      z[depth] = c;
      self(self, depth + 1, norm_sq + i128(c) * c);
    }
    z[depth] = 0;
  };
  rec(rec, 0, 0);
}

}  // namespace

double min_sublattice_det(const Vec& x, const Vec& y, int r, const EnumerationBudget& budget) {
  if (r != 2 && r != 3) throw std::invalid_argument("min_sublattice_det: r must be 2 or 3");
  std::size_t N = x.size();
  if (y.size() != N) throw std::invalid_argument("min_sublattice_det: dimension mismatch");
  if (!independent({x, y})) throw std::invalid_argument("min_sublattice_det: dependent pair");

  if (r == 2) return saturate({x, y}).first.determinant();

  if (N < 3) throw std::invalid_argument("min_sublattice_det: rank 3 needs ambient >= 3");
  double best = -1;
  for (std::size_t i = 0; i < N; ++i) {
    Vec e = unit_vector(N, i);
    if (!independent({x, y, e})) continue;
    double d = saturate({x, y, e}).first.determinant();
    if (best < 0 || d < best) best = d;
  }
  if (best < 0) throw std::logic_error("min_sublattice_det: no rank-3 seed found");
  // A minimal rank-3 lattice M contains an out-of-plane vector of norm at
  // most (8/V_3) det(M) / (lambda_1 lambda_2) <= 1.91 det(M), so radius
  // 2 * best is an exhaustive search window.
  double radius = 2.0 * best;
  i64 m = i64(std::floor(radius + 1e-9));
  for_each_in_box(N, m, radius, budget, [&](const Vec& z) {
    if (!independent({x, y, z})) return;
    double d = saturate({x, y, z}).first.determinant();
    if (d < best) best = d;
  });
  return best;
}

double min_sublattice_det(const Vec& x, int r, const EnumerationBudget& budget) {
  if (r != 2 && r != 3) throw std::invalid_argument("min_sublattice_det: r must be 2 or 3");
  std::size_t N = x.size();
  if (std::all_of(x.begin(), x.end(), [](i64 v) { return v == 0; }))
    throw std::invalid_argument("min_sublattice_det: zero vector");

  if (r == 2) {
    if (N < 2) throw std::invalid_argument("min_sublattice_det: rank 2 needs ambient >= 2");
    double best = -1;
    for (std::size_t i = 0; i < N; ++i) {
      Vec e = unit_vector(N, i);
      if (!independent({x, e})) continue;
      double d = saturate({x, e}).first.determinant();
      if (best < 0 || d < best) best = d;
    }
    // If the optimal lattice has lambda_1 = 1 it contains a unit vector and
    // is one of the seeds above; otherwise it holds an independent vector of
    // norm <= (4/pi) det / sqrt(2) < det <= best, inside this box.
    double radius = best;
    i64 m = i64(std::floor(radius + 1e-9));
    for_each_in_box(N, m, radius, budget, [&](const Vec& y) {
      if (!independent({x, y})) return;
      double d = saturate({x, y}).first.determinant();
      if (d < best) best = d;
    });
    return best;
  }

  if (N < 3) throw std::invalid_argument("min_sublattice_det: rank 3 needs ambient >= 3");
  double best = -1;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      Mat seed = {x, unit_vector(N, i), unit_vector(N, j)};
      if (!independent(seed)) continue;
      double d = saturate(seed).first.determinant();
      if (best < 0 || d < best) best = d;
    }
  if (best < 0) throw std::logic_error("min_sublattice_det: no rank-3 seed found");
  double radius = 2.0 * best;
  i64 m = i64(std::floor(radius + 1e-9));
  for_each_in_box(N, m, radius, budget, [&](const Vec& y) {
    if (!independent({x, y})) return;
    for_each_in_box(N, m, radius, budget, [&](const Vec& z) {
      if (!independent({x, y, z})) return;
      double d = saturate({x, y, z}).first.determinant();
      if (d < best) best = d;
    });
  });
  return best;
}

double orthogonality_defect(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("orthogonality_defect: dimension mismatch");
  i128 nu = 0, nv = 0, dot = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu = checked_add(nu, checked_mul(i128(u[i]), i128(u[i])));
    nv = checked_add(nv, checked_mul(i128(v[i]), i128(v[i])));
    dot = checked_add(dot, checked_mul(i128(u[i]), i128(v[i])));
  }
  i128 gram = checked_mul(nu, nv) - checked_mul(dot, dot);
  if (gram == 0) throw std::invalid_argument("orthogonality_defect: dependent vectors");
  return std::sqrt(double((long double)nu * (long double)nv / (long double)gram));
}

double veronese_orthogonality_defect(const Vec& x, const Vec& y,
                                     const forms::MonomialBasis& basis) {
  return orthogonality_defect(forms::veronese(std::span<const i64>(x), basis),
                              forms::veronese(std::span<const i64>(y), basis));
}

SieveLossBounds sieve_loss_bounds(const IntegerLattice& L, const EnumerationBudget& budget) {
  std::size_t r = std::size_t(L.rank());
  SieveLossBounds out;
  if (r == 0) return out;

  const auto& lambda_sq = L.minima_squared(budget);
  const Mat& greedy = L.reduced_basis(budget);

  std::vector<i64> zeros(r, 0);
  Extended lower = arith::sieve_loss_factor(greedy, zeros);
  out.lower = lower.value;  // basis rows are nonzero and independent, so finite

  // pool for the frozen-constant sup: |v_j| <= 2 (3/2)^(j-1) lambda_j
  std::vector<double> slot_bound_sq(r);
  for (std::size_t j = 0; j < r; ++j) {
    double factor = 2.0 * std::pow(1.5, double(j));
    slot_bound_sq[j] = factor * factor * double(lambda_sq[j]);
  }
  double pool_radius = std::sqrt(slot_bound_sq[r - 1]) * (1 + 1e-12);
  auto pool = points_in_ball(L.basis(), pool_radius, budget, false);
  std::vector<BallPoint> canon;
  for (auto& bp : pool) {
    Vec cs = canonical_sign(bp.point);
    if (cs == bp.point) canon.push_back(std::move(bp));
  }
  sort_by_norm_then_lex(canon);

  if (canon.size() < r) throw std::logic_error("sieve_loss_bounds: pool misses a basis");
  double combos = 1;
  for (std::size_t j = 0; j < r; ++j) combos *= (double(canon.size()) - double(j)) / double(j + 1);
  if (combos > double(budget.candidate_limit))
    throw BudgetExceeded("sieve_loss_bounds: too many candidate bases");

  out.sup_estimate = out.lower;
  std::vector<std::size_t> pick(r);
  std::vector<i64> zvec(r, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t start) -> void {
    if (pos == r) {
      ZMat coeff(r);
      for (std::size_t i = 0; i < r; ++i)
        coeff[i].assign(canon[pick[i]].coeffs.begin(), canon[pick[i]].coeffs.end());
      mpz_class d = bareiss_det(coeff);
      if (d != 1 && d != -1) return;  // not a basis of L
      Mat rows(r);
      for (std::size_t i = 0; i < r; ++i) rows[i] = canon[pick[i]].point;
      Extended c = arith::sieve_loss_factor(rows, zvec);
      if (!c.infinite && c.value > out.sup_estimate) out.sup_estimate = c.value;
      return;
    }
    for (std::size_t i = start; i < canon.size(); ++i) {
      // combinations are scanned in ascending norm order, so slot `pos`
      // receives the pos-th smallest norm of the candidate set
      if (double(canon[i].norm_sq) > slot_bound_sq[pos] * (1 + 1e-12)) break;
      pick[pos] = i;
      self(self, pos + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

std::string to_json(const IntegerLattice& L) {
  nlohmann::ordered_json j;
  j["ambient_dim"] = L.ambient_dim();
  j["basis"] = L.basis();
  return j.dump();
}

IntegerLattice lattice_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  return lattice_from_basis(j.at("basis").get<Mat>(), j.at("ambient_dim").get<int>());
}

}  // namespace primal::lattice
