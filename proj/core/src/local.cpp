#include "primal/local.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primal::local {

using forms::Form;
using forms::MonomialBasis;

// ---- residue arithmetic helpers ---------------------------------------------

namespace {

u64 pow_u64_checked(u64 base, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (u64(1) << 62) / base) throw std::invalid_argument("modulus p^r exceeds 2^62");
    r *= base;
  }
  return r;
}

u64 mod_of(i64 a, u64 m) {
  i64 r = a % i64(m);
  return r < 0 ? u64(r + i64(m)) : u64(r);
}

u64 mod_mul(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 mod_pow(u64 base, int e, u64 m) {
  u64 r = 1 % m;
  for (int i = 0; i < e; ++i) r = mod_mul(r, base, m);
  return r;
}

// f(x) mod m for residue vectors
u64 eval_mod(const Form& f, std::span<const u64> x, u64 m) {
  u64 acc = 0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    u64 term = mod_of(f.coeffs[i], m);
    if (term == 0) continue;
    for (std::size_t v = 0; v < x.size(); ++v) {
      int e = f.basis.exponents[i][v];
      if (e) term = mod_mul(term, mod_pow(x[v] % m, e, m), m);
    }
    acc = (acc + term) % m;
  }
  return acc;
}

std::vector<u64> gradient_mod(const Form& f, std::span<const u64> x, u64 m) {
  std::vector<u64> grad(x.size(), 0);
  std::vector<int> expo;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] == 0) continue;
    for (std::size_t v = 0; v < x.size(); ++v) {
      int e = f.basis.exponents[i][v];
      if (e == 0) continue;
      u64 term = mod_mul(mod_of(f.coeffs[i], m), u64(e) % m, m);
      expo = f.basis.exponents[i];
      expo[v] -= 1;
      for (std::size_t w = 0; w < x.size(); ++w)
        if (expo[w]) term = mod_mul(term, mod_pow(x[w] % m, expo[w], m), m);
      grad[v] = (grad[v] + term) % m;
    }
  }
  return grad;
}

int valuation_capped(u64 v, i64 p, int cap) {
  if (v == 0) return cap;
  int e = 0;
  while (e < cap && v % u64(p) == 0) { v /= u64(p); ++e; }
  return e;
}

// largest e <= cap with p^e dividing every entry
int vector_valuation(std::span<const u64> vec, i64 p, int cap) {
  int e = cap;
  for (u64 v : vec) {
    e = std::min(e, valuation_capped(v, p, cap));
    if (e == 0) break;
  }
  return e;
}

u64 coeff_stream_seed(const Form& f, i64 p, u64 seed) {
  u64 h = splitmix64(seed ^ (u64(p) * 0x9e3779b97f4a7c15ULL));
  for (i64 c : f.coeffs) h = splitmix64(h ^ u64(c));
  return h;
}

}  // namespace

// ---- p-adic unit solubility ---------------------------------------------------

PadicVerdict unit_solubility(const Form& f, i64 p, const PadicConfig& cfg) {
  if (p < 2 || !arith::is_prime(p)) throw std::invalid_argument("unit_solubility: p must be prime");
  int n = f.basis.n;
  int r_max = cfg.r_max > 0 ? cfg.r_max : 2 * f.degree() + 3;
  pow_u64_checked(u64(p), r_max);  // reject moduli beyond 2^62 up front

  PadicVerdict out;
  out.p = p;

  // witness fast path: for large p a smooth unit zero is found quickly by a
  // deterministic random scan, avoiding the full level-1 sweep
  double level1_candidates = std::pow(double(p - 1), double(n));
  if (level1_candidates > 4096) {
    Rng rng(coeff_stream_seed(f, p, cfg.seed));
    u64 tries = std::min<u64>(u64(64) * u64(p), 200'000);
    std::vector<u64> x(std::size_t(n) + 1, 1);
    for (u64 t = 0; t < tries; ++t) {
      for (int i = 1; i <= n; ++i) x[std::size_t(i)] = 1 + rng.below(u64(p - 1));
      if (eval_mod(f, x, u64(p)) != 0) continue;
      auto grad = gradient_mod(f, x, u64(p));
      if (vector_valuation(grad, p, 1) == 0) {
        out.status = PadicVerdict::Status::soluble;
        out.witness = PadicWitness{x, 1, 0};
        out.level = 1;
        return out;
      }
    }
  }

  if (level1_candidates > double(cfg.level_budget)) {
    out.status = PadicVerdict::Status::undecided;
    out.budget_hit = true;
    return out;
  }

  // level 1: exhaustive sweep over unit vectors with x0 normalized to 1
  std::vector<std::vector<u64>> frontier;
  {
    std::vector<u64> x(std::size_t(n) + 1, 1);
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos > n) {
        if (eval_mod(f, x, u64(p)) == 0) frontier.push_back(x);
        return;
      }
      for (u64 v = 1; v < u64(p); ++v) {
        x[std::size_t(pos)] = v;
        self(self, pos + 1);
      }
    };
    rec(rec, 1);
  }

  for (int level = 1; level <= r_max; ++level) {
    if (frontier.empty()) {
      out.status = PadicVerdict::Status::insoluble;
      out.level = level;
      return out;
    }
    if (frontier.size() > cfg.frontier_budget) {
      out.status = PadicVerdict::Status::undecided;
      out.budget_hit = true;
      out.level = level;
      return out;
    }
    u64 m = pow_u64_checked(u64(p), level);
    for (auto& x : frontier) {
      auto grad = gradient_mod(f, x, m);
      int e = vector_valuation(grad, p, level);
      if (2 * e + 1 <= level) {
        out.status = PadicVerdict::Status::soluble;
        out.witness = PadicWitness{x, level, e};
        out.level = level;
        return out;
      }
    }
    if (level == r_max) break;

    // expand to the next level; the first-order expansion is exact mod p^(l+1)
    u64 m_next = m * u64(p);
    std::vector<std::vector<u64>> next;
    for (auto& x : frontier) {
      u64 fv = eval_mod(f, x, m_next);
      // fv is divisible by p^level; the lift condition on t is linear:
      // c0 + <grad, t> = 0 (mod p) with t0 = 0
      u64 c0 = (fv / m) % u64(p);
      auto grad = gradient_mod(f, x, u64(p));
      bool grad_zero = true;
      for (int i = 1; i <= n; ++i) grad_zero = grad_zero && grad[std::size_t(i)] == 0;
      if (grad_zero) {
        if (c0 != 0) continue;  // no lifts of this node
        double children = std::pow(double(p), double(n));
        if (double(next.size()) + children > double(cfg.frontier_budget)) {
          out.status = PadicVerdict::Status::undecided;
          out.budget_hit = true;
          out.level = level;
          return out;
        }
        std::vector<u64> child = x;
        auto rec = [&](auto&& self, int pos) -> void {
          if (pos > n) { next.push_back(child); return; }
          for (u64 t = 0; t < u64(p); ++t) {
            child[std::size_t(pos)] = x[std::size_t(pos)] + m * t;
            self(self, pos + 1);
          }
          child[std::size_t(pos)] = x[std::size_t(pos)];
        };
        rec(rec, 1);
      } else {
        // pick a unit partial derivative and solve for its t coordinate
        int pivot = 1;
        while (grad[std::size_t(pivot)] == 0) ++pivot;
        u64 inv = mod_pow(grad[std::size_t(pivot)], int(p - 2), u64(p));
        double children = std::pow(double(p), double(n - 1));
        if (double(next.size()) + children > double(cfg.frontier_budget)) {
          out.status = PadicVerdict::Status::undecided;
          out.budget_hit = true;
          out.level = level;
          return out;
        }
        std::vector<u64> t(std::size_t(n) + 1, 0);
        std::vector<u64> child = x;
        auto rec = [&](auto&& self, int pos) -> void {
          if (pos > n) {
            u64 s = c0;
            for (int i = 1; i <= n; ++i)
              if (i != pivot) s = (s + mod_mul(grad[std::size_t(i)], t[std::size_t(i)], u64(p))) % u64(p);
            t[std::size_t(pivot)] = mod_mul((u64(p) - s) % u64(p), inv, u64(p));
            for (int i = 1; i <= n; ++i) child[std::size_t(i)] = x[std::size_t(i)] + m * t[std::size_t(i)];
            next.push_back(child);
            return;
          }
          if (pos == pivot) { self(self, pos + 1); return; }
          for (u64 v = 0; v < u64(p); ++v) {
            t[std::size_t(pos)] = v;
            self(self, pos + 1);
          }
          t[std::size_t(pos)] = 0;
        };
        rec(rec, 1);
      }
    }
    frontier = std::move(next);
  }

  out.status = PadicVerdict::Status::undecided;
  out.level = r_max;
  return out;
}

// ---- non-Archimedean factor ----------------------------------------------------

ResidueDensityTable::ResidueDensityTable(u64 Q, const MonomialBasis& basis, double budget)
    : Q_(Q), N_(basis.size()) {
  if (Q < 1) throw std::invalid_argument("residue density: Q must be >= 1");
  std::vector<u64> units;
  for (u64 u = 0; u < Q; ++u)
    if (std::gcd(u, Q) == 1) units.push_back(u);
  if (Q == 1) units = {0};
  std::size_t vars = std::size_t(basis.n) + 1;
  double tuples = std::pow(double(units.size()), double(vars));
  if (tuples > budget) throw BudgetExceeded("residue density: phi(Q)^(n+1) exceeds budget");

  std::vector<u64> b(vars, 0);
  std::vector<u64> nu(N_);
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == vars) {
      for (std::size_t i = 0; i < N_; ++i) {
        u64 term = 1 % Q;
        for (std::size_t v = 0; v < vars; ++v) {
          int e = basis.exponents[i][v];
          if (e) term = mod_mul(term, mod_pow(b[v], e, Q), Q);
        }
        nu[i] = term;
      }
      tables_.push_back(nu);
      return;
    }
    for (u64 u : units) {
      b[pos] = u;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
}

Rational ResidueDensityTable::density(std::span<const i64> a) const {
  if (a.size() != N_) throw std::invalid_argument("residue density: coefficient length mismatch");
  std::vector<u64> am(N_);
  for (std::size_t i = 0; i < N_; ++i) am[i] = mod_of(a[i], Q_);
  u64 count = 0;
  if (Q_ < (u64(1) << 27) && N_ < 64) {
    // products stay below 2^54 and the raw sum below 2^60: one reduction
    for (auto& nu : tables_) {
      u64 dot = 0;
      for (std::size_t i = 0; i < N_; ++i) dot += am[i] * nu[i];
      if (dot % Q_ == 0) ++count;
    }
  } else {
    for (auto& nu : tables_) {
      u64 dot = 0;
      for (std::size_t i = 0; i < N_; ++i)
        if (am[i] && nu[i]) dot = (dot + mod_mul(am[i], nu[i], Q_)) % Q_;
      if (dot % Q_ == 0) ++count;
    }
  }
  // sigma' = Q * count / phi(Q)^(n+1); tables_.size() is exactly phi(Q)^(n+1)
  return Rational::from_parts(i128(Q_) * count, i128(tables_.size()));
}

Rational residue_density(std::span<const i64> a, u64 Q, const MonomialBasis& basis, double budget) {
  return ResidueDensityTable(Q, basis, budget).density(a);
}

u64 solution_residue_count(std::span<const i64> b, i64 p, int r, const MonomialBasis& basis,
                           double budget) {
  if (b.size() != std::size_t(basis.n) + 1)
    throw std::invalid_argument("solution_residue_count: b has wrong dimension");
  u64 m = pow_u64_checked(u64(p), r);
  std::size_t N = basis.size();
  for (i64 x : b)
    if (std::gcd(mod_of(x, u64(p)), u64(p)) != 1)
      throw std::invalid_argument("solution_residue_count: b must be a unit vector");

  std::vector<u64> nu(N);
  for (std::size_t i = 0; i < N; ++i) {
    u64 term = 1 % m;
    for (std::size_t v = 0; v < b.size(); ++v) {
      int e = basis.exponents[i][v];
      if (e) term = mod_mul(term, mod_pow(mod_of(b[v], m), e, m), m);
    }
    nu[i] = term;
  }
  bool unit_entry = false;
  for (u64 v : nu) unit_entry = unit_entry || v % u64(p) != 0;
  if (!unit_entry) throw std::invalid_argument("solution_residue_count: nu(b) has no unit entry");

  if (std::pow(double(m), double(N)) > budget)
    throw BudgetExceeded("solution_residue_count: residue space exceeds budget");

  // odometer over a in (Z/m)^N. A rollover m-1 -> 0 shifts the dot by
  // -(m-1) nu_k = +nu_k (mod m), the same adjustment as an increment, so
  // every move costs one modular addition; likewise for the mod-p residues.
  std::vector<u64> a(N, 0), pmod(N, 0);
  u64 dot = 0;
  i64 divisible = i64(N);  // all coordinates start at 0
  u64 count = 0;
  const u64 up = u64(p);
  for (;;) {
    if (dot == 0 && divisible < i64(N)) ++count;
    std::size_t k = 0;
    for (; k < N; ++k) {
      dot += nu[k];
      if (dot >= m) dot -= m;
      bool was_zero = pmod[k] == 0;
      if (++pmod[k] == up) pmod[k] = 0;
      if ((pmod[k] == 0) != was_zero) divisible += pmod[k] == 0 ? 1 : -1;
      if (a[k] + 1 < m) {
        ++a[k];
        break;
      }
      a[k] = 0;  // carry
    }
    if (k == N) break;
  }
  return count;
}

Rational residue_density_mean(i64 p, int r, const MonomialBasis& basis, double budget) {
  u64 m = pow_u64_checked(u64(p), r);
  std::size_t N = basis.size();
  if (std::pow(double(m), double(N)) > budget)
    throw BudgetExceeded("residue_density_mean: residue space exceeds budget");
  ResidueDensityTable table(m, basis, budget);

  Rational sum(0);
  u64 count = 0;
  std::vector<i64> a(N, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t divisible) -> void {
    if (pos == N) {
      if (divisible == N) return;  // excluded: all coordinates divisible by p
      sum = sum + table.density(a);
      ++count;
      return;
    }
    for (u64 v = 0; v < m; ++v) {
      a[pos] = i64(v);
      self(self, pos + 1, divisible + (v % u64(p) == 0 ? 1 : 0));
    }
  };
  rec(rec, 0, 0);
  return sum / Rational(i64(count));
}

// ---- Archimedean factor ----------------------------------------------------------

McEstimate archimedean_density(const Form& f, double gamma, const McConfig& mc) {
  if (!(gamma > 0)) throw std::invalid_argument("archimedean_density: gamma must be positive");
  if (mc.samples < 1) throw std::invalid_argument("archimedean_density: need samples >= 1");
  std::size_t vars = std::size_t(f.basis.n) + 1;
  double norm_a_sq = 0;
  for (i64 c : f.coeffs) norm_a_sq += double(c) * double(c);
  double four_gamma_sq = 4.0 * gamma * gamma;

  const u64 chunk = 1 << 14;
  u64 chunks = (mc.samples + chunk - 1) / chunk;
  std::vector<u64> hits(chunks, 0);
  Rng root(mc.seed);
  parallel_for(chunks, [&](std::size_t ci) {
    Rng rng = root.derived(ci);
    u64 lo = u64(ci) * chunk;
    u64 hi = std::min(mc.samples, lo + chunk);
    std::vector<double> u(vars);
    u64 h = 0;
    for (u64 s = lo; s < hi; ++s) {
      double norm_u_sq = 0;
      for (auto& x : u) {
        x = rng.uniform();
        norm_u_sq += x * x;
      }
      if (norm_u_sq > 1.0) continue;
      auto nu = forms::veronese(std::span<const double>(u), f.basis);
      double dot = 0, norm_nu_sq = 0;
      for (std::size_t i = 0; i < nu.size(); ++i) {
        dot += double(f.coeffs[i]) * nu[i];
        norm_nu_sq += nu[i] * nu[i];
      }
      if (four_gamma_sq * dot * dot <= norm_a_sq * norm_nu_sq) ++h;
    }
    hits[ci] = h;
  });

  u64 total_hits = 0;
  for (u64 h : hits) total_hits += h;
  double p_hat = double(total_hits) / double(mc.samples);
  McEstimate est;
  est.samples = mc.samples;
  est.hits = total_hits;
  est.estimate = gamma * p_hat;
  est.std_error = gamma * std::sqrt(p_hat * (1.0 - p_hat) / double(mc.samples));
  return est;
}

McEstimate archimedean_factor(const Form& f, double B, const McConfig& mc) {
  return archimedean_density(f, arith::scale_params(B).alpha, mc);
}

Rational nonarchimedean_factor(const Form& f, double B, double budget) {
  return residue_density(f.coeffs, arith::scale_params(B).W, f.basis, budget);
}

std::set<int> gradient_valuation_classes(std::span<const i64> a, i64 p, int r,
                                         const MonomialBasis& basis, double budget) {
  u64 m = pow_u64_checked(u64(p), r);
  Form f = Form::make(basis, std::vector<i64>(a.begin(), a.end()));
  int n = basis.n;
  std::vector<u64> units;
  for (u64 u = 0; u < m; ++u)
    if (u % u64(p) != 0) units.push_back(u);
  if (std::pow(double(units.size()), double(n)) > budget)
    throw BudgetExceeded("gradient_valuation_classes: unit space exceeds budget");

  std::set<int> classes;
  std::vector<u64> x(std::size_t(n) + 1, 1);  // first coordinate normalized to 1
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos > n) {
      if (eval_mod(f, x, m) == 0)
        classes.insert(vector_valuation(gradient_mod(f, x, m), p, r));
      return;
    }
    for (u64 u : units) {
      x[std::size_t(pos)] = u;
      self(self, pos + 1);
    }
  };
  rec(rec, 1);
  return classes;
}

// ---- real place -------------------------------------------------------------------

namespace {

double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
  double n = norm2(v);
  for (auto& x : v) x /= n;
}

// uniform direction on the closed positive cap of the unit sphere
std::vector<double> sample_cap(std::size_t vars, Rng& rng) {
  std::vector<double> u(vars);
  for (std::size_t i = 0; i < vars; ++i) {
    // |gaussian| via Box-Muller
    double a = rng.uniform(), b = rng.uniform();
    double g = std::sqrt(-2.0 * std::log(1.0 - a)) * std::cos(6.283185307179586 * b);
    u[i] = std::fabs(g);
  }
  normalize(u);
  return u;
}

struct RealContext {
  std::span<const double> coeffs;
  const MonomialBasis* basis;
  double value(std::span<const double> x) const {
    return forms::evaluate_real_coeffs(coeffs, *basis, x);
  }
};

// descent on |f| over the closed cap from a starting point
bool minimize_on_cap(const RealContext& ctx, std::vector<double> u, double tol,
                     std::vector<double>& out, double& out_val) {
  std::vector<double> grad(u.size());
  double fu = ctx.value(u);
  for (int iter = 0; iter < 400 && std::fabs(fu) > tol; ++iter) {
    // gradient of f at u
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<int> expo;
    for (std::size_t i = 0; i < ctx.coeffs.size(); ++i) {
      if (ctx.coeffs[i] == 0) continue;
      for (std::size_t v = 0; v < u.size(); ++v) {
        int e = ctx.basis->exponents[i][v];
        if (e == 0) continue;
        expo = ctx.basis->exponents[i];
        expo[v] -= 1;
        double mono = 1;
        for (std::size_t w = 0; w < u.size(); ++w)
          for (int k = 0; k < expo[w]; ++k) mono *= u[w];
        grad[v] += ctx.coeffs[i] * e * mono;
      }
    }
    // tangent direction of steepest descent for |f|
    double dot_gu = 0;
    for (std::size_t i = 0; i < u.size(); ++i) dot_gu += grad[i] * u[i];
    std::vector<double> dir(u.size());
    double dir_norm = 0;
    double sign = fu > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      dir[i] = -sign * (grad[i] - dot_gu * u[i]);
      dir_norm += dir[i] * dir[i];
    }
    dir_norm = std::sqrt(dir_norm);
    if (dir_norm < 1e-14) break;
    double step = 0.5;
    bool improved = false;
    std::vector<double> cand(u.size());
    for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
      for (std::size_t i = 0; i < u.size(); ++i)
        cand[i] = std::max(0.0, u[i] + step * dir[i] / dir_norm);
      double cn = norm2(cand);
      if (cn < 1e-12) continue;
      for (auto& x : cand) x /= cn;
      double fc = ctx.value(cand);
      if (std::fabs(fc) < std::fabs(fu)) {
        u = cand;
        fu = fc;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  out = std::move(u);
  out_val = fu;
  return std::fabs(fu) <= tol;
}

}  // namespace

RealVerdict real_positive_soluble_coeffs(std::span<const double> coeffs,
                                         const MonomialBasis& basis, const RealConfig& cfg) {
  std::size_t vars = std::size_t(basis.n) + 1;
  RealContext ctx{coeffs, &basis};
  RealVerdict out;

  double l1 = 0;
  for (double c : coeffs) l1 += std::fabs(c);
  if (l1 == 0) throw std::invalid_argument("real_positive_soluble: zero form");
  double lipschitz = double(basis.d) * l1;
  out.lipschitz = lipschitz;

  auto accept_witness = [&](std::vector<double> w, double value) -> bool {
    if (std::fabs(value) > cfg.tol) return false;
    for (double x : w)
      if (!(x > 0)) return false;
    out.status = RealVerdict::Status::soluble;
    out.witness = RealWitness{std::move(w), value};
    return true;
  };

  // 1. randomized sign search on the open cap
  Rng rng(cfg.seed);
  std::vector<double> best_pos, best_neg, best_abs;
  double pos_val = 0, neg_val = 0, abs_val = 0;
  for (int s = 0; s < cfg.samples; ++s) {
    auto u = sample_cap(vars, rng);
    double v = ctx.value(u);
    if (std::fabs(v) <= cfg.tol) {
      if (accept_witness(u, v)) return out;
    }
    if (v > 0 && (best_pos.empty() || v < pos_val)) { best_pos = u; pos_val = v; }
    if (v < 0 && (best_neg.empty() || v > neg_val)) { best_neg = u; neg_val = v; }
    if (best_abs.empty() || std::fabs(v) < std::fabs(abs_val)) { best_abs = u; abs_val = v; }
  }

  if (!best_pos.empty() && !best_neg.empty()) {
    // bisect along the positive chord; convex combinations of strictly
    // positive unit vectors stay strictly positive after normalization
    std::vector<double> lo = best_neg, hi = best_pos;
    std::vector<double> mid(vars);
    for (int it = 0; it < 200; ++it) {
      for (std::size_t i = 0; i < vars; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
      normalize(mid);
      double v = ctx.value(mid);
      if (std::fabs(v) <= cfg.tol) break;
      (v > 0 ? hi : lo) = mid;
    }
    double v = ctx.value(mid);
    if (accept_witness(mid, v)) return out;
  }

  // 2. local refinement from the flattest sample
  if (!best_abs.empty()) {
    std::vector<double> w;
    double v;
    if (minimize_on_cap(ctx, best_abs, cfg.tol, w, v) && accept_witness(w, v)) return out;
  }

  // 3. mesh certification over the closed cap
  std::size_t spent = 0;
  double h = cfg.mesh_initial;
  for (int round = 0; round < cfg.mesh_refinements; ++round, h *= 0.5) {
    double delta = h / std::sqrt(double(vars));
    std::size_t steps = std::size_t(std::ceil(1.0 / delta)) + 1;
    double mesh_points = double(vars) * std::pow(double(steps), double(vars - 1));
    if (double(spent) + mesh_points > double(cfg.mesh_budget)) break;

    // grid each cube face {v_face = 1, v_j in [0,1]}; projecting to the
    // sphere covers the closed cap with radius <= delta * sqrt(vars) = h
    double margin = -1;
    std::vector<double> argmin;
    std::vector<double> v(vars);
    for (std::size_t face = 0; face < vars; ++face) {
      std::fill(v.begin(), v.end(), 0.0);
      v[face] = 1.0;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < vars; ++i)
        if (i != face) idx.push_back(i);
      std::vector<std::size_t> c(idx.size(), 0);
      for (;;) {
        for (std::size_t i = 0; i < idx.size(); ++i) v[idx[i]] = std::min(1.0, double(c[i]) * delta);
        std::vector<double> pt = v;
        normalize(pt);
        double val = std::fabs(ctx.value(pt));
        ++spent;
        if (margin < 0 || val < margin) { margin = val; argmin = pt; }
        std::size_t k = 0;
        while (k < c.size()) {
          if (++c[k] < steps) break;
          c[k] = 0;
          ++k;
        }
        if (k == c.size()) break;
      }
    }

    if (margin > lipschitz * h) {
      out.status = RealVerdict::Status::insoluble;
      out.mesh_size = h;
      out.margin = margin;
      return out;
    }
    // the mesh argmin is a promising new start for the witness search
    if (!argmin.empty()) {
      std::vector<double> w;
      double val;
      if (minimize_on_cap(ctx, argmin, cfg.tol, w, val) && accept_witness(w, val)) return out;
    }
  }

  out.status = RealVerdict::Status::unknown;
  return out;
}

RealVerdict real_positive_soluble(const Form& f, const RealConfig& cfg) {
  std::vector<double> coeffs(f.coeffs.begin(), f.coeffs.end());
  return real_positive_soluble_coeffs(coeffs, f.basis, cfg);
}

// ---- assembled profile ---------------------------------------------------------------

LocalProfile classify(const Form& f, const ClassifyConfig& cfg) {
  LocalProfile prof;
  prof.p_max = cfg.p_max;
  prof.r_max = cfg.padic.r_max > 0 ? cfg.padic.r_max : 2 * f.degree() + 3;

  prof.real = real_positive_soluble(f, cfg.real);
  if (prof.real.status == RealVerdict::Status::insoluble) {
    prof.overall = LocalProfile::Overall::insoluble;
    prof.obstruction = "real";
    return prof;
  }

  bool undecided = prof.real.status == RealVerdict::Status::unknown;
  for (i64 p : arith::primes_up_to(double(cfg.p_max))) {
    PadicVerdict v = unit_solubility(f, p, cfg.padic);
    prof.padic.emplace(p, v);
    if (v.status == PadicVerdict::Status::insoluble) {
      prof.overall = LocalProfile::Overall::insoluble;
      prof.obstruction = "p=" + std::to_string(p);
      return prof;
    }
    undecided = undecided || v.status == PadicVerdict::Status::undecided;
  }
  prof.overall = undecided ? LocalProfile::Overall::undetermined : LocalProfile::Overall::soluble;
  return prof;
}

DensityEstimate estimate_density(int d, int n, double A, u64 samples, const ClassifyConfig& cfg,
                                 u64 seed) {
  if (samples < 1) throw std::invalid_argument("estimate_density: need samples >= 1");
  auto basis = forms::monomial_basis(d, n);
  int N = int(basis.size());
  std::vector<int> status(samples, 0);
  Rng root(seed);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = root.derived(i);
    auto coeffs = forms::sample_primitive(N, A, rng);
    auto f = Form::make(basis, std::move(coeffs));
    switch (classify(f, cfg).overall) {
      case LocalProfile::Overall::soluble: status[i] = 1; break;
      case LocalProfile::Overall::insoluble: status[i] = -1; break;
      default: status[i] = 0;
    }
  });

  DensityEstimate est;
  est.samples = samples;
  for (int s : status) {
    if (s == 1) ++est.soluble;
    else if (s == -1) ++est.insoluble;
    else ++est.undetermined;
  }
  est.rho_hat = double(est.soluble) / double(samples);
  est.std_error = std::sqrt(est.rho_hat * (1.0 - est.rho_hat) / double(samples));
  est.undecided_fraction = double(est.undetermined) / double(samples);
  return est;
}

ObstructionEstimate estimate_obstruction(i64 p, int d, int n, u64 samples, int r_max, u64 seed) {
  if (samples < 1) throw std::invalid_argument("estimate_obstruction: need samples >= 1");
  auto basis = forms::monomial_basis(d, n);
  std::size_t N = basis.size();
  u64 m = pow_u64_checked(u64(p), r_max);
  PadicConfig pcfg;
  pcfg.r_max = r_max;

  std::vector<int> status(samples, 0);
  Rng root(seed);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = root.derived(i);
    std::vector<i64> coeffs(N);
    for (;;) {
      bool nonzero = false;
      for (auto& c : coeffs) {
        u64 v = rng.below(m);
        // centered representative of the residue class
        c = v > m / 2 ? i64(v) - i64(m) : i64(v);
        nonzero = nonzero || c != 0;
      }
      if (nonzero) break;
    }
    auto verdict = unit_solubility(Form::make(basis, std::move(coeffs)), p, pcfg);
    status[i] = verdict.status == PadicVerdict::Status::insoluble  ? -1
                : verdict.status == PadicVerdict::Status::soluble ? 1
                                                                  : 0;
  });

  ObstructionEstimate est;
  est.samples = samples;
  u64 insoluble = 0, undecided = 0;
  for (int s : status) {
    if (s == -1) ++insoluble;
    if (s == 0) ++undecided;
  }
  est.s_hat = double(insoluble) / double(samples);
  est.std_error = std::sqrt(est.s_hat * (1.0 - est.s_hat) / double(samples));
  est.undecided_fraction = double(undecided) / double(samples);
  return est;
}

ObstructionEstimate estimate_real_obstruction(int d, int n, u64 samples, const RealConfig& cfg,
                                              u64 seed) {
  if (samples < 1) throw std::invalid_argument("estimate_real_obstruction: need samples >= 1");
  auto basis = forms::monomial_basis(d, n);
  std::size_t N = basis.size();
  std::vector<int> status(samples, 0);
  Rng root(seed);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = root.derived(i);
    // solubility is invariant under positive scaling of the coefficients,
    // so a uniform direction is an unbiased draw for the cone
    std::vector<double> coeffs(N);
    double norm_sq = 0;
    for (auto& c : coeffs) {
      double a = rng.uniform(), b = rng.uniform();
      c = std::sqrt(-2.0 * std::log(1.0 - a)) * std::cos(6.283185307179586 * b);
      norm_sq += c * c;
    }
    for (auto& c : coeffs) c /= std::sqrt(norm_sq);
    auto verdict = real_positive_soluble_coeffs(coeffs, basis, cfg);
    status[i] = verdict.status == RealVerdict::Status::insoluble  ? -1
                : verdict.status == RealVerdict::Status::soluble ? 1
                                                                 : 0;
  });

  ObstructionEstimate est;
  est.samples = samples;
  u64 insoluble = 0, undecided = 0;
  for (int s : status) {
    if (s == -1) ++insoluble;
    if (s == 0) ++undecided;
  }
  est.s_hat = double(insoluble) / double(samples);
  est.std_error = std::sqrt(est.s_hat * (1.0 - est.s_hat) / double(samples));
  est.undecided_fraction = double(undecided) / double(samples);
  return est;
}

LocalProductEstimate estimate_local_product(int d, int n, u64 samples, i64 p_max, int r_max,
                                            const RealConfig& real_cfg, u64 seed) {
  LocalProductEstimate out;
  out.real_part = estimate_real_obstruction(d, n, samples, real_cfg, splitmix64(seed));
  double product = 1;
  double rel_var = 0;
  auto fold = [&](const ObstructionEstimate& e) {
    double one_minus = 1.0 - e.s_hat;
    product *= one_minus;
    if (one_minus > 0) {
      double rel = e.std_error / one_minus;
      rel_var += rel * rel;
    }
  };
  fold(out.real_part);
  for (i64 p : arith::primes_up_to(double(p_max))) {
    auto e = estimate_obstruction(p, d, n, samples, r_max, splitmix64(seed ^ u64(p)));
    out.padic_parts.emplace(p, e);
    fold(e);
  }
  out.product = product;
  out.std_error = std::fabs(product) * std::sqrt(rel_var);
  return out;
}

}  // namespace primal::local
