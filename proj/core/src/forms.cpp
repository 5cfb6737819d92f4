#include "primal/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace primal::forms {

i64 binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  i64 r = 1;
  for (int i = 1; i <= b; ++i) r = checked_mul(r, a - b + i) / i;
  return r;
}

i64 monomial_count(int d, int n) { return binomial(n + d, d); }

MonomialBasis monomial_basis(int d, int n) {
  if (d < 1 || n < 1) throw std::invalid_argument("monomial_basis: need d >= 1 and n >= 1");
  MonomialBasis basis;
  basis.d = d;
  basis.n = n;
  std::vector<int> expo(std::size_t(n) + 1, 0);
  // descending lex: peel the leading exponent from d downward, recurse right
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n) {
      expo[std::size_t(pos)] = remaining;
      basis.exponents.push_back(expo);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      expo[std::size_t(pos)] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  rec(rec, 0, d);
  return basis;
}

namespace {

template <class T>
T monomial_value(std::span<const T> x, const std::vector<int>& expo);

template <>
i64 monomial_value<i64>(std::span<const i64> x, const std::vector<int>& expo) {
  i64 v = 1;
  for (std::size_t i = 0; i < expo.size(); ++i)
    for (int k = 0; k < expo[i]; ++k) v = checked_mul(v, x[i]);
  return v;
}

template <>
double monomial_value<double>(std::span<const double> x, const std::vector<int>& expo) {
  double v = 1;
  for (std::size_t i = 0; i < expo.size(); ++i)
    for (int k = 0; k < expo[i]; ++k) v *= x[i];
  return v;
}

i128 monomial_value_wide(std::span<const i64> x, const std::vector<int>& expo) {
  i128 v = 1;
  for (std::size_t i = 0; i < expo.size(); ++i)
    for (int k = 0; k < expo[i]; ++k) v = checked_mul(v, i128(x[i]));
  return v;
}

void check_dims(std::size_t have, const MonomialBasis& basis, const char* who) {
  if (have != std::size_t(basis.n) + 1)
    throw std::invalid_argument(std::string(who) + ": point has wrong dimension");
}

}  // namespace

std::vector<i64> veronese(std::span<const i64> x, const MonomialBasis& basis) {
  check_dims(x.size(), basis, "veronese");
  std::vector<i64> out;
  out.reserve(basis.size());
  for (auto& expo : basis.exponents) out.push_back(monomial_value<i64>(x, expo));
  return out;
}

std::vector<double> veronese(std::span<const double> x, const MonomialBasis& basis) {
  check_dims(x.size(), basis, "veronese");
  std::vector<double> out;
  out.reserve(basis.size());
  for (auto& expo : basis.exponents) out.push_back(monomial_value<double>(x, expo));
  return out;
}

Form Form::make(MonomialBasis basis, std::vector<i64> coeffs) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("Form: coefficient count does not match basis");
  if (std::all_of(coeffs.begin(), coeffs.end(), [](i64 c) { return c == 0; }))
    throw std::invalid_argument("Form: zero form");
  Form f;
  f.basis = std::move(basis);
  f.coeffs = std::move(coeffs);
  double s = 0;
  for (i64 c : f.coeffs) s += double(c) * double(c);
  f.norm = std::sqrt(s);
  return f;
}

bool Form::is_primitive() const {
  u64 g = 0;
  for (i64 c : coeffs) g = positive_gcd(i64(g), c);
  return g == 1;
}

i64 evaluate(const Form& f, std::span<const i64> x) {
  check_dims(x.size(), f.basis, "evaluate");
  try {
    i64 acc = 0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
      acc = checked_add(acc, checked_mul(f.coeffs[i], monomial_value<i64>(x, f.basis.exponents[i])));
    return acc;
  } catch (const std::overflow_error&) {
    i128 acc = 0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
      acc = checked_add(acc, checked_mul(i128(f.coeffs[i]), monomial_value_wide(x, f.basis.exponents[i])));
    return narrow_i64(acc);
  }
}

double evaluate(const Form& f, std::span<const double> x) {
  check_dims(x.size(), f.basis, "evaluate");
  double acc = 0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    acc += double(f.coeffs[i]) * monomial_value<double>(x, f.basis.exponents[i]);
  return acc;
}

double evaluate_real_coeffs(std::span<const double> coeffs, const MonomialBasis& basis,
                            std::span<const double> x) {
  check_dims(x.size(), basis, "evaluate");
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("evaluate: coefficient count does not match basis");
  double acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    acc += coeffs[i] * monomial_value<double>(x, basis.exponents[i]);
  return acc;
}

std::vector<i64> gradient(const Form& f, std::span<const i64> x) {
  check_dims(x.size(), f.basis, "gradient");
  std::size_t vars = x.size();
  std::vector<i64> grad(vars, 0);
  std::vector<int> expo;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] == 0) continue;
    for (std::size_t v = 0; v < vars; ++v) {
      int e = f.basis.exponents[i][v];
      if (e == 0) continue;
      expo = f.basis.exponents[i];
      expo[v] -= 1;
      i128 term = checked_mul(i128(f.coeffs[i]) * e, monomial_value_wide(x, expo));
      grad[v] = narrow_i64(checked_add(i128(grad[v]), term));
    }
  }
  return grad;
}

std::vector<double> gradient(const Form& f, std::span<const double> x) {
  check_dims(x.size(), f.basis, "gradient");
  std::size_t vars = x.size();
  std::vector<double> grad(vars, 0.0);
  std::vector<int> expo;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] == 0) continue;
    for (std::size_t v = 0; v < vars; ++v) {
      int e = f.basis.exponents[i][v];
      if (e == 0) continue;
      expo = f.basis.exponents[i];
      expo[v] -= 1;
      grad[v] += double(f.coeffs[i]) * e * monomial_value<double>(std::span<const double>(x), expo);
    }
  }
  return grad;
}

std::vector<i64> sample_primitive(int N, double A, Rng& rng, int resample_cap) {
  if (N < 1) throw std::invalid_argument("sample_primitive: N must be positive");
  i64 box = i64(std::floor(A));
  double limit = A * A;
  for (int attempt = 0; attempt < resample_cap; ++attempt) {
    std::vector<i64> v(static_cast<std::size_t>(N));
    double norm_sq = 0;
    for (auto& c : v) {
      c = box > 0 ? rng.uniform_int(-box, box) : 0;
      norm_sq += double(c) * double(c);
    }
    if (norm_sq == 0 || norm_sq > limit) continue;
    u64 g = 0;
    for (i64 c : v) g = positive_gcd(i64(g), c);
    if (g == 1) return v;
  }
  throw std::runtime_error("sample_primitive: resample cap hit (is A >= 1?)");
}

std::string to_json(const Form& f) {
  nlohmann::ordered_json j;
  j["d"] = f.basis.d;
  j["n"] = f.basis.n;
  j["coeffs"] = f.coeffs;
  j["monomial_order"] = kMonomialOrder;
  return j.dump();
}

Form form_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.contains("monomial_order") && j["monomial_order"] != kMonomialOrder)
    throw std::invalid_argument("form_from_json: unknown monomial order tag");
  return Form::make(monomial_basis(j.at("d").get<int>(), j.at("n").get<int>()),
                    j.at("coeffs").get<std::vector<i64>>());
}

}  // namespace primal::forms
