#pragma once

#include <span>
#include <string>
#include <vector>

#include "primal/util.hpp"

namespace primal::forms {

/// Identifier of the frozen monomial ordering, embedded in every report so
/// archived coefficient vectors stay interpretable.
inline constexpr const char* kMonomialOrder = "lex-desc-x0-major-v1";

/// All degree-d monomials in n+1 variables, as exponent tuples in strictly
/// descending lexicographic order (x0 weighs heaviest).
struct MonomialBasis {
  int d = 0;
  int n = 0;
  std::vector<std::vector<int>> exponents;

  std::size_t size() const { return exponents.size(); }
};

i64 binomial(int a, int b);

/// Dimension count: binomial(n + d, d).
i64 monomial_count(int d, int n);

MonomialBasis monomial_basis(int d, int n);

std::vector<i64> veronese(std::span<const i64> x, const MonomialBasis& basis);
std::vector<double> veronese(std::span<const double> x, const MonomialBasis& basis);

/// Homogeneous integer form: coefficients against a MonomialBasis.
struct Form {
  MonomialBasis basis;
  std::vector<i64> coeffs;
  double norm = 0;  // cached Euclidean norm of coeffs

  static Form make(MonomialBasis basis, std::vector<i64> coeffs);
  bool is_primitive() const;
  int degree() const { return basis.d; }
  int vars() const { return basis.n + 1; }
};

/// Exact evaluation; widens to 128-bit on 64-bit overflow and throws
/// std::overflow_error beyond that.
i64 evaluate(const Form& f, std::span<const i64> x);
double evaluate(const Form& f, std::span<const double> x);
double evaluate_real_coeffs(std::span<const double> coeffs, const MonomialBasis& basis,
                            std::span<const double> x);

std::vector<i64> gradient(const Form& f, std::span<const i64> x);
std::vector<double> gradient(const Form& f, std::span<const double> x);

/// Uniform sample from the nonzero integer points of the closed ball of
/// radius A, conditioned on primitivity, by rejection. Throws after
/// resample_cap failed draws (signals pathological A).
std::vector<i64> sample_primitive(int N, double A, Rng& rng, int resample_cap = 100000);

std::string to_json(const Form& f);
Form form_from_json(const std::string& text);

}  // namespace primal::forms
