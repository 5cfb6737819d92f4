#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "primal/arith.hpp"
#include "primal/forms.hpp"
#include "primal/util.hpp"

namespace primal::local {

// ---- solubility over the positive reals -----------------------------------

struct RealWitness {
  std::vector<double> point;  // on the unit sphere, all coordinates > 0
  double residual = 0;
};

struct RealVerdict {
  enum class Status { soluble, insoluble, unknown };
  Status status = Status::unknown;
  std::optional<RealWitness> witness;
  // insolubility certificate: min |f| over a mesh of covering radius
  // mesh_size exceeded lipschitz * mesh_size
  double mesh_size = 0;
  double margin = 0;
  double lipschitz = 0;
};

struct RealConfig {
  int samples = 10000;
  double tol = 1e-9;
  double mesh_initial = 0.2;
  int mesh_refinements = 6;
  std::size_t mesh_budget = 4'000'000;
  u64 seed = 0x7a9e1ce5ULL;
};

/// Decides whether f has a zero with all coordinates strictly positive,
/// testing on the unit sphere by homogeneity. Soluble comes with a refined
/// witness, insoluble with a Lipschitz mesh certificate, everything else is
/// unknown.
RealVerdict real_positive_soluble(const forms::Form& f, const RealConfig& cfg = {});
RealVerdict real_positive_soluble_coeffs(std::span<const double> coeffs,
                                         const forms::MonomialBasis& basis,
                                         const RealConfig& cfg = {});

// ---- solubility over the p-adic units ---------------------------------------

struct PadicWitness {
  std::vector<u64> residues;  // mod p^level, first coordinate normalized to 1
  int level = 0;
  int grad_valuation = 0;
};

struct PadicVerdict {
  enum class Status { soluble, insoluble, undecided };
  i64 p = 0;
  Status status = Status::undecided;
  std::optional<PadicWitness> witness;
  int level = 0;  // soluble: witness level; insoluble: first empty level
  bool budget_hit = false;
};

struct PadicConfig {
  int r_max = 0;  // 0 selects 2 d + 3
  std::size_t frontier_budget = 200'000;
  std::size_t level_budget = 2'000'000;  // residue candidates scanned per level
  u64 seed = 0x5eed5eedULL;
};

/// Breadth-first refinement over unit residue vectors mod p, p^2, ...
/// A node at level r with f = 0 (mod p^r) and gradient valuation e is
/// accepted once r >= 2e + 1 (Hensel); an empty frontier certifies
/// insolubility; exhausted depth or budget yields undecided.
PadicVerdict unit_solubility(const forms::Form& f, i64 p, const PadicConfig& cfg = {});

// ---- non-Archimedean factor --------------------------------------------------

/// Precomputed Veronese residue table for one modulus; makes repeated
/// density evaluations over many coefficient vectors cheap.
class ResidueDensityTable {
 public:
  ResidueDensityTable(u64 Q, const forms::MonomialBasis& basis, double budget = 5e8);
  /// sigma'(a; Q) = Q / phi(Q)^(n+1) * #{unit b : <a, nu(b)> = 0 (mod Q)}
  Rational density(std::span<const i64> a) const;
  u64 modulus() const { return Q_; }
  u64 tuple_count() const { return u64(tables_.size()); }

 private:
  u64 Q_;
  std::size_t N_;
  std::vector<std::vector<u64>> tables_;  // nu(b) mod Q per unit tuple b
};

Rational residue_density(std::span<const i64> a, u64 Q, const forms::MonomialBasis& basis,
                         double budget = 5e8);

/// Exhaustive count of coefficient vectors a mod p^r (not all divisible by p)
/// with <a, nu(b)> = 0 (mod p^r), for a unit residue vector b.
u64 solution_residue_count(std::span<const i64> b, i64 p, int r,
                           const forms::MonomialBasis& basis, double budget = 5e8);

/// Exact mean of residue_density(a; p^r) over all a mod p^r not divisible by p.
Rational residue_density_mean(i64 p, int r, const forms::MonomialBasis& basis,
                              double budget = 5e8);

// ---- Archimedean factor -------------------------------------------------------

struct McConfig {
  u64 samples = 100'000;
  u64 seed = 1;
};

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
  u64 samples = 0;
  u64 hits = 0;
};

/// tau'(a; gamma): gamma times the volume of the unit-ball positive-orthant
/// region whose Veronese image nearly annihilates a, by rejection sampling
/// from the unit cube. Exact integer hit counts make the estimate
/// independent of the parallel schedule.
McEstimate archimedean_density(const forms::Form& f, double gamma, const McConfig& mc);

/// J'(B) = tau'(a; log B).
McEstimate archimedean_factor(const forms::Form& f, double B, const McConfig& mc);

/// S'(B) = sigma'(a; W) with W from scale_params(B).
Rational nonarchimedean_factor(const forms::Form& f, double B, double budget = 5e8);

/// Gradient valuations e attained by unit solutions of f = 0 (mod p^r).
std::set<int> gradient_valuation_classes(std::span<const i64> a, i64 p, int r,
                                         const forms::MonomialBasis& basis, double budget = 5e8);

// ---- assembled local profile ---------------------------------------------------

struct ClassifyConfig {
  i64 p_max = 101;
  PadicConfig padic;
  RealConfig real;
};

struct LocalProfile {
  enum class Overall { soluble, insoluble, undetermined };
  Overall overall = Overall::undetermined;
  RealVerdict real;
  std::map<i64, PadicVerdict> padic;
  std::string obstruction;  // "real" or "p=..." when insoluble
  i64 p_max = 0;
  int r_max = 0;
};

/// Verdicts for the real place and every prime p <= p_max; stops early at the
/// first certified obstruction. The p_max truncation is recorded so results
/// stay falsifiable.
LocalProfile classify(const forms::Form& f, const ClassifyConfig& cfg = {});

struct DensityEstimate {
  double rho_hat = 0;
  double std_error = 0;
  double undecided_fraction = 0;
  u64 samples = 0;
  u64 soluble = 0;
  u64 insoluble = 0;
  u64 undetermined = 0;
};

/// Fraction of primitive coefficient vectors in the ball of radius A that are
/// locally soluble everywhere checked. Undetermined samples are reported
/// separately, never folded into either side.
DensityEstimate estimate_density(int d, int n, double A, u64 samples,
                                 const ClassifyConfig& cfg, u64 seed);

struct ObstructionEstimate {
  double s_hat = 0;
  double std_error = 0;
  double undecided_fraction = 0;
  u64 samples = 0;
};

/// s_p: fraction of coefficient vectors mod p^r_max with no unit solution.
ObstructionEstimate estimate_obstruction(i64 p, int d, int n, u64 samples, int r_max, u64 seed);

/// s_infinity: fraction of real coefficient directions with no positive zero.
ObstructionEstimate estimate_real_obstruction(int d, int n, u64 samples, const RealConfig& cfg,
                                              u64 seed);

struct LocalProductEstimate {
  double product = 0;
  double std_error = 0;
  ObstructionEstimate real_part;
  std::map<i64, ObstructionEstimate> padic_parts;
};

/// (1 - s_inf) prod_p (1 - s_p) over p <= p_max, for cross-validation against
/// the direct density estimator.
LocalProductEstimate estimate_local_product(int d, int n, u64 samples, i64 p_max, int r_max,
                                            const RealConfig& real_cfg, u64 seed);

}  // namespace primal::local
