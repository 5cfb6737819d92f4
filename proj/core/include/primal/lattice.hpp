#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "primal/forms.hpp"
#include "primal/util.hpp"

namespace primal::lattice {

using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

/// Caps on point enumeration work. Predicted coefficient-box volume and the
/// number of materialized candidates are both checked before any heavy loop.
struct EnumerationBudget {
  double box_limit = 5e7;
  std::size_t candidate_limit = 2'000'000;
};

struct MinimaData {
  std::vector<i64> lambda_sq;  // exact squared successive minima
  Mat greedy;                  // basis with |v_i| <= (3/2)^(i-1) lambda_i
};

/// Immutable integer lattice given by a basis of independent rows. Copies
/// share one lazily computed minima cache behind a single-writer guard.
class IntegerLattice {
 public:
  IntegerLattice();

  int ambient_dim() const;
  int rank() const;
  const Mat& basis() const;

  double determinant() const;
  /// Exact squared determinant (Gram determinant); throws std::overflow_error
  /// if it does not fit in 64 bits.
  i64 gram_determinant() const;
  const std::string& gram_determinant_str() const;

  const std::vector<i64>& minima_squared(const EnumerationBudget& budget = {}) const;
  std::vector<double> minima(const EnumerationBudget& budget = {}) const;
  /// Greedy reduced basis: |v_i| <= (3/2)^(i-1) lambda_i, genuine basis.
  const Mat& reduced_basis(const EnumerationBudget& budget = {}) const;

 private:
  struct State;
  std::shared_ptr<State> s_;
  friend IntegerLattice lattice_from_basis(Mat basis, int ambient);
};

/// Builds a lattice from basis rows (must be independent over Q). Pass
/// ambient = -1 to deduce from the rows; a rank-0 lattice needs it explicit.
IntegerLattice lattice_from_basis(Mat basis, int ambient = -1);

IntegerLattice standard_lattice(int N);

/// Saturated rank N-1 lattice {y : <c,y> = 0}; for primitive c its
/// determinant equals |c|.
IntegerLattice solution_lattice(const Vec& c);

/// {y : <c,y> = 0 (mod Q)}; Q = 1 gives the full integer lattice.
struct CongruenceSpec {
  Vec c;
  u64 Q = 1;
};
IntegerLattice congruence_lattice(const CongruenceSpec& spec);

/// Exact intersection; membership in the result is equivalent to membership
/// in both inputs.
IntegerLattice intersect(const IntegerLattice& L1, const IntegerLattice& L2);

bool membership(const IntegerLattice& L, const Vec& v);

/// All lattice points in the closed ball of radius X (the origin included),
/// via coefficient boxes from dual-basis norms plus an exact norm filter.
std::vector<Vec> enumerate_points(const IntegerLattice& L, double X,
                                  const EnumerationBudget& budget = {});

/// Points of the ball whose coordinates are all (positive) primes.
i64 prime_point_count(const IntegerLattice& L, double X, const EnumerationBudget& budget = {});

/// Smallest primitive lattice containing the span of the given vectors,
/// plus the index of the generated lattice inside it.
std::pair<IntegerLattice, i64> saturate(const Mat& vectors);

/// gcd of the k x k minors of the k x N matrix whose rows are the given
/// vectors; 0 exactly when they are dependent.
i64 gcd_minors(const Mat& rows);

/// Minimum determinant of a rank-r sublattice containing x (r in {2,3}).
double min_sublattice_det(const Vec& x, int r, const EnumerationBudget& budget = {});
/// Same over sublattices containing both x and y.
double min_sublattice_det(const Vec& x, const Vec& y, int r,
                          const EnumerationBudget& budget = {});

/// |u||v| / det(Zu + Zv) for independent u, v; >= 1 with equality iff
/// orthogonal. Throws on dependent inputs.
double orthogonality_defect(const Vec& u, const Vec& v);

/// Defect of the Veronese images of two points.
double veronese_orthogonality_defect(const Vec& x, const Vec& y,
                                     const forms::MonomialBasis& basis);

/// Sieve-loss factor of the lattice: the value on the greedy reduced basis
/// (lower) and the maximum over all bases assembled from lattice vectors
/// with |v_j| <= 2 (3/2)^(j-1) lambda_j (sup_estimate).
struct SieveLossBounds {
  double lower = 1;
  double sup_estimate = 1;
};
SieveLossBounds sieve_loss_bounds(const IntegerLattice& L, const EnumerationBudget& budget = {});

std::string to_json(const IntegerLattice& L);
IntegerLattice lattice_from_json(const std::string& text);

}  // namespace primal::lattice
