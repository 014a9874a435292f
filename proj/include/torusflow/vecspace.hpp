#pragma once

// Semi-ordered normed k-vector space: max-norm, componentwise partial
// order, integer/fractional splitting, and extremal elements of finite
// vector sets.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace torusflow {

/// Point of the universal cover E_k; dense real coordinates.
using Vector = std::vector<double>;

/// Exact integer lattice vector (no rounding state).
using IntegerVector = std::vector<std::int64_t>;

/// Outcome of the componentwise semi-order comparison.
enum class OrderRelation { Greater, Less, Equal, Incomparable };

const char* to_string(OrderRelation r);

/// Max-norm ||X|| = max_p |x_p|. Throws std::invalid_argument on
/// non-finite entries or empty input.
double norm_inf(const Vector& x);

/// True iff every entry is finite (and the vector is nonempty).
bool is_finite(const Vector& x);

// Elementwise arithmetic helpers. Dimensions must match.
Vector add(const Vector& x, const Vector& y);
Vector sub(const Vector& x, const Vector& y);
Vector scale(double c, const Vector& x);
Vector add_integer(const Vector& x, const IntegerVector& q);
Vector to_vector(const IntegerVector& q);

/// X > Y iff every component of X-Y is >= 0 and at least one is > 0.
/// Comparisons are exact; callers needing tolerance pre-round inputs.
OrderRelation compare(const Vector& x, const Vector& y);

/// Splits X = U + V with U_p = floor(X_p) and V_p in [0, 1).
std::pair<IntegerVector, Vector> split_integer_fractional(const Vector& x);

/// Every X in S not strictly dominated by any member of S. Equal
/// duplicates are removed before domination filtering. Nonempty input
/// gives nonempty output.
std::vector<Vector> maximal_elements(const std::vector<Vector>& s);
std::vector<Vector> minimal_elements(const std::vector<Vector>& s);

/// Componentwise sup over maximal elements (X) and inf over minimal
/// elements (Y); the tightest bounds with X >= Z >= Y for all Z in S.
std::pair<Vector, Vector> extremal_bounds(const std::vector<Vector>& s);

}  // namespace torusflow
