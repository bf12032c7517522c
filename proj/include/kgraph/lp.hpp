#pragma once

#include "kgraph/numeric.hpp"

#include <optional>
#include <vector>

namespace kgraph {

/// Exact feasibility for {x : a x = b, x >= 0}.
///
/// Phase-one simplex on a dense tableau with one artificial variable per
/// row and Bland's rule for both entering and leaving choices, so it
/// terminates without any anti-cycling perturbation. Scalar must be an
/// ordered field (Rational in practice). Returns a basic feasible point, or
/// nothing when the system is infeasible.
template <typename Scalar>
std::optional<Vector<Scalar>> find_nonnegative_solution(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m == 0) return Vector<Scalar>::Zero(n);

  // Columns: n structural, m artificial, then the right-hand side.
  const Index width = n + m + 1;
  const Index rhs = n + m;
  Matrix<Scalar> tableau = Matrix<Scalar>::Zero(m, width);
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index r = 0; r < m; ++r) {
    const bool flip = b(r) < 0;
    for (Index c = 0; c < n; ++c) tableau(r, c) = flip ? Scalar(-a(r, c)) : a(r, c);
    tableau(r, n + r) = Scalar(1);
    tableau(r, rhs) = flip ? Scalar(-b(r)) : b(r);
    basis[static_cast<std::size_t>(r)] = n + r;
  }

  // Reduced costs of "minimise the sum of artificials".
  Vector<Scalar> cost = Vector<Scalar>::Zero(width);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < width; ++c)
      if (c < n || c == rhs) cost(c) -= tableau(r, c);

  for (;;) {
    Index entering = -1;
    for (Index c = 0; c < n + m; ++c) {
      if (cost(c) < 0) {
        entering = c;
        break;
      }
    }
    if (entering < 0) break;

    Index leaving = -1;
    Scalar best_ratio = 0;
    for (Index r = 0; r < m; ++r) {
      if (tableau(r, entering) <= 0) continue;
      const Scalar ratio = tableau(r, rhs) / tableau(r, entering);
      const bool better = leaving < 0 || ratio < best_ratio ||
                          (ratio == best_ratio &&
                           basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leaving)]);
      if (better) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    // Phase one is bounded below by zero, so an entering column always has
    // a positive entry somewhere.
    if (leaving < 0) break;

    const Scalar pivot = tableau(leaving, entering);
    tableau.row(leaving) /= pivot;
    for (Index r = 0; r < m; ++r) {
      if (r == leaving || tableau(r, entering) == 0) continue;
      const Scalar factor = tableau(r, entering);
      tableau.row(r) -= factor * tableau.row(leaving);
    }
    if (cost(entering) != 0) {
      const Scalar factor = cost(entering);
      cost -= factor * tableau.row(leaving).transpose();
    }
    basis[static_cast<std::size_t>(leaving)] = entering;
  }

  // -cost(rhs) is the remaining artificial mass.
  if (cost(rhs) != 0) return std::nullopt;

  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  for (Index r = 0; r < m; ++r) {
    const Index var = basis[static_cast<std::size_t>(r)];
    if (var < n) x(var) = tableau(r, rhs);
  }
  return x;
}

}  // namespace kgraph
