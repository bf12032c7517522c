#pragma once

// Exact dense linear algebra. Everything here is templated on the scalar so
// the same code runs over Rational (fields) or Integer (Euclidean rings);
// nothing uses pivoting by magnitude, so no tolerance ever appears.

#include "kgraph/numeric.hpp"

#include <utility>
#include <vector>

namespace kgraph {

template <typename Derived>
Matrix<typename Derived::Scalar> matrix_power(const Eigen::MatrixBase<Derived>& a, unsigned exponent) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> result = Matrix<Scalar>::Identity(a.rows(), a.cols());
  Matrix<Scalar> base = a;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

/// Reduced row echelon form over a field. Returns the pivot columns.
template <typename Scalar>
std::vector<Index> rref_in_place(Matrix<Scalar>& a) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index pivot = -1;
    for (Index r = row; r < a.rows(); ++r) {
      if (a(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    a.row(pivot).swap(a.row(row));
    const Scalar lead = a(row, col);
    a.row(row) /= lead;
    for (Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const Scalar factor = a(r, col);
      a.row(r) -= factor * a.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename Scalar>
Index rank_of(Matrix<Scalar> a) {
  return static_cast<Index>(rref_in_place(a).size());
}

/// Basis of the right kernel {x : a x = 0}, one basis vector per column.
/// Each basis vector has a 1 in its free coordinate and 0 in the others.
template <typename Scalar>
Matrix<Scalar> kernel_basis(Matrix<Scalar> a) {
  const Index n = a.cols();
  const std::vector<Index> pivots = rref_in_place(a);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  std::vector<Index> free_cols;
  for (Index c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);

  Matrix<Scalar> basis = Matrix<Scalar>::Zero(n, static_cast<Index>(free_cols.size()));
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const Index f = free_cols[j];
    basis(f, static_cast<Index>(j)) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      basis(pivots[r], static_cast<Index>(j)) = -a(static_cast<Index>(r), f);
  }
  return basis;
}

/// Smith normal form: left * input * right == diagonal, with left and right
/// unimodular and each diagonal entry dividing the next.
template <typename Scalar>
struct SmithForm {
  Matrix<Scalar> left;
  Matrix<Scalar> diagonal;
  Matrix<Scalar> right;
  Index rank = 0;
};

template <typename Scalar>
SmithForm<Scalar> smith_normal_form(const Matrix<Scalar>& input) {
  const Index m = input.rows();
  const Index n = input.cols();
  SmithForm<Scalar> s;
  s.diagonal = input;
  s.left = Matrix<Scalar>::Identity(m, m);
  s.right = Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar>& d = s.diagonal;

  const Index steps = std::min(m, n);
  for (Index t = 0; t < steps; ++t) {
    bool finished_column = false;
    while (!finished_column) {
      // Smallest nonzero magnitude in the trailing block becomes the pivot.
      Index pr = -1, pc = -1;
      Scalar best = 0;
      for (Index r = t; r < m; ++r) {
        for (Index c = t; c < n; ++c) {
          if (d(r, c) == 0) continue;
          const Scalar mag = abs(d(r, c));
          if (pr < 0 || mag < best) {
            best = mag;
            pr = r;
            pc = c;
          }
        }
      }
      if (pr < 0) {
        s.rank = t;
        return s;
      }
      d.row(t).swap(d.row(pr));
      s.left.row(t).swap(s.left.row(pr));
      d.col(t).swap(d.col(pc));
      s.right.col(t).swap(s.right.col(pc));

      bool clean = true;
      for (Index r = t + 1; r < m; ++r) {
        if (d(r, t) == 0) continue;
        const Scalar q = d(r, t) / d(t, t);
        d.row(r) -= q * d.row(t);
        s.left.row(r) -= q * s.left.row(t);
        if (d(r, t) != 0) clean = false;
      }
      for (Index c = t + 1; c < n; ++c) {
        if (d(t, c) == 0) continue;
        const Scalar q = d(t, c) / d(t, t);
        d.col(c) -= q * d.col(t);
        s.right.col(c) -= q * s.right.col(t);
        if (d(t, c) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into row t and retry.
      Index bad_row = -1;
      for (Index r = t + 1; r < m && bad_row < 0; ++r)
        for (Index c = t + 1; c < n; ++c)
          if (d(r, c) % d(t, t) != 0) {
            bad_row = r;
            break;
          }
      if (bad_row >= 0) {
        d.row(t) += d.row(bad_row);
        s.left.row(t) += s.left.row(bad_row);
        continue;
      }
      finished_column = true;
    }
    if (d(t, t) < 0) {
      d.row(t) = -d.row(t);
      s.left.row(t) = -s.left.row(t);
    }
  }
  s.rank = steps;
  for (Index t = 0; t < steps; ++t)
    if (d(t, t) == 0) {
      s.rank = t;
      break;
    }
  return s;
}

}  // namespace kgraph
