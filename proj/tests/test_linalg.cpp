#include <doctest.h>

#include "kgraph/linalg.hpp"
#include "kgraph/lp.hpp"
#include "support.hpp"

#include <random>

using namespace kgraph;
using testing::matrix;

namespace {

// Fraction-free determinant, independent of the engine's elimination.
Integer bareiss_determinant(IntMatrix a) {
  const Index n = a.rows();
  Integer sign = 1, previous = 1;
  for (Index k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      Index swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i)
      for (Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / previous;
    previous = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix random_matrix(std::mt19937& rng, Index rows, Index cols, int lo, int hi) {
  IntMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = std::uniform_int_distribution<int>(lo, hi)(rng);
  return m;
}

}  // namespace

TEST_CASE("matrix power") {
  const IntMatrix p = matrix({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  CHECK(matrix_power(p, 0) == IntMatrix::Identity(3, 3));
  CHECK(matrix_power(p, 3) == IntMatrix::Identity(3, 3));
  CHECK(matrix_power(p, 4) == p);
  CHECK(matrix_power(matrix({{2}}), 10)(0, 0) == 1024);
}

TEST_CASE("rank and kernel over the rationals") {
  RatMatrix a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  CHECK(rank_of(a) == 1);
  const RatMatrix k = kernel_basis(a);
  CHECK(k.cols() == 2);
  CHECK((a * k).isZero());
  CHECK(rank_of<Rational>(k) == 2);

  RatMatrix full = RatMatrix::Identity(3, 3);
  CHECK(kernel_basis(full).cols() == 0);
}

TEST_CASE("smith normal form on random integer matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Index rows = std::uniform_int_distribution<Index>(1, 5)(rng);
    const Index cols = std::uniform_int_distribution<Index>(1, 7)(rng);
    const IntMatrix a = random_matrix(rng, rows, cols, -4, 4);
    const SmithForm<Integer> s = smith_normal_form(a);
    CHECK(s.left * a * s.right == s.diagonal);
    CHECK(abs(bareiss_determinant(s.left)) == 1);
    CHECK(abs(bareiss_determinant(s.right)) == 1);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        if (r != c) CHECK(s.diagonal(r, c) == 0);
    for (Index i = 0; i < s.rank; ++i) {
      CHECK(s.diagonal(i, i) > 0);
      if (i + 1 < s.rank) CHECK(s.diagonal(i + 1, i + 1) % s.diagonal(i, i) == 0);
    }
    for (Index i = s.rank; i < std::min(rows, cols); ++i) CHECK(s.diagonal(i, i) == 0);
    CHECK(s.rank == rank_of<Rational>(a.cast<Rational>()));
  }
}

TEST_CASE("smith normal form of the lattice generator of the cycle") {
  // Columns of I - P^T for the 3-cycle span {x : sum x = 0}.
  const IntMatrix p = matrix({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const IntMatrix gen = IntMatrix::Identity(3, 3) - IntMatrix(p.transpose());
  const SmithForm<Integer> s = smith_normal_form(gen);
  CHECK(s.rank == 2);
  CHECK(s.diagonal(0, 0) == 1);
  CHECK(s.diagonal(1, 1) == 1);
}

TEST_CASE("exact non-negative feasibility") {
  RatMatrix a(1, 2);
  a << 1, 1;
  RatVector b(1);
  b << 3;
  const auto x = find_nonnegative_solution(a, b);
  REQUIRE(x);
  CHECK((*x).sum() == 3);
  CHECK(((*x).array() >= 0).all());

  RatMatrix c(1, 2);
  c << 1, 1;
  RatVector d(1);
  d << -1;
  CHECK_FALSE(find_nonnegative_solution(c, d));

  // x - y = 1, x + y = 0 has the unique solution (1/2, -1/2).
  RatMatrix e(2, 2);
  e << 1, -1, 1, 1;
  RatVector f(2);
  f << 1, 0;
  CHECK_FALSE(find_nonnegative_solution(e, f));
}

TEST_CASE("feasibility agrees with brute force on small systems") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix a = random_matrix(rng, 2, 3, -2, 2);
    const IntMatrix b = random_matrix(rng, 2, 1, -3, 3);
    // Integer search over a small box finds integral solutions only; if it
    // finds one the LP must be feasible.
    bool integral = false;
    for (int x = 0; x <= 6 && !integral; ++x)
      for (int y = 0; y <= 6 && !integral; ++y)
        for (int z = 0; z <= 6 && !integral; ++z) {
          IntVector v(3);
          v << x, y, z;
          if (a * v == IntVector(b.col(0))) integral = true;
        }
    const auto sol = find_nonnegative_solution<Rational>(a.cast<Rational>(), RatVector(b.col(0).cast<Rational>()));
    if (integral) CHECK(sol.has_value());
    if (sol) {
      CHECK(a.cast<Rational>() * *sol == RatVector(b.col(0).cast<Rational>()));
      CHECK(((*sol).array() >= 0).all());
    }
  }
}
