#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <string>
#include <vector>

namespace kgraph {

namespace mp = boost::multiprecision;

/// Arbitrary-precision integer. Expression templates are disabled so the
/// type behaves as a plain value inside Eigen expressions.
using Integer = mp::number<mp::gmp_int, mp::et_off>;
/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
using RatMatrix = Matrix<Rational>;
using RatVector = Vector<Rational>;

/// 0/1 reachability matrix; products are clamped back to {0,1}.
using SupportMatrix = Matrix<int>;

using Index = Eigen::Index;

inline std::string to_string(const Integer& x) { return x.str(); }
inline std::string to_string(const Rational& x) { return x.str(); }

/// Parses "p" or "p/q"; throws std::runtime_error on malformed text.
Rational parse_rational(const std::string& text);
Integer parse_integer(const std::string& text);

inline Integer numerator_of(const Rational& q) { return mp::numerator(q); }
inline Integer denominator_of(const Rational& q) { return mp::denominator(q); }

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return Integer(0);
  return mp::abs(a / mp::gcd(a, b) * b);
}

/// Support pattern of a non-negative matrix: 1 where the entry is positive.
template <typename Derived>
SupportMatrix support_of(const Eigen::MatrixBase<Derived>& m) {
  SupportMatrix s(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) s(r, c) = m(r, c) > 0 ? 1 : 0;
  return s;
}

inline SupportMatrix support_product(const SupportMatrix& a, const SupportMatrix& b) {
  return (a * b).cwiseMin(1);
}

}  // namespace kgraph
