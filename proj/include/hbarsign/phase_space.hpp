#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <vector>

namespace hbarsign {

/// Exact rational scalar used for all classical phase-space coefficients.
/// The classical bracket identities (antisymmetry, linearity, Jacobi) are
/// algebraic, so they are tested as exact equalities, never with tolerances.
using Rational = boost::multiprecision::cpp_rational;

/// Exponent vector of a monomial in (q_1..q_d, p_1..p_d), length 2d.
using ExponentVec = std::vector<unsigned>;

struct Monomial {
  ExponentVec exponents;
  Rational coefficient;
};

/// Multivariate polynomial over a 2d-dimensional phase space with exact
/// rational coefficients, kept in canonical form: terms are keyed by their
/// exponent vector and zero coefficients are dropped eagerly, so zero-testing
/// is a size check.
class PhasePolynomial {
 public:
  explicit PhasePolynomial(int dimension);

  static PhasePolynomial constant(int dimension, const Rational& c);
  /// q_i, i in [0, d)
  static PhasePolynomial coordinate(int dimension, int i);
  /// p_i, i in [0, d)
  static PhasePolynomial momentum(int dimension, int i);
  static PhasePolynomial from_terms(int dimension, const std::vector<Monomial>& terms);

  int dimension() const { return dimension_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<ExponentVec, Rational>& terms() const { return terms_; }
  /// Largest total degree among terms; -1 for the zero polynomial.
  int degree() const;

  PhasePolynomial& operator+=(const PhasePolynomial& rhs);
  PhasePolynomial& operator-=(const PhasePolynomial& rhs);
  PhasePolynomial& operator*=(const Rational& c);

  /// d/dq_i resp. d/dp_i, exact.
  PhasePolynomial derivative_q(int i) const;
  PhasePolynomial derivative_p(int i) const;

  /// Exact evaluation at a rational phase-space point (q_1..q_d, p_1..p_d).
  Rational evaluate(const std::vector<Rational>& point) const;

  bool operator==(const PhasePolynomial& rhs) const;

  /// Rendering for reports: terms sorted by total degree, then by
  /// lexicographic exponent order, e.g. "4*q^1*p^2". d = 1 uses plain q, p;
  /// higher dimensions use q1..qd, p1..pd.
  std::string to_string() const;

 private:
  void insert(const ExponentVec& e, const Rational& c);

  int dimension_;
  std::map<ExponentVec, Rational> terms_;

  friend PhasePolynomial operator*(const PhasePolynomial&, const PhasePolynomial&);

  /// Hidden friend: found by ADL only when a PhasePolynomial argument is
  /// present, so the Rational parameter never enters overload resolution for
  /// unrelated scalar * matrix expressions.
  friend PhasePolynomial operator*(const Rational& c, PhasePolynomial poly) {
    poly *= c;
    return poly;
  }
};

PhasePolynomial operator+(PhasePolynomial lhs, const PhasePolynomial& rhs);
PhasePolynomial operator-(PhasePolynomial lhs, const PhasePolynomial& rhs);
PhasePolynomial operator*(const PhasePolynomial& lhs, const PhasePolynomial& rhs);

/// {f, g} = sum_i (df/dq_i dg/dp_i - dg/dq_i df/dp_i), exact.
/// Throws std::invalid_argument on dimension mismatch.
PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g);

/// {f,{g,h}} + {h,{f,g}} + {g,{h,f}}; the zero polynomial for all inputs.
PhasePolynomial jacobi_residual(const PhasePolynomial& f, const PhasePolynomial& g,
                                const PhasePolynomial& h);

/// {c1 f1 + c2 f2, g} - c1 {f1,g} - c2 {f2,g}; the zero polynomial for all inputs.
PhasePolynomial bracket_bilinearity_residual(const Rational& c1, const PhasePolynomial& f1,
                                             const Rational& c2, const PhasePolynomial& f2,
                                             const PhasePolynomial& g);

}  // namespace hbarsign
