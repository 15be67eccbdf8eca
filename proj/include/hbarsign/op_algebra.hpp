#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace hbarsign {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Hard cap on operator dimension; everything here is dense.
inline constexpr Eigen::Index kMaxOperatorDim = 4096;

enum class Parity { linear, antilinear };

/// A finite-dimensional operator that may be linear or antilinear.
///
/// The action on a state v is
///   linear:     v -> M v
///   antilinear: v -> M conj(v)
/// so a plain matrix never suffices on its own: the parity flag travels with
/// it, and the parity of a composition is the XOR of the parities.
struct GeneralOperator {
  ComplexMatrix mat;
  Parity parity = Parity::linear;

  GeneralOperator() = default;
  GeneralOperator(ComplexMatrix m, Parity p);

  Eigen::Index dim() const { return mat.rows(); }
  bool is_linear() const { return parity == Parity::linear; }
};

GeneralOperator linear_op(ComplexMatrix m);
GeneralOperator antilinear_op(ComplexMatrix m);
GeneralOperator identity_op(Eigen::Index n);
/// The conjugation operator K = (I, antilinear): K psi = conj(psi).
GeneralOperator conjugation_op(Eigen::Index n);

/// Max absolute entry; the matrix norm used for every residual here.
double max_abs(const ComplexMatrix& m);

StateVector apply(const GeneralOperator& a, const StateVector& v);

/// sum_j conj(phi_j) psi_j: linear in psi, antilinear in phi.
Complex inner_product(const StateVector& phi, const StateVector& psi);

/// For linear operators the usual conjugate transpose, satisfying
/// (phi, A psi) = (A^+ phi, psi). For antilinear operators the defining
/// relation picks up an outer conjugation, (phi, A psi) = (A^+ phi, psi)*,
/// and the adjoint becomes the plain transpose.
GeneralOperator adjoint(const GeneralOperator& a);

/// apply(compose(a, b), v) == apply(a, apply(b, v)) for every parity
/// combination; the result parity is the XOR of the input parities.
GeneralOperator compose(const GeneralOperator& a, const GeneralOperator& b);

/// [F, G] = F G - G F. Defined only for linear operators; antilinear inputs
/// are rejected.
GeneralOperator commutator(const GeneralOperator& f, const GeneralOperator& g);

/// Max-entry deviation of adjoint(a) o a from the identity. Zero for unitary
/// and antiunitary operators.
double antiunitarity_residual(const GeneralOperator& a);

/// a o o o adjoint(a). Requires a to be unitary or antiunitary within
/// `tolerance` (throws with the measured residual otherwise) and o linear.
/// For antiunitary a scalars conjugate: conjugate_by(a, c*I) = conj(c)*I.
GeneralOperator conjugate_by(const GeneralOperator& a, const GeneralOperator& o,
                             double tolerance = 1e-8);

/// (U, antilinear) with U a Haar-like random unitary from QR-orthonormalizing
/// a seeded Gaussian matrix. Deterministic in (n, seed).
GeneralOperator random_antiunitary(Eigen::Index n, std::uint64_t seed);

}  // namespace hbarsign
