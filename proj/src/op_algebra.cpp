#include "hbarsign/op_algebra.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace hbarsign {

namespace {

void check_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

GeneralOperator::GeneralOperator(ComplexMatrix m, Parity p) : mat(std::move(m)), parity(p) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("operator matrix must be square");
  if (mat.rows() < 1 || mat.rows() > kMaxOperatorDim) {
    throw std::invalid_argument("operator dimension out of range [1, " +
                                std::to_string(kMaxOperatorDim) + "]");
  }
  if (!mat.allFinite()) throw std::invalid_argument("operator matrix has non-finite entries");
}

GeneralOperator linear_op(ComplexMatrix m) { return {std::move(m), Parity::linear}; }

GeneralOperator antilinear_op(ComplexMatrix m) { return {std::move(m), Parity::antilinear}; }

GeneralOperator identity_op(Eigen::Index n) {
  return {ComplexMatrix::Identity(n, n), Parity::linear};
}

GeneralOperator conjugation_op(Eigen::Index n) {
  return {ComplexMatrix::Identity(n, n), Parity::antilinear};
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

StateVector apply(const GeneralOperator& a, const StateVector& v) {
  check_same_dim(a.dim(), v.size(), "apply");
  if (a.is_linear()) return a.mat * v;
  return a.mat * v.conjugate();
}

Complex inner_product(const StateVector& phi, const StateVector& psi) {
  check_same_dim(phi.size(), psi.size(), "inner_product");
  return phi.dot(psi);  // Eigen's dot conjugates the first factor
}

GeneralOperator adjoint(const GeneralOperator& a) {
  if (a.is_linear()) return {a.mat.adjoint(), Parity::linear};
  return {a.mat.transpose(), Parity::antilinear};
}

GeneralOperator compose(const GeneralOperator& a, const GeneralOperator& b) {
  check_same_dim(a.dim(), b.dim(), "compose");
  const Parity parity = (a.parity == b.parity) ? Parity::linear : Parity::antilinear;
  if (a.is_linear()) return {a.mat * b.mat, parity};
  return {a.mat * b.mat.conjugate(), parity};
}

GeneralOperator commutator(const GeneralOperator& f, const GeneralOperator& g) {
  if (!f.is_linear() || !g.is_linear()) {
    throw std::invalid_argument("commutator is defined only for linear operators");
  }
  check_same_dim(f.dim(), g.dim(), "commutator");
  return {f.mat * g.mat - g.mat * f.mat, Parity::linear};
}

double antiunitarity_residual(const GeneralOperator& a) {
  const GeneralOperator prod = compose(adjoint(a), a);
  return max_abs(prod.mat - ComplexMatrix::Identity(a.dim(), a.dim()));
}

GeneralOperator conjugate_by(const GeneralOperator& a, const GeneralOperator& o,
                             double tolerance) {
  if (!o.is_linear()) throw std::invalid_argument("conjugate_by: observable must be linear");
  check_same_dim(a.dim(), o.dim(), "conjugate_by");
  const double residual = antiunitarity_residual(a);
  if (residual > tolerance) {
    std::ostringstream os;
    os << "conjugate_by: transform is not (anti)unitary, residual " << residual
       << " exceeds tolerance " << tolerance;
    throw std::invalid_argument(os.str());
  }
  return compose(compose(a, o), adjoint(a));
}

GeneralOperator random_antiunitary(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_antiunitary: dimension must be >= 1");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = gauss(engine);
      const double im = gauss(engine);
      g(j, k) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  // Fix the phase freedom so the result is a deterministic function of the
  // Gaussian draw (diag(R) made positive), which also gives Haar statistics.
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double m = std::abs(d);
    if (m > 0) q.col(k) *= d / m;
  }
  return {std::move(q), Parity::antilinear};
}

}  // namespace hbarsign
