#include "hbarsign/oscillator.hpp"

#include <cmath>
#include <stdexcept>

namespace hbarsign {

Eigen::MatrixXd ladder_lowering(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("ladder_lowering: need at least two levels");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

GeneralOperator oscillator_position(Eigen::Index n, double hbar_signed) {
  if (hbar_signed == 0.0) throw std::invalid_argument("oscillator_position: hbar must be nonzero");
  const Eigen::MatrixXd a = ladder_lowering(n);
  const double c = std::sqrt(std::abs(hbar_signed) / 2.0);
  return linear_op((c * (a + a.transpose())).cast<Complex>());
}

GeneralOperator oscillator_momentum(Eigen::Index n, double hbar_signed) {
  if (hbar_signed == 0.0) throw std::invalid_argument("oscillator_momentum: hbar must be nonzero");
  const Eigen::MatrixXd a = ladder_lowering(n);
  const double c = std::copysign(std::sqrt(std::abs(hbar_signed) / 2.0), hbar_signed);
  ComplexMatrix p(n, n);
  p.real().setZero();
  p.imag() = c * (a.transpose() - a);
  return linear_op(std::move(p));
}

GeneralOperator quantize(const PhasePolynomial& f, Eigen::Index n, double hbar_signed) {
  if (f.dimension() != 1) {
    throw std::invalid_argument("quantize: only d = 1 polynomials are supported");
  }
  if (f.degree() > 2) {
    throw std::invalid_argument("quantize: only total degree <= 2 is supported");
  }
  const ComplexMatrix x = oscillator_position(n, hbar_signed).mat;
  const ComplexMatrix p = oscillator_momentum(n, hbar_signed).mat;

  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& [e, coeff] : f.terms()) {
    const double c = static_cast<double>(coeff);
    const unsigned qa = e[0], pb = e[1];
    if (qa == 0 && pb == 0) {
      out.diagonal().array() += c;
    } else if (qa == 1 && pb == 0) {
      out += c * x;
    } else if (qa == 0 && pb == 1) {
      out += c * p;
    } else if (qa == 2 && pb == 0) {
      out += c * (x * x);
    } else if (qa == 0 && pb == 2) {
      out += c * (p * p);
    } else {  // qa == 1 && pb == 1, Weyl-symmetrized
      out += (0.5 * c) * (x * p + p * x);
    }
  }
  return linear_op(std::move(out));
}

double interior_max_abs(const ComplexMatrix& m, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("interior_max_abs: fraction must lie in (0, 1]");
  }
  const Eigen::Index w = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(fraction * static_cast<double>(m.rows())));
  return m.topLeftCorner(w, w).cwiseAbs().maxCoeff();
}

}  // namespace hbarsign
