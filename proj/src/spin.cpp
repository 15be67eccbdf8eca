#include "hbarsign/spin.hpp"

#include <stdexcept>

namespace hbarsign {

namespace {
const Complex kI(0.0, 1.0);
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

SpinTriple build_spin(double hbar_signed) {
  if (hbar_signed == 0.0) throw std::invalid_argument("build_spin: hbar must be nonzero");
  const double half = 0.5 * hbar_signed;
  return {linear_op(half * pauli_x()), linear_op(half * pauli_y()), linear_op(half * pauli_z()),
          hbar_signed};
}

GeneralOperator theta_operator() { return antilinear_op(pauli_y()); }

SpinTriple k_transform_spin(const SpinTriple& triple) {
  const GeneralOperator k = conjugation_op(2);
  return {conjugate_by(k, triple.sx), conjugate_by(k, triple.sy), conjugate_by(k, triple.sz),
          -triple.hbar_signed};
}

SpinTriple theta_transform_spin(const SpinTriple& triple) {
  const GeneralOperator theta = theta_operator();
  return {conjugate_by(theta, triple.sx), conjugate_by(theta, triple.sy),
          conjugate_by(theta, triple.sz), -triple.hbar_signed};
}

std::pair<Wavefunction, Wavefunction> spinor_theta(const Wavefunction& up,
                                                   const Wavefunction& down) {
  if (!(up.grid == down.grid)) throw std::invalid_argument("spinor_theta: grid mismatch");
  // sigma_y conj(.) at each grid point.
  Wavefunction new_up(up.grid, -kI * down.samples.conjugate());
  Wavefunction new_down(up.grid, kI * up.samples.conjugate());
  return {std::move(new_up), std::move(new_down)};
}

}  // namespace hbarsign
