#pragma once

#include "hbarsign/grid1d.hpp"
#include "hbarsign/op_algebra.hpp"

#include <utility>

namespace hbarsign {

/// Standard Pauli matrices, sigma_y = [[0, -i], [i, 0]].
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Spin-1/2 operator triple. hbar_signed is the value appearing in the
/// triple's commutation relations [s_x, s_y] = i hbar_signed s_z; after a
/// conjugation transform it records the flipped sign, while the components
/// need no longer equal (hbar_signed/2) sigma.
struct SpinTriple {
  GeneralOperator sx, sy, sz;
  double hbar_signed = 1.0;
};

/// s_a = (hbar_signed / 2) sigma_a. Throws on hbar_signed == 0.
SpinTriple build_spin(double hbar_signed);

/// The time-reversal operator for spin-1/2: (sigma_y, antilinear).
GeneralOperator theta_operator();

/// Conjugates each component by K. Yields (s_x, -s_y, s_z): the commutation
/// relations flip sign, but the components do not all flip.
SpinTriple k_transform_spin(const SpinTriple& triple);

/// Conjugates each component by Theta = sigma_y K. Yields (-s_x, -s_y, -s_z),
/// the same triple build_spin produces for the negated hbar.
SpinTriple theta_transform_spin(const SpinTriple& triple);

/// Theta on a two-component spinor wavefunction, applied pointwise on the
/// grid: (up, down) -> (-i conj(down), i conj(up)). Norm preserved.
std::pair<Wavefunction, Wavefunction> spinor_theta(const Wavefunction& up,
                                                   const Wavefunction& down);

}  // namespace hbarsign
