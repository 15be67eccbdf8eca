#pragma once

#include "hbarsign/op_algebra.hpp"
#include "hbarsign/phase_space.hpp"

namespace hbarsign {

/// Lowering operator a on an n-level number basis: a|k> = sqrt(k)|k-1>.
Eigen::MatrixXd ladder_lowering(Eigen::Index n);

/// Position and momentum in the n-level oscillator-truncated basis (m = omega
/// = 1). The signed hbar rides on the momentum prefactor, so
/// [x, p] = i hbar_signed holds on the interior of the basis for either sign
/// and negating hbar_signed conjugates the pair entrywise.
GeneralOperator oscillator_position(Eigen::Index n, double hbar_signed);
GeneralOperator oscillator_momentum(Eigen::Index n, double hbar_signed);

/// Quantization of a classical polynomial on the truncated basis. Supports
/// d = 1 and total degree <= 2 (the span of 1, q, p, q^2, p^2, qp); the mixed
/// term maps to the symmetrized product (xp + px)/2. Anything beyond
/// quadratics is rejected: there the correspondence with the classical
/// bracket genuinely breaks down and no quantization rule is offered.
GeneralOperator quantize(const PhasePolynomial& f, Eigen::Index n, double hbar_signed);

/// Max |entry| over the leading block of `fraction` * dim rows/cols. The
/// truncation corrupts a commutator only near the basis cutoff, so identities
/// are measured on this interior window.
double interior_max_abs(const ComplexMatrix& m, double fraction);

}  // namespace hbarsign
