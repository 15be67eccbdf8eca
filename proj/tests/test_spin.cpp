#include <doctest.h>

#include "hbarsign/spin.hpp"

#include <stdexcept>

namespace {

using hbarsign::Complex;
using hbarsign::ComplexMatrix;
using hbarsign::GeneralOperator;
using hbarsign::Grid;
using hbarsign::SpinTriple;
using hbarsign::StateVector;
using hbarsign::Wavefunction;

const Complex kI(0.0, 1.0);

double triple_distance(const SpinTriple& a, const SpinTriple& b) {
  double d = hbarsign::max_abs(a.sx.mat - b.sx.mat);
  d = std::max(d, hbarsign::max_abs(a.sy.mat - b.sy.mat));
  return std::max(d, hbarsign::max_abs(a.sz.mat - b.sz.mat));
}

// Residual of the full cyclic relation [s_a, s_b] = i hbar s_c.
double commutator_residual(const SpinTriple& s, double hbar_signed) {
  double r = hbarsign::max_abs(hbarsign::commutator(s.sx, s.sy).mat - kI * hbar_signed * s.sz.mat);
  r = std::max(r,
               hbarsign::max_abs(hbarsign::commutator(s.sy, s.sz).mat - kI * hbar_signed * s.sx.mat));
  return std::max(
      r, hbarsign::max_abs(hbarsign::commutator(s.sz, s.sx).mat - kI * hbar_signed * s.sy.mat));
}

}  // namespace

TEST_CASE("pauli matrices use the standard convention") {
  ComplexMatrix sy(2, 2);
  sy << 0, -kI, kI, 0;
  CHECK(hbarsign::max_abs(hbarsign::pauli_y() - sy) == 0.0);

  CHECK(hbarsign::max_abs(hbarsign::pauli_x() * hbarsign::pauli_y() -
                          kI * hbarsign::pauli_z()) == 0.0);
  CHECK(hbarsign::max_abs(hbarsign::pauli_x() * hbarsign::pauli_x() -
                          ComplexMatrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("build_spin scales the pauli triple by half hbar") {
  for (double hbar : {1.0, -1.0, 0.5}) {
    const SpinTriple s = hbarsign::build_spin(hbar);
    CHECK(hbarsign::max_abs(s.sx.mat - 0.5 * hbar * hbarsign::pauli_x()) == 0.0);
    CHECK(hbarsign::max_abs(s.sy.mat - 0.5 * hbar * hbarsign::pauli_y()) == 0.0);
    CHECK(hbarsign::max_abs(s.sz.mat - 0.5 * hbar * hbarsign::pauli_z()) == 0.0);
    CHECK(s.hbar_signed == hbar);
    CHECK(commutator_residual(s, hbar) < 1e-15);
  }
  CHECK_THROWS_AS(hbarsign::build_spin(0.0), std::invalid_argument);
}

TEST_CASE("theta squares to minus one") {
  const GeneralOperator theta = hbarsign::theta_operator();
  CHECK(!theta.is_linear());
  CHECK(hbarsign::antiunitarity_residual(theta) == 0.0);

  const GeneralOperator theta_sq = hbarsign::compose(theta, theta);
  CHECK(theta_sq.is_linear());
  CHECK(hbarsign::max_abs(theta_sq.mat + ComplexMatrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("K flips only the y component") {
  const SpinTriple s = hbarsign::build_spin(1.0);
  const SpinTriple k_s = hbarsign::k_transform_spin(s);

  CHECK(hbarsign::max_abs(k_s.sx.mat - s.sx.mat) == 0.0);
  CHECK(hbarsign::max_abs(k_s.sy.mat + s.sy.mat) == 0.0);
  CHECK(hbarsign::max_abs(k_s.sz.mat - s.sz.mat) == 0.0);
  CHECK(k_s.hbar_signed == -1.0);

  // The commutation relations flip sign even though two components survive.
  CHECK(commutator_residual(k_s, -1.0) < 1e-14);
}

TEST_CASE("theta flips every component") {
  const SpinTriple s = hbarsign::build_spin(1.0);
  const SpinTriple t_s = hbarsign::theta_transform_spin(s);

  CHECK(hbarsign::max_abs(t_s.sx.mat + s.sx.mat) == 0.0);
  CHECK(hbarsign::max_abs(t_s.sy.mat + s.sy.mat) == 0.0);
  CHECK(hbarsign::max_abs(t_s.sz.mat + s.sz.mat) == 0.0);
  CHECK(commutator_residual(t_s, -1.0) < 1e-14);
}

TEST_CASE("theta transform reproduces the flipped build; K does not") {
  const SpinTriple s = hbarsign::build_spin(1.0);
  const SpinTriple flipped = hbarsign::build_spin(-1.0);

  CHECK(triple_distance(hbarsign::theta_transform_spin(s), flipped) == 0.0);
  CHECK(triple_distance(hbarsign::k_transform_spin(s), flipped) > 0.5);
}

TEST_CASE("spinor theta acts pointwise and preserves the norm") {
  const Grid grid(16, 8.0);
  const Wavefunction up = hbarsign::make_gaussian(grid, -1.0, 0.5, 1.0);
  const Wavefunction down = hbarsign::make_gaussian(grid, 1.0, -0.5, 0.8);

  const auto [t_up, t_down] = hbarsign::spinor_theta(up, down);
  CHECK(hbarsign::max_abs(t_up.samples - (-kI * down.samples.conjugate())) == 0.0);
  CHECK(hbarsign::max_abs(t_down.samples - (kI * up.samples.conjugate())) == 0.0);

  const double norm_before = up.samples.squaredNorm() + down.samples.squaredNorm();
  const double norm_after = t_up.samples.squaredNorm() + t_down.samples.squaredNorm();
  CHECK(norm_after == doctest::Approx(norm_before).epsilon(1e-15));

  // Applying theta twice negates the spinor: Kramers' sign.
  const auto [tt_up, tt_down] = hbarsign::spinor_theta(t_up, t_down);
  CHECK(hbarsign::max_abs(tt_up.samples + up.samples) == 0.0);
  CHECK(hbarsign::max_abs(tt_down.samples + down.samples) == 0.0);

  const Wavefunction other(Grid(32, 8.0), StateVector::Zero(32));
  CHECK_THROWS_AS(hbarsign::spinor_theta(up, other), std::invalid_argument);
}
