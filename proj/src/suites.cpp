#include "hbarsign/suites.hpp"

#include "hbarsign/constants.hpp"
#include "hbarsign/oscillator.hpp"
#include "hbarsign/phase_space.hpp"
#include "hbarsign/spin.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace hbarsign {

namespace {

std::uint64_t check_seed(std::uint64_t seed, std::string_view id) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h ^ seed;
}

class Recorder {
 public:
  Recorder(const SuiteConfig& config, std::vector<CheckRecord>& out)
      : config_(config), out_(out) {}

  void add(const std::string& id, const std::string& equation, double residual,
           const std::string& tolerance_name) {
    const double tol = config_.tolerance(tolerance_name);
    out_.push_back({id, equation, residual, tol, residual < tol});
  }

  std::mt19937_64 rng(const std::string& id) const {
    return std::mt19937_64(check_seed(config_.seed, id));
  }

  const SuiteConfig& config() const { return config_; }

 private:
  const SuiteConfig& config_;
  std::vector<CheckRecord>& out_;
};

// ---------------------------------------------------------------- classical

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  return Rational(num(rng), den(rng));
}

PhasePolynomial random_polynomial(std::mt19937_64& rng, int dimension) {
  std::uniform_int_distribution<int> term_count(1, 4);
  std::uniform_int_distribution<unsigned> expo(0, 3);
  std::vector<Monomial> terms;
  const int count = term_count(rng);
  for (int k = 0; k < count; ++k) {
    ExponentVec e(2 * static_cast<size_t>(dimension), 0u);
    unsigned total = 0;
    for (auto& slot : e) {
      const unsigned value = expo(rng);
      slot = (total + value <= 3) ? value : 0u;
      total += slot;
    }
    terms.push_back({e, random_rational(rng)});
  }
  return PhasePolynomial::from_terms(dimension, terms);
}

double poly_max_coeff(const PhasePolynomial& poly) {
  double m = 0.0;
  for (const auto& [e, c] : poly.terms()) {
    m = std::max(m, std::abs(static_cast<double>(c)));
  }
  return m;
}

void run_classical(Recorder& rec) {
  {
    // {q_i, p_j} = delta_ij, {q_i, q_j} = {p_i, p_j} = 0, in d = 2.
    double residual = 0.0;
    const int d = 2;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const auto qi = PhasePolynomial::coordinate(d, i);
        const auto qj = PhasePolynomial::coordinate(d, j);
        const auto pi = PhasePolynomial::momentum(d, i);
        const auto pj = PhasePolynomial::momentum(d, j);
        const auto delta = PhasePolynomial::constant(d, i == j ? 1 : 0);
        residual = std::max(residual, poly_max_coeff(poisson_bracket(qi, pj) - delta));
        residual = std::max(residual, poly_max_coeff(poisson_bracket(qi, qj)));
        residual = std::max(residual, poly_max_coeff(poisson_bracket(pi, pj)));
      }
    }
    rec.add("classical.canonical_pairs", "Eq.1", residual, "exact");
  }
  {
    auto rng = rec.rng("classical.antisymmetry");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 1 + static_cast<int>(rng() % 2);
      const auto f = random_polynomial(rng, d);
      const auto g = random_polynomial(rng, d);
      residual = std::max(residual, poly_max_coeff(poisson_bracket(f, g) + poisson_bracket(g, f)));
    }
    rec.add("classical.antisymmetry", "Antisym", residual, "exact");
  }
  {
    auto rng = rec.rng("classical.linearity");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 1 + static_cast<int>(rng() % 2);
      const auto defect =
          bracket_bilinearity_residual(random_rational(rng), random_polynomial(rng, d),
                                       random_rational(rng), random_polynomial(rng, d),
                                       random_polynomial(rng, d));
      residual = std::max(residual, poly_max_coeff(defect));
    }
    rec.add("classical.linearity", "Linearity", residual, "exact");
  }
  {
    auto rng = rec.rng("classical.jacobi");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 1 + static_cast<int>(rng() % 2);
      const auto defect = jacobi_residual(random_polynomial(rng, d), random_polynomial(rng, d),
                                          random_polynomial(rng, d));
      residual = std::max(residual, poly_max_coeff(defect));
    }
    rec.add("classical.jacobi", "Jacobi", residual, "exact");
  }
  {
    // Leibniz rule {f, g h} = {f, g} h + g {f, h}: the bracket is a derivation.
    auto rng = rec.rng("classical.leibniz");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 1 + static_cast<int>(rng() % 2);
      const auto f = random_polynomial(rng, d);
      const auto g = random_polynomial(rng, d);
      const auto h = random_polynomial(rng, d);
      const auto defect =
          poisson_bracket(f, g * h) - poisson_bracket(f, g) * h - g * poisson_bracket(f, h);
      residual = std::max(residual, poly_max_coeff(defect));
    }
    rec.add("classical.leibniz", "Eq.1", residual, "exact");
  }
}

// ------------------------------------------------------------------ algebra

StateVector random_state(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  StateVector v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

ComplexMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix m = random_matrix(n, rng);
  return 0.5 * (m + m.adjoint());
}

double adjoint_defining_residual(const GeneralOperator& a, std::mt19937_64& rng, int trials) {
  const Eigen::Index n = a.mat.rows();
  const GeneralOperator a_dag = adjoint(a);
  double residual = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const StateVector phi = random_state(n, rng);
    const StateVector psi = random_state(n, rng);
    const Complex lhs = inner_product(phi, hbarsign::apply(a, psi));
    const Complex rhs = inner_product(hbarsign::apply(a_dag, phi), psi);
    const Complex expected = a.parity == Parity::linear ? rhs : std::conj(rhs);
    residual = std::max(residual, std::abs(lhs - expected));
  }
  return residual;
}

double antilinearity_residual(const GeneralOperator& a, std::mt19937_64& rng, int trials) {
  const Eigen::Index n = a.mat.rows();
  std::normal_distribution<double> gauss(0.0, 1.0);
  double residual = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const StateVector v1 = random_state(n, rng);
    const StateVector v2 = random_state(n, rng);
    const Complex c1(gauss(rng), gauss(rng));
    const Complex c2(gauss(rng), gauss(rng));
    const StateVector lhs = hbarsign::apply(a, StateVector(c1 * v1 + c2 * v2));
    const StateVector rhs =
        std::conj(c1) * hbarsign::apply(a, v1) + std::conj(c2) * hbarsign::apply(a, v2);
    residual = std::max(residual, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return residual;
}

void run_algebra(Recorder& rec) {
  const Eigen::Index n = 4;
  const GeneralOperator k4 = conjugation_op(n);
  const GeneralOperator theta = theta_operator();

  {
    auto rng = rec.rng("algebra.linear_adjoint");
    double residual = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      residual = std::max(residual,
                          adjoint_defining_residual(linear_op(random_matrix(n, rng)), rng, 1));
    }
    rec.add("algebra.linear_adjoint", "Eq.11", residual, "adjoint");
  }
  {
    auto rng = rec.rng("algebra.antilinear_adjoint_k");
    rec.add("algebra.antilinear_adjoint_k", "Eq.12", adjoint_defining_residual(k4, rng, 20),
            "adjoint");
  }
  {
    auto rng = rec.rng("algebra.antilinear_adjoint_theta");
    rec.add("algebra.antilinear_adjoint_theta", "Eq.12",
            adjoint_defining_residual(theta, rng, 20), "adjoint");
  }
  {
    auto rng = rec.rng("algebra.antilinear_adjoint_random");
    const GeneralOperator a = random_antiunitary(n, rng());
    rec.add("algebra.antilinear_adjoint_random", "Eq.12", adjoint_defining_residual(a, rng, 20),
            "adjoint");
  }
  {
    const GeneralOperator sy = antilinear_op(pauli_y());
    const GeneralOperator sy_dag = adjoint(sy);
    double residual = max_abs(ComplexMatrix(sy_dag.mat + pauli_y()));
    if (sy_dag.parity != Parity::antilinear) residual = 1.0;
    rec.add("algebra.adjoint_transpose_sigma_y", "Eq.12", residual, "exact");
  }
  {
    auto rng = rec.rng("algebra.antilinearity");
    double residual = antilinearity_residual(k4, rng, 20);
    residual = std::max(residual, antilinearity_residual(theta, rng, 20));
    residual = std::max(residual, antilinearity_residual(random_antiunitary(n, rng()), rng, 20));
    rec.add("algebra.antilinearity", "Eq.9", residual, "antilinearity");
  }
  rec.add("algebra.antiunitarity_k", "Eq.14", antiunitarity_residual(k4), "antiunitarity");
  rec.add("algebra.antiunitarity_theta", "Eq.14", antiunitarity_residual(theta), "antiunitarity");
  {
    auto rng = rec.rng("algebra.antiunitarity_random");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      residual = std::max(residual, antiunitarity_residual(random_antiunitary(n, rng())));
    }
    rec.add("algebra.antiunitarity_random", "Eq.14", residual, "antiunitarity");
  }
  {
    auto rng = rec.rng("algebra.parity_composition");
    double residual = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      for (const Parity pa : {Parity::linear, Parity::antilinear}) {
        for (const Parity pb : {Parity::linear, Parity::antilinear}) {
          const GeneralOperator a{random_matrix(n, rng), pa};
          const GeneralOperator b{random_matrix(n, rng), pb};
          const StateVector v = random_state(n, rng);
          const StateVector lhs = hbarsign::apply(compose(a, b), v);
          const StateVector rhs = hbarsign::apply(a, hbarsign::apply(b, v));
          residual = std::max(residual, (lhs - rhs).cwiseAbs().maxCoeff());
        }
      }
    }
    rec.add("algebra.parity_composition", "Eq.9", residual, "parity");
  }
  {
    auto rng = rec.rng("algebra.conjugation_homomorphism");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const GeneralOperator a =
          trial % 2 == 0 ? k4 : random_antiunitary(n, rng());
      const GeneralOperator o = linear_op(random_matrix(n, rng));
      const GeneralOperator p = linear_op(random_matrix(n, rng));
      const GeneralOperator lhs = conjugate_by(a, compose(o, p));
      const GeneralOperator rhs = compose(conjugate_by(a, o), conjugate_by(a, p));
      residual = std::max(residual, max_abs(ComplexMatrix(lhs.mat - rhs.mat)));
    }
    rec.add("algebra.conjugation_homomorphism", "Eq.12", residual, "parity");
  }
  {
    auto rng = rec.rng("algebra.matrix_element_conjugation");
    double residual = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const GeneralOperator a =
          trial % 2 == 0 ? k4 : random_antiunitary(n, rng());
      const GeneralOperator o = linear_op(random_hermitian(n, rng));
      const StateVector phi = random_state(n, rng);
      const StateVector psi = random_state(n, rng);
      const Complex lhs = inner_product(phi, o.mat * psi);
      const GeneralOperator o_t = conjugate_by(a, o);
      const Complex rhs = inner_product(hbarsign::apply(a, phi), o_t.mat * hbarsign::apply(a, psi));
      residual = std::max(residual, std::abs(lhs - std::conj(rhs)));
    }
    rec.add("algebra.matrix_element_conjugation", "Eq.26", residual, "matrix_element");
  }
  {
    auto rng = rec.rng("algebra.commutator_antisymmetry");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const GeneralOperator f = linear_op(random_matrix(n, rng));
      const GeneralOperator g = linear_op(random_matrix(n, rng));
      residual =
          std::max(residual, max_abs(ComplexMatrix(commutator(f, g).mat + commutator(g, f).mat)));
    }
    rec.add("algebra.commutator_antisymmetry", "Antisym", residual, "parity");
  }
  {
    auto rng = rec.rng("algebra.commutator_jacobi");
    double residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const GeneralOperator f = linear_op(random_matrix(n, rng));
      const GeneralOperator g = linear_op(random_matrix(n, rng));
      const GeneralOperator h = linear_op(random_matrix(n, rng));
      const ComplexMatrix defect = commutator(f, commutator(g, h)).mat +
                                   commutator(h, commutator(f, g)).mat +
                                   commutator(g, commutator(h, f)).mat;
      residual = std::max(residual, max_abs(defect));
    }
    rec.add("algebra.commutator_jacobi", "Jacobi", residual, "parity");
  }
  {
    const GeneralOperator theta_sq = compose(theta, theta);
    double residual = max_abs(ComplexMatrix(theta_sq.mat + ComplexMatrix::Identity(2, 2)));
    if (theta_sq.parity != Parity::linear) residual = 1.0;
    rec.add("algebra.kramers", "Eq.27", residual, "exact");
  }
}

// --------------------------------------------------------------------- grid

void run_grid(Recorder& rec) {
  const SuiteConfig& config = rec.config();
  const Grid grid = config.make_grid();
  const double hbar = config.hbar;
  const Wavefunction packet = config.make_packet(grid, hbar);
  const GeneralOperator x_op = build_position(grid);
  const GeneralOperator p_op = build_momentum(grid, hbar);
  const HamiltonianSpec spec = config.hamiltonian_spec(hbar);

  {
    const Eigen::MatrixXd d = spectral_derivative(grid);
    double residual = 0.0;
    for (const Eigen::Index mode : {Eigen::Index(1), Eigen::Index(3), grid.n / 4}) {
      const double k = 2.0 * M_PI * static_cast<double>(mode) / grid.length;
      StateVector wave(grid.n);
      for (Eigen::Index j = 0; j < grid.n; ++j) {
        wave(j) = std::exp(Complex(0.0, k * grid.point(j)));
      }
      const StateVector derived = d.cast<Complex>() * wave;
      const StateVector expected = Complex(0.0, k) * wave;
      residual = std::max(residual, (derived - expected).cwiseAbs().maxCoeff() / k);
    }
    rec.add("grid.spectral_plane_waves", "Eq.6", residual, "spectral");
  }
  rec.add("grid.momentum_hermitian", "Eq.6", max_abs(ComplexMatrix(p_op.mat - p_op.mat.adjoint())),
          "hermiticity");
  {
    // Closed-form derivative of the Gaussian packet as oracle.
    const double x0 = config.packet_x0;
    const double p0 = config.packet_p0;
    const double sigma = config.packet_sigma;
    StateVector expected(grid.n);
    for (Eigen::Index j = 0; j < grid.n; ++j) {
      const double x = grid.point(j);
      const Complex dlog(-(x - x0) / (sigma * sigma), p0 / hbar);
      expected(j) = Complex(0.0, -hbar) * dlog * packet.samples(j);
    }
    const StateVector derived = p_op.mat * packet.samples;
    const double residual = (derived - expected).norm() / expected.norm();
    rec.add("grid.momentum_gaussian_derivative", "Eq.6", residual, "derivative");
  }
  {
    const Wavefunction twice = apply_K(apply_K(packet));
    rec.add("grid.k_involution", "Eq.13",
            (twice.samples - packet.samples).cwiseAbs().maxCoeff(), "exact");
  }
  {
    const GeneralOperator k = conjugation_op(grid.n);
    const GeneralOperator x_k = conjugate_by(k, x_op);
    rec.add("grid.ktransform_position", "Eq.15", max_abs(ComplexMatrix(x_k.mat - x_op.mat)),
            "exact");
    const GeneralOperator p_k = conjugate_by(k, p_op);
    rec.add("grid.ktransform_momentum", "Eq.17", max_abs(ComplexMatrix(p_k.mat + p_op.mat)),
            "ktransform");
  }
  {
    const Wavefunction mirrored = apply_K(packet);
    const Complex x_fwd = matrix_element(packet, x_op, packet);
    const Complex x_mir = matrix_element(mirrored, x_op, mirrored);
    rec.add("grid.position_mean_invariant", "Eq.15", std::abs(x_fwd - x_mir), "matrix_element");
    const Complex p_fwd = matrix_element(packet, p_op, packet);
    const Complex p_mir = matrix_element(mirrored, p_op, mirrored);
    rec.add("grid.momentum_mean_flip", "Eq.17", std::abs(p_fwd + p_mir), "matrix_element");
  }
  rec.add("grid.ccr_positive", "Eq.5", ccr_residual(grid, std::abs(hbar), packet, 0.5), "ccr");
  rec.add("grid.ccr_negative", "Eq.19", ccr_residual(grid, -std::abs(hbar), packet, 0.5), "ccr");
  {
    const GeneralOperator h = build_hamiltonian(grid, spec, 0.0);
    rec.add("grid.hamiltonian_hermitian", "Eq.24", max_abs(ComplexMatrix(h.mat - h.mat.adjoint())),
            "hamiltonian_hermiticity");
    HamiltonianSpec flipped = spec;
    flipped.hbar_signed = -spec.hbar_signed;
    const GeneralOperator h_k = build_hamiltonian(grid, flipped, 0.0);
    const GeneralOperator h_conj = conjugate_by(conjugation_op(grid.n), h);
    rec.add("grid.hamiltonian_mirror", "Eq.25", max_abs(ComplexMatrix(h_k.mat - h_conj.mat)),
            "adjoint");
  }
  {
    // Harmonic preset: Phi = x^2/2 with m = omega = 1 on a finer grid, so the
    // spectral ground state energy |hbar|/2 is resolved to well below the
    // tolerance.
    const Grid fine(512, 20.0);
    HamiltonianSpec harmonic;
    harmonic.hbar_signed = hbar;
    harmonic.scalar_potential = [](double x, double) { return 0.5 * x * x; };
    const GeneralOperator h = build_hamiltonian(fine, harmonic, 0.0);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.mat);
    const double expected = 0.5 * std::abs(hbar);
    const double residual = std::abs(solver.eigenvalues()(0) - expected) / expected;
    rec.add("grid.ground_state", "Eq.24", residual, "ground_state");
  }
  {
    double drift = 0.0;
    const double base = packet.norm();
    evolve(packet, spec, config.evolution_params(),
           [&](int, double, const Wavefunction& psi) {
             drift = std::max(drift, std::abs(psi.norm() - base));
           });
    rec.add("grid.norm_conservation", "Eq.22", drift, "norm");
  }
  {
    // Free-packet Ehrenfest preset: <x>(T) = x0 + p0 T / m.
    const Grid fine(512, 40.0);
    HamiltonianSpec free_spec;
    free_spec.hbar_signed = hbar;
    const Wavefunction psi0 = make_gaussian(fine, -2.0, 1.0, 1.0, hbar);
    const EvolutionParams params{1e-3, 2000};
    const Wavefunction psi_t = evolve(psi0, free_spec, params);
    const GeneralOperator x_fine = build_position(fine);
    const double mean = matrix_element(psi_t, x_fine, psi_t).real();
    const double expected = -2.0 + 1.0 * params.dt * params.steps / free_spec.mass;
    rec.add("grid.ehrenfest_free", "Eq.22", std::abs(mean - expected), "ehrenfest");
  }
  {
    const CompiledOperator kinetic = compile("p^2/(2*m)", grid, spec);
    const ComplexMatrix expected = (p_op.mat * p_op.mat) / (2.0 * spec.mass);
    rec.add("grid.expr_kinetic", "Eq.24", max_abs(ComplexMatrix(kinetic.op.mat - expected)),
            "adjoint");
  }
  {
    HamiltonianSpec flipped = spec;
    flipped.hbar_signed = -spec.hbar_signed;
    const CompiledOperator fwd = compile(config.hamiltonian, grid, spec);
    const CompiledOperator mir = compile(config.hamiltonian, grid, flipped);
    const GeneralOperator conjugated = conjugate_by(conjugation_op(grid.n), fwd.op);
    rec.add("grid.expr_covariance", "Eq.25", max_abs(ComplexMatrix(mir.op.mat - conjugated.mat)),
            "covariance");
  }
}

// --------------------------------------------------------------------- spin

double triple_commutator_residual(const SpinTriple& triple) {
  const Complex factor(0.0, triple.hbar_signed);
  double residual = 0.0;
  residual = std::max(residual, max_abs(ComplexMatrix(commutator(triple.sx, triple.sy).mat -
                                                      factor * triple.sz.mat)));
  residual = std::max(residual, max_abs(ComplexMatrix(commutator(triple.sy, triple.sz).mat -
                                                      factor * triple.sx.mat)));
  residual = std::max(residual, max_abs(ComplexMatrix(commutator(triple.sz, triple.sx).mat -
                                                      factor * triple.sy.mat)));
  return residual;
}

double triple_distance(const SpinTriple& a, const SpinTriple& b) {
  double d = 0.0;
  d = std::max(d, max_abs(ComplexMatrix(a.sx.mat - b.sx.mat)));
  d = std::max(d, max_abs(ComplexMatrix(a.sy.mat - b.sy.mat)));
  d = std::max(d, max_abs(ComplexMatrix(a.sz.mat - b.sz.mat)));
  return d;
}

void run_spin(Recorder& rec) {
  const double hbar = rec.config().hbar;
  const SpinTriple spin = build_spin(hbar);
  const SpinTriple flipped = build_spin(-hbar);
  const SpinTriple k_spin = k_transform_spin(spin);
  const SpinTriple theta_spin = theta_transform_spin(spin);

  rec.add("spin.commutators", "Eq.27", triple_commutator_residual(spin), "spin");
  {
    double residual = 0.0;
    residual = std::max(residual, max_abs(ComplexMatrix(k_spin.sx.mat - spin.sx.mat)));
    residual = std::max(residual, max_abs(ComplexMatrix(k_spin.sy.mat + spin.sy.mat)));
    residual = std::max(residual, max_abs(ComplexMatrix(k_spin.sz.mat - spin.sz.mat)));
    rec.add("spin.k_signs", "Eq.28", residual, "exact");
  }
  rec.add("spin.k_commutators", "Eq.28", triple_commutator_residual(k_spin), "spin");
  {
    double residual = 0.0;
    residual = std::max(residual, max_abs(ComplexMatrix(theta_spin.sx.mat + spin.sx.mat)));
    residual = std::max(residual, max_abs(ComplexMatrix(theta_spin.sy.mat + spin.sy.mat)));
    residual = std::max(residual, max_abs(ComplexMatrix(theta_spin.sz.mat + spin.sz.mat)));
    rec.add("spin.theta_flip", "Eq.29", residual, "exact");
  }
  rec.add("spin.theta_commutators", "Eq.29", triple_commutator_residual(theta_spin), "spin");
  rec.add("spin.theta_equals_flipped_build", "Eq.29", triple_distance(theta_spin, flipped),
          "exact");
  {
    // The K triple must NOT coincide with the flipped-hbar build; the record
    // passes when their distance stays macroscopic.
    const double distance = triple_distance(k_spin, flipped);
    rec.add("spin.k_differs_from_flipped_build", "Eq.28",
            distance > 0.5 * std::abs(hbar) ? 0.0 : 1.0, "exact");
  }
  {
    auto rng = rec.rng("spin.spinor_theta_involution");
    const Grid small(8, 10.0);
    const Wavefunction up(small, random_state(small.n, rng));
    const Wavefunction down(small, random_state(small.n, rng));
    const auto [up1, down1] = spinor_theta(up, down);
    const auto [up2, down2] = spinor_theta(up1, down1);
    double residual = (up2.samples + up.samples).cwiseAbs().maxCoeff();
    residual = std::max(residual, (down2.samples + down.samples).cwiseAbs().maxCoeff());
    rec.add("spin.spinor_theta_involution", "Eq.27", residual, "exact");

    const double before = up.samples.squaredNorm() + down.samples.squaredNorm();
    const double after = up1.samples.squaredNorm() + down1.samples.squaredNorm();
    rec.add("spin.spinor_theta_norm", "Eq.27", std::abs(after - before), "exact");
  }
}

// ------------------------------------------------------------------- mirror

struct RunSummary {
  Wavefunction final_state;
  double x_mean = 0.0;
  double p_mean = 0.0;
  double energy = 0.0;
  double norm_drift = 0.0;
};

// x_mean and p_mean are measured in the fixed forward sign convention
// (observable_hbar) for both worlds, so the mirror trajectory exhibits the
// reversed average momentum explicitly. The energy uses each world's own
// Hamiltonian; the mirror identity makes the two real parts coincide.
RunSummary summarize_run(const Grid& grid, const Wavefunction& psi0, const HamiltonianSpec& spec,
                         const EvolutionParams& params, double observable_hbar) {
  const double base = psi0.norm();
  double drift = 0.0;
  Wavefunction psi_t = evolve(psi0, spec, params, [&](int, double, const Wavefunction& psi) {
    drift = std::max(drift, std::abs(psi.norm() - base));
  });
  const GeneralOperator x_op = build_position(grid);
  const GeneralOperator p_op = build_momentum(grid, observable_hbar);
  const double t_final = params.dt * params.steps;
  const GeneralOperator h = build_hamiltonian(grid, spec, t_final);
  RunSummary out{std::move(psi_t), 0.0, 0.0, 0.0, drift};
  out.x_mean = matrix_element(out.final_state, x_op, out.final_state).real();
  out.p_mean = matrix_element(out.final_state, p_op, out.final_state).real();
  out.energy = matrix_element(out.final_state, h, out.final_state).real();
  return out;
}

void run_mirror_scenario(Recorder& rec, const std::string& name, const Grid& grid,
                         const Wavefunction& psi0, const HamiltonianSpec& forward,
                         const EvolutionParams& params) {
  HamiltonianSpec mirrored = forward;
  mirrored.hbar_signed = -forward.hbar_signed;

  const RunSummary fwd = summarize_run(grid, psi0, forward, params, forward.hbar_signed);
  const RunSummary mir = summarize_run(grid, apply_K(psi0), mirrored, params, forward.hbar_signed);

  const Wavefunction conjugated = apply_K(fwd.final_state);
  const Wavefunction diff(grid, StateVector(mir.final_state.samples - conjugated.samples));
  rec.add("mirror." + name + ".state_distance", "Eq.23", diff.norm(), "mirror");
  rec.add("mirror." + name + ".x_mean", "Eq.26", std::abs(fwd.x_mean - mir.x_mean), "signflip");
  rec.add("mirror." + name + ".p_mean", "Eq.26", std::abs(fwd.p_mean + mir.p_mean), "signflip");
  rec.add("mirror." + name + ".energy", "Eq.26", std::abs(fwd.energy - mir.energy), "signflip");
  rec.add("mirror." + name + ".norm", "Eq.22", std::max(fwd.norm_drift, mir.norm_drift), "norm");
}

void run_mirror(Recorder& rec) {
  const SuiteConfig& config = rec.config();
  {
    const Grid grid = config.make_grid();
    run_mirror_scenario(rec, "configured", grid, config.make_packet(grid, config.hbar),
                        config.hamiltonian_spec(config.hbar), config.evolution_params());
  }
  {
    const Grid grid(256, 40.0);
    HamiltonianSpec spec;
    spec.hbar_signed = config.hbar;
    spec.scalar_potential = [](double x, double) { return 0.5 * x * x; };
    run_mirror_scenario(rec, "harmonic", grid, make_gaussian(grid, -2.0, 1.0, 1.0, config.hbar),
                        spec, EvolutionParams{1e-3, 500});
  }
  {
    const Grid grid(128, 30.0);
    HamiltonianSpec spec;
    spec.hbar_signed = config.hbar;
    spec.scalar_potential = [](double x, double) { return 0.25 * x * x; };
    const double k = 2.0 * M_PI / 30.0;
    spec.vector_potential = [k](double x, double t) {
      return 0.3 * std::cos(k * x) * std::sin(1.5 * t);
    };
    spec.time_dependent_potentials = true;
    run_mirror_scenario(rec, "sinusoidal", grid, make_gaussian(grid, -2.0, 1.0, 1.0, config.hbar),
                        spec, EvolutionParams{1e-3, 500});
  }
}

// --------------------------------------------------------------- crosscheck

void run_crosscheck(Recorder& rec) {
  const double hbar = std::abs(rec.config().hbar);
  const Eigen::Index n = 200;
  const double window = 0.9;

  const PhasePolynomial q = PhasePolynomial::coordinate(1, 0);
  const PhasePolynomial p = PhasePolynomial::momentum(1, 0);
  const std::vector<std::pair<std::string, PhasePolynomial>> basis = {
      {"one", PhasePolynomial::constant(1, 1)}, {"q", q},     {"p", p},
      {"q2", q * q},                            {"p2", p * p}, {"qp", q * p},
  };

  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = i + 1; j < basis.size(); ++j) {
      const auto& [fname, f] = basis[i];
      const auto& [gname, g] = basis[j];
      const PhasePolynomial bracket = poisson_bracket(f, g);
      double residual = 0.0;
      for (const double h : {hbar, -hbar}) {
        const GeneralOperator qf = quantize(f, n, h);
        const GeneralOperator qg = quantize(g, n, h);
        const GeneralOperator qb = quantize(bracket, n, h);
        const ComplexMatrix defect = commutator(qf, qg).mat - Complex(0.0, h) * qb.mat;
        residual = std::max(residual, interior_max_abs(defect, window));
      }
      rec.add("crosscheck." + fname + "_" + gname, "Eq.2", residual, "crosscheck");
    }
  }
  {
    // Conjugating the quantized operators by K realizes the flipped-sign
    // quantization map on the oscillator representation.
    const GeneralOperator k = conjugation_op(n);
    double residual = 0.0;
    for (const auto& entry : basis) {
      const GeneralOperator plus = quantize(entry.second, n, hbar);
      const GeneralOperator minus = quantize(entry.second, n, -hbar);
      const GeneralOperator mapped = conjugate_by(k, plus);
      residual = std::max(residual, max_abs(ComplexMatrix(mapped.mat - minus.mat)));
    }
    rec.add("crosscheck.k_mapped", "Eq.2", residual, "crosscheck");
  }
}

}  // namespace

VerificationReport run_verify(const SuiteConfig& config) {
  VerificationReport report;
  report.version = kToolkitVersion;
  report.seed = config.seed;

  Recorder rec(config, report.checks);
  for (const auto& suite : config.suites) {
    if (suite == "classical") {
      run_classical(rec);
    } else if (suite == "algebra") {
      run_algebra(rec);
    } else if (suite == "grid") {
      run_grid(rec);
    } else if (suite == "spin") {
      run_spin(rec);
    } else if (suite == "mirror") {
      run_mirror(rec);
    } else if (suite == "crosscheck") {
      run_crosscheck(rec);
    }
  }
  return report;
}

// ------------------------------------------------------------------- evolve

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct TrajectoryRow {
  int step;
  double t;
  double re_norm;
  double x_mean;
  double p_mean;
  double energy;
};

std::vector<TrajectoryRow> record_trajectory(const Grid& grid, const Wavefunction& psi0,
                                             const HamiltonianSpec& spec,
                                             const EvolutionParams& params,
                                             double observable_hbar) {
  const GeneralOperator x_op = build_position(grid);
  const GeneralOperator p_op = build_momentum(grid, observable_hbar);
  HamiltonianBuilder builder(grid, spec);
  std::vector<TrajectoryRow> rows;
  rows.reserve(static_cast<size_t>(params.steps) + 1);
  evolve(psi0, spec, params, [&](int step, double t, const Wavefunction& psi) {
    TrajectoryRow row;
    row.step = step;
    row.t = t;
    row.re_norm = psi.norm();
    row.x_mean = matrix_element(psi, x_op, psi).real();
    row.p_mean = matrix_element(psi, p_op, psi).real();
    const GeneralOperator h = linear_op(builder.matrix(t));
    row.energy = matrix_element(psi, h, psi).real();
    rows.push_back(row);
  });
  return rows;
}

void write_trajectory(const std::string& path, const std::vector<TrajectoryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "step,t,re_norm,x_mean,p_mean,energy\n";
  for (const auto& row : rows) {
    out << row.step << ',' << fmt17(row.t) << ',' << fmt17(row.re_norm) << ','
        << fmt17(row.x_mean) << ',' << fmt17(row.p_mean) << ',' << fmt17(row.energy) << '\n';
  }
}

}  // namespace

void run_evolve(const SuiteConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "'");

  const Grid grid = config.make_grid();
  const Wavefunction psi0 = config.make_packet(grid, config.hbar);
  const HamiltonianSpec forward = config.hamiltonian_spec(config.hbar);
  HamiltonianSpec mirrored = forward;
  mirrored.hbar_signed = -forward.hbar_signed;
  const EvolutionParams params = config.evolution_params();

  const auto forward_rows = record_trajectory(grid, psi0, forward, params, forward.hbar_signed);
  const auto mirror_rows =
      record_trajectory(grid, apply_K(psi0), mirrored, params, forward.hbar_signed);

  write_trajectory((fs::path(out_dir) / "forward.csv").string(), forward_rows);
  write_trajectory((fs::path(out_dir) / "mirror.csv").string(), mirror_rows);

  const std::string deltas_path = (fs::path(out_dir) / "deltas.csv").string();
  std::ofstream deltas(deltas_path);
  if (!deltas) throw std::runtime_error("cannot write '" + deltas_path + "'");
  deltas << "step,t,abs_x_mean_diff,abs_p_mean_sum\n";
  for (size_t i = 0; i < forward_rows.size(); ++i) {
    const auto& f = forward_rows[i];
    const auto& m = mirror_rows[i];
    deltas << f.step << ',' << fmt17(f.t) << ',' << fmt17(std::abs(f.x_mean - m.x_mean)) << ','
           << fmt17(std::abs(f.p_mean + m.p_mean)) << '\n';
  }
}

std::string constants_text(double hbar_signed) {
  char si[40];
  std::snprintf(si, sizeof(si), "%.4g", kHbarSI);
  std::ostringstream out;
  out << "hbar (SI):      " << si << " J*s\n";
  out << "hbar (natural): " << fmt17(std::abs(hbar_signed)) << "\n";
  out << "active sign:    " << (hbar_signed >= 0.0 ? "+1" : "-1") << "\n";
  out << "The quantization condition reads [q, p] = i * hbar_signed with\n";
  out << "hbar_signed = sign * |hbar|. Flipping the sign is equivalent to\n";
  out << "conjugating every state and observable by K and leaves all\n";
  out << "measurable quantities unchanged.\n";
  return out.str();
}

}  // namespace hbarsign
