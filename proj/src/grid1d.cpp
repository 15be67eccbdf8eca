#include "hbarsign/grid1d.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hbarsign {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

double sample_potential(const Potential& v, double x, double t, const char* name) {
  if (!v) return 0.0;
  const double value = v(x, t);
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << name << " returned non-finite value " << value << " at x=" << x << ", t=" << t;
    throw std::invalid_argument(os.str());
  }
  return value;
}

}  // namespace

Grid::Grid(Eigen::Index n_, double length_) : n(n_), length(length_) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two >= 8");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
}

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) x(j) = point(j);
  return x;
}

Wavefunction::Wavefunction(Grid g, StateVector s) : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.n) {
    throw std::invalid_argument("wavefunction sample count must match the grid");
  }
  if (!samples.allFinite()) throw std::invalid_argument("wavefunction has non-finite samples");
}

double Wavefunction::norm() const {
  return std::sqrt(samples.squaredNorm() * grid.spacing());
}

void HamiltonianSpec::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(light_speed > 0.0)) throw std::invalid_argument("light_speed must be positive");
  if (hbar_signed == 0.0 || !std::isfinite(hbar_signed)) {
    throw std::invalid_argument("hbar_signed must be nonzero and finite");
  }
}

void EvolutionParams::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
}

Eigen::MatrixXd spectral_derivative(const Grid& grid) {
  // Circulant first-derivative matrix for an even periodic grid,
  // D_jk = (pi/L) (-1)^(j-k) cot(pi (j-k)/n), zero diagonal. Real and
  // antisymmetric, so -i hbar D is hermitian to round-off and entrywise
  // conjugation flips its sign exactly.
  const Eigen::Index n = grid.n;
  Eigen::MatrixXd d(n, n);
  const double scale = kPi / grid.length;
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j, j) = 0.0;
    for (Eigen::Index k = 0; k < j; ++k) {
      const Eigen::Index m = j - k;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double value = scale * sign / std::tan(kPi * static_cast<double>(m) / n);
      d(j, k) = value;
      d(k, j) = -value;
    }
  }
  return d;
}

GeneralOperator build_position(const Grid& grid) {
  ComplexMatrix x = ComplexMatrix::Zero(grid.n, grid.n);
  for (Eigen::Index j = 0; j < grid.n; ++j) x(j, j) = grid.point(j);
  return {std::move(x), Parity::linear};
}

GeneralOperator build_momentum(const Grid& grid, double hbar_signed) {
  const Eigen::MatrixXd d = spectral_derivative(grid);
  ComplexMatrix p(grid.n, grid.n);
  p.real().setZero();
  p.imag() = -hbar_signed * d;
  return {std::move(p), Parity::linear};
}

Wavefunction apply_K(const Wavefunction& psi) {
  return {psi.grid, psi.samples.conjugate()};
}

HamiltonianBuilder::HamiltonianBuilder(Grid grid, HamiltonianSpec spec)
    : grid_(grid), spec_(std::move(spec)), deriv_(spectral_derivative(grid_)) {
  spec_.validate();
  Eigen::MatrixXd dsq = deriv_ * deriv_;
  deriv_squared_ = 0.5 * (dsq + dsq.transpose());  // exactly symmetric
}

ComplexMatrix HamiltonianBuilder::matrix(double t) const {
  const Eigen::Index n = grid_.n;
  const double hbar = spec_.hbar_signed;
  const double inv_2m = 0.5 / spec_.mass;

  Eigen::VectorXd a(n);
  Eigen::VectorXd phi(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = grid_.point(j);
    a(j) = (spec_.charge / spec_.light_speed) * sample_potential(spec_.vector_potential, x, t, "A");
    phi(j) = sample_potential(spec_.scalar_potential, x, t, "Phi");
  }

  // (i hbar D + a)^2 = -hbar^2 D^2 + i hbar (D a + a D) + a^2 with a = diag.
  // Real part even in hbar, imaginary part odd: negating hbar_signed yields
  // the entrywise conjugate bit-for-bit.
  Eigen::MatrixXd real_part = (-hbar * hbar) * deriv_squared_;
  real_part.diagonal() += a.cwiseProduct(a);
  real_part *= inv_2m;
  real_part.diagonal() += spec_.charge * phi;

  Eigen::MatrixXd imag_part = deriv_.array().rowwise() * a.transpose().array();  // D a
  imag_part.array() += deriv_.array().colwise() * a.array();                     // + a D
  imag_part *= hbar * inv_2m;

  ComplexMatrix h(n, n);
  h.real() = real_part;
  h.imag() = imag_part;
  return h;
}

GeneralOperator build_hamiltonian(const Grid& grid, const HamiltonianSpec& spec, double t) {
  return {HamiltonianBuilder(grid, spec).matrix(t), Parity::linear};
}

Wavefunction evolve(const Wavefunction& psi0, const HamiltonianSpec& spec,
                    const EvolutionParams& params, const StepObserver& observer) {
  spec.validate();
  params.validate();

  if (observer) observer(0, 0.0, psi0);
  if (params.steps == 0) return psi0;

  const HamiltonianBuilder builder(psi0.grid, spec);
  const Complex half_step(0.0, 0.5 * params.dt / spec.hbar_signed);

  Eigen::PartialPivLU<ComplexMatrix> lu;
  ComplexMatrix forward;  // I - i dt H / (2 hbar)
  const bool static_h = !spec.time_dependent_potentials;
  if (static_h) {
    const ComplexMatrix h = builder.matrix(0.5 * params.dt);
    forward = -half_step * h;
    forward.diagonal().array() += 1.0;
    ComplexMatrix backward = half_step * h;
    backward.diagonal().array() += 1.0;
    lu.compute(backward);
  }

  StateVector state = psi0.samples;
  for (int step = 0; step < params.steps; ++step) {
    const double t_mid = (static_cast<double>(step) + 0.5) * params.dt;
    if (!static_h) {
      const ComplexMatrix h = builder.matrix(t_mid);
      forward = -half_step * h;
      forward.diagonal().array() += 1.0;
      ComplexMatrix backward = half_step * h;
      backward.diagonal().array() += 1.0;
      lu.compute(backward);
    }
    state = lu.solve(forward * state);
    if (!state.allFinite()) {
      throw std::runtime_error("evolve: linear solve failed at step " + std::to_string(step));
    }
    if (observer) {
      observer(step + 1, static_cast<double>(step + 1) * params.dt,
               Wavefunction(psi0.grid, state));
    }
  }
  return {psi0.grid, std::move(state)};
}

Complex matrix_element(const Wavefunction& phi, const GeneralOperator& o,
                       const Wavefunction& psi) {
  if (!o.is_linear()) throw std::invalid_argument("matrix_element: operator must be linear");
  if (!(phi.grid == psi.grid)) throw std::invalid_argument("matrix_element: grid mismatch");
  if (o.dim() != psi.grid.n) throw std::invalid_argument("matrix_element: dimension mismatch");
  return phi.samples.dot(o.mat * psi.samples) * phi.grid.spacing();
}

double ccr_residual(const Grid& grid, double hbar_signed, const Wavefunction& psi,
                    double window) {
  if (!(psi.grid == grid)) throw std::invalid_argument("ccr_residual: grid mismatch");
  if (!(window > 0.0) || window > 1.0) {
    throw std::invalid_argument("ccr_residual: window must lie in (0, 1]");
  }

  const double half_window = 0.5 * window * grid.length;
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    if (std::abs(grid.point(j)) > half_window && std::abs(psi.samples(j)) >= 1e-8) {
      std::ostringstream os;
      os << "ccr_residual: |psi| = " << std::abs(psi.samples(j)) << " at x = " << grid.point(j)
         << " outside the central window; the commutator check needs interior support";
      throw std::invalid_argument(os.str());
    }
  }

  const GeneralOperator p = build_momentum(grid, hbar_signed);
  const StateVector x = grid.points().cast<Complex>();
  const StateVector p_psi = p.mat * psi.samples;
  const StateVector x_psi = x.cwiseProduct(psi.samples);
  const StateVector comm_psi = x.cwiseProduct(p_psi) - p.mat * x_psi;
  const StateVector residual = comm_psi - Complex(0, hbar_signed) * psi.samples;

  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    if (std::abs(grid.point(j)) <= half_window) {
      num += std::norm(residual(j));
      den += std::norm(hbar_signed * psi.samples(j));
    }
  }
  if (den == 0.0) throw std::invalid_argument("ccr_residual: psi vanishes on the window");
  return std::sqrt(num / den);
}

Wavefunction make_gaussian(const Grid& grid, double x0, double p0, double sigma,
                           double hbar_signed) {
  if (!(sigma > 0.0)) throw std::invalid_argument("make_gaussian: sigma must be positive");
  if (hbar_signed == 0.0) throw std::invalid_argument("make_gaussian: hbar must be nonzero");
  StateVector samples(grid.n);
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    const double dx = grid.point(j) - x0;
    const double envelope = std::exp(-dx * dx / (2.0 * sigma * sigma));
    const double phase = p0 * dx / hbar_signed;
    samples(j) = envelope * Complex(std::cos(phase), std::sin(phase));
  }
  Wavefunction psi(grid, std::move(samples));
  psi.samples /= psi.norm();
  return psi;
}

}  // namespace hbarsign
