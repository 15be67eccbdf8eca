#pragma once

#include "hbarsign/op_algebra.hpp"

#include <functional>

namespace hbarsign {

/// Uniform periodic 1D grid: n points x_j = -L/2 + j dx, dx = L/n.
/// n must be a power of two, n >= 8.
struct Grid {
  Eigen::Index n = 0;
  double length = 0.0;

  Grid(Eigen::Index n_, double length_);

  double spacing() const { return length / static_cast<double>(n); }
  double point(Eigen::Index j) const { return -0.5 * length + static_cast<double>(j) * spacing(); }
  Eigen::VectorXd points() const;

  bool operator==(const Grid& rhs) const { return n == rhs.n && length == rhs.length; }
};

/// Complex samples psi(x_j) on a Grid.
struct Wavefunction {
  Grid grid;
  StateVector samples;

  Wavefunction(Grid g, StateVector s);

  /// sqrt(sum |psi_j|^2 dx)
  double norm() const;
};

/// Potential callable, evaluated as V(x, t). Must return finite values on the
/// grid and be re-entrant.
using Potential = std::function<double(double x, double t)>;

/// Parameters of the one-dimensional electromagnetic Hamiltonian
///   H = 1/(2m) (i hbar d/dx + (e/c) A(x,t))^2 + e Phi(x,t).
/// hbar_signed carries the sign convention: negating it yields exactly the
/// conjugated partner Hamiltonian, with the potentials held fixed.
/// Null potentials mean identically zero. `time_dependent_potentials` tells
/// the propagator whether it may factor the step matrix once; set it whenever
/// either potential actually varies with t.
struct HamiltonianSpec {
  double mass = 1.0;
  double charge = 1.0;
  double light_speed = 1.0;
  double hbar_signed = 1.0;
  Potential scalar_potential;  // Phi(x, t)
  Potential vector_potential;  // A(x, t)
  bool time_dependent_potentials = false;

  void validate() const;
};

/// Crank-Nicolson stepping parameters. steps == 0 is a no-op evolution.
struct EvolutionParams {
  double dt = 1e-3;
  int steps = 1;

  void validate() const;
};

/// Real antisymmetric spectral differentiation matrix for the periodic grid;
/// exact on grid-commensurate plane waves (Nyquist mode mapped to zero).
Eigen::MatrixXd spectral_derivative(const Grid& grid);

/// diag(x_j), hermitian, linear.
GeneralOperator build_position(const Grid& grid);

/// p = -i hbar_signed D with D the spectral derivative; hermitian because D
/// is real antisymmetric.
GeneralOperator build_momentum(const Grid& grid, double hbar_signed);

/// K on wavefunctions: entrywise conjugation. Norm preserved exactly.
Wavefunction apply_K(const Wavefunction& psi);

/// Assembles H(t) for a fixed grid, reusing the O(n^3) spectral pieces so a
/// time-dependent assembly costs O(n^2) per call.
class HamiltonianBuilder {
 public:
  HamiltonianBuilder(Grid grid, HamiltonianSpec spec);

  ComplexMatrix matrix(double t) const;
  const Grid& grid() const { return grid_; }
  const HamiltonianSpec& spec() const { return spec_; }

 private:
  Grid grid_;
  HamiltonianSpec spec_;
  Eigen::MatrixXd deriv_;         // D
  Eigen::MatrixXd deriv_squared_; // D^2, symmetrized
};

/// One-shot H(t); hermitian. Building with hbar_signed negated and the same
/// potentials returns exactly the entrywise conjugate.
GeneralOperator build_hamiltonian(const Grid& grid, const HamiltonianSpec& spec, double t);

/// Called with (step, t, psi) after each accepted state, starting with the
/// initial state at step 0.
using StepObserver = std::function<void(int step, double t, const Wavefunction& psi)>;

/// Crank-Nicolson propagation of i hbar_signed dpsi/dt = H psi from t = 0:
/// (I + i dt H(t_mid)/(2 hbar)) psi_{k+1} = (I - i dt H(t_mid)/(2 hbar)) psi_k
/// with the potentials evaluated at the step midpoint. The sign of the
/// time-derivative term rides on spec.hbar_signed, so the same routine
/// realizes the evolution and its conjugated mirror. Norm-preserving for
/// hermitian H.
Wavefunction evolve(const Wavefunction& psi0, const HamiltonianSpec& spec,
                    const EvolutionParams& params, const StepObserver& observer = {});

/// (phi, O psi) = sum_j conj(phi_j) (O psi)_j dx. O must be linear.
Complex matrix_element(const Wavefunction& phi, const GeneralOperator& o,
                       const Wavefunction& psi);

/// Relative L2 error, over the central `window` fraction of the grid, of
/// ([x, p] psi - i hbar_signed psi). Requires |psi| < 1e-8 outside the
/// window: the canonical commutator only holds as an action on states that
/// stay clear of the periodic boundary, never as a finite matrix identity.
double ccr_residual(const Grid& grid, double hbar_signed, const Wavefunction& psi,
                    double window);

/// Normalized Gaussian packet exp(-(x-x0)^2/(2 sigma^2) + i p0 (x-x0)/hbar).
Wavefunction make_gaussian(const Grid& grid, double x0, double p0, double sigma,
                           double hbar_signed = 1.0);

}  // namespace hbarsign
