#pragma once

#include "hbarsign/expr.hpp"
#include "hbarsign/grid1d.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbarsign {

/// Invalid configuration input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Built-in time modulation g(t) applied multiplicatively to a potential's
/// spatial profile: constant g = 1, ramp g = a + b*t, sinusoid
/// g = sin(omega*t + phase).
struct Modulation {
  enum class Form { constant, ramp, sinusoid };
  Form form = Form::constant;
  double a = 0.0;
  double b = 0.0;
  double omega = 1.0;
  double phase = 0.0;

  double factor(double t) const;
  bool time_dependent() const { return form != Form::constant; }
};

/// One potential entry: V(x, t) = expr(x) * modulation(t). The expression may
/// reference x and the scalar parameters m, e, c; p, hbar, and t are rejected
/// so that the spatial profile is real and sign-convention independent.
struct PotentialTerm {
  std::string expr = "0";
  Modulation modulation;
  AstPtr ast;

  double sample(double x, double t, const HamiltonianSpec& env) const;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = {"classical", "algebra", "grid",
                                                 "spin",      "mirror",  "crosscheck"};
  return names;
}

std::map<std::string, double> default_tolerances();

struct SuiteConfig {
  std::vector<std::string> suites = known_suites();
  std::uint64_t seed = 42;
  double hbar = 1.0;

  Eigen::Index grid_n = 256;
  double grid_length = 40.0;

  double packet_x0 = -2.0;
  double packet_p0 = 1.0;
  double packet_sigma = 1.0;

  double mass = 1.0;
  double charge = 1.0;
  double light_speed = 1.0;

  std::string hamiltonian = "p^2/(2*m) + e*Phi";
  PotentialTerm scalar_potential;
  PotentialTerm vector_potential;

  double dt = 1e-3;
  int steps = 500;

  std::map<std::string, double> tolerances = default_tolerances();

  static SuiteConfig defaults();
  static SuiteConfig from_json(const nlohmann::json& j);
  static SuiteConfig from_file(const std::string& path);

  /// Effective configuration, fully populated, for the report echo.
  nlohmann::json to_json() const;

  Grid make_grid() const { return Grid{grid_n, grid_length}; }
  Wavefunction make_packet(const Grid& grid, double hbar_signed) const;
  /// Spec with the requested sign of hbar; the potential callables are built
  /// from the expression texts and modulations and do not depend on the sign.
  HamiltonianSpec hamiltonian_spec(double hbar_signed) const;
  EvolutionParams evolution_params() const { return EvolutionParams{dt, steps}; }

  double tolerance(const std::string& name) const;
};

/// Rejects names outside known_suites(); preserves canonical order, drops
/// duplicates.
std::vector<std::string> validate_suites(const std::vector<std::string>& requested);

}  // namespace hbarsign
