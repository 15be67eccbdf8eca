#include "hbarsign/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hbarsign {

double Modulation::factor(double t) const {
  switch (form) {
    case Form::constant:
      return 1.0;
    case Form::ramp:
      return a + b * t;
    case Form::sinusoid:
      return std::sin(omega * t + phase);
  }
  return 1.0;
}

double PotentialTerm::sample(double x, double t, const HamiltonianSpec& env) const {
  return evaluate_at(*ast, x, env, 0.0) * modulation.factor(t);
}

std::map<std::string, double> default_tolerances() {
  return {
      {"adjoint", 1e-12},
      {"antilinearity", 1e-12},
      {"antiunitarity", 1e-12},
      {"parity", 1e-12},
      {"exact", 1e-15},
      {"ktransform", 1e-10},
      {"hermiticity", 1e-10},
      {"hamiltonian_hermiticity", 1e-9},
      {"spectral", 1e-12},
      {"derivative", 1e-8},
      {"ccr", 1e-6},
      {"norm", 1e-10},
      {"ground_state", 1e-6},
      {"ehrenfest", 1e-4},
      {"mirror", 1e-8},
      {"signflip", 1e-8},
      {"matrix_element", 1e-10},
      {"spin", 1e-14},
      {"crosscheck", 1e-6},
      {"covariance", 1e-10},
  };
}

std::vector<std::string> validate_suites(const std::vector<std::string>& requested) {
  for (const auto& name : requested) {
    if (std::find(known_suites().begin(), known_suites().end(), name) == known_suites().end()) {
      throw ConfigError("unknown suite '" + name + "'");
    }
  }
  std::vector<std::string> ordered;
  for (const auto& name : known_suites()) {
    if (std::find(requested.begin(), requested.end(), name) != requested.end()) {
      ordered.push_back(name);
    }
  }
  if (ordered.empty()) throw ConfigError("no suites selected");
  return ordered;
}

namespace {

void check_known_keys(const nlohmann::json& obj, const char* where,
                      std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* k : known) {
      if (it.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
    }
  }
}

double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
  return v;
}

double get_number(const nlohmann::json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return require_finite(v.get<double>(), key);
}

Modulation parse_modulation(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("'modulation' must be an object");
  check_known_keys(j, "modulation", {"form", "a", "b", "omega", "phase"});
  Modulation mod;
  const std::string form = j.value("form", std::string("constant"));
  if (form == "constant") {
    mod.form = Modulation::Form::constant;
  } else if (form == "ramp") {
    mod.form = Modulation::Form::ramp;
  } else if (form == "sinusoid") {
    mod.form = Modulation::Form::sinusoid;
  } else {
    throw ConfigError("unknown modulation form '" + form + "'");
  }
  mod.a = get_number(j, "a", 0.0);
  mod.b = get_number(j, "b", 0.0);
  mod.omega = get_number(j, "omega", 1.0);
  mod.phase = get_number(j, "phase", 0.0);
  return mod;
}

void validate_potential_ast(const ExprAst& ast, const std::string& text) {
  if (!is_position_only(ast)) {
    throw ConfigError("potential '" + text + "' must not reference p");
  }
  // Walk for identifiers outside {x, m, e, c}: the spatial profile must be
  // real-valued and independent of both the time variable and the hbar sign
  // convention, so the mirror Hamiltonian reuses it verbatim.
  std::function<void(const ExprAst&)> walk = [&](const ExprAst& node) {
    if (node.kind == ExprAst::Kind::parameter && node.name != "m" && node.name != "e" &&
        node.name != "c") {
      throw ConfigError("potential '" + text + "' may not reference '" + node.name +
                        "' (allowed: x, m, e, c; time dependence comes from the modulation)");
    }
    for (const auto& child : node.children) walk(*child);
  };
  walk(ast);
}

PotentialTerm parse_potential(const nlohmann::json& j, const char* name) {
  PotentialTerm term;
  if (j.is_string()) {
    term.expr = j.get<std::string>();
  } else if (j.is_object()) {
    check_known_keys(j, name, {"expr", "modulation"});
    if (j.contains("expr")) {
      if (!j.at("expr").is_string()) throw ConfigError("potential 'expr' must be a string");
      term.expr = j.at("expr").get<std::string>();
    }
    if (j.contains("modulation")) term.modulation = parse_modulation(j.at("modulation"));
  } else {
    throw ConfigError(std::string("potential '") + name +
                      "' must be a string or an object with expr/modulation");
  }
  try {
    term.ast = parse_expression(term.expr);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("potential '") + name + "': " + e.what());
  }
  validate_potential_ast(*term.ast, term.expr);
  return term;
}

nlohmann::json modulation_to_json(const Modulation& mod) {
  nlohmann::json j;
  switch (mod.form) {
    case Modulation::Form::constant:
      j["form"] = "constant";
      break;
    case Modulation::Form::ramp:
      j["form"] = "ramp";
      j["a"] = mod.a;
      j["b"] = mod.b;
      break;
    case Modulation::Form::sinusoid:
      j["form"] = "sinusoid";
      j["omega"] = mod.omega;
      j["phase"] = mod.phase;
      break;
  }
  return j;
}

}  // namespace

SuiteConfig SuiteConfig::defaults() {
  SuiteConfig config;
  config.scalar_potential.ast = parse_expression(config.scalar_potential.expr);
  config.vector_potential.ast = parse_expression(config.vector_potential.expr);
  return config;
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_known_keys(j, "config", {"suites", "seed", "hbar", "grid", "packet", "particle",
                                 "hamiltonian", "potentials", "evolution", "tolerances"});
  SuiteConfig config = defaults();

  if (j.contains("suites")) {
    if (!j.at("suites").is_array()) throw ConfigError("'suites' must be an array of names");
    std::vector<std::string> requested;
    for (const auto& item : j.at("suites")) {
      if (!item.is_string()) throw ConfigError("'suites' entries must be strings");
      requested.push_back(item.get<std::string>());
    }
    config.suites = validate_suites(requested);
  }

  if (j.contains("seed")) {
    const auto& seed = j.at("seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      throw ConfigError("'seed' must be an integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }

  config.hbar = get_number(j, "hbar", config.hbar);
  if (config.hbar == 0.0) throw ConfigError("'hbar' must be nonzero");

  if (j.contains("grid")) {
    const auto& grid = j.at("grid");
    if (!grid.is_object()) throw ConfigError("'grid' must be an object");
    check_known_keys(grid, "grid", {"n", "length"});
    if (grid.contains("n")) {
      if (!grid.at("n").is_number_integer() && !grid.at("n").is_number_unsigned()) {
        throw ConfigError("grid 'n' must be an integer");
      }
      config.grid_n = grid.at("n").get<Eigen::Index>();
    }
    config.grid_length = get_number(grid, "length", config.grid_length);
  }

  if (j.contains("packet")) {
    const auto& packet = j.at("packet");
    if (!packet.is_object()) throw ConfigError("'packet' must be an object");
    check_known_keys(packet, "packet", {"x0", "p0", "sigma"});
    config.packet_x0 = get_number(packet, "x0", config.packet_x0);
    config.packet_p0 = get_number(packet, "p0", config.packet_p0);
    config.packet_sigma = get_number(packet, "sigma", config.packet_sigma);
    if (config.packet_sigma <= 0.0) throw ConfigError("packet 'sigma' must be positive");
  }

  if (j.contains("particle")) {
    const auto& particle = j.at("particle");
    if (!particle.is_object()) throw ConfigError("'particle' must be an object");
    check_known_keys(particle, "particle", {"mass", "charge", "light_speed"});
    config.mass = get_number(particle, "mass", config.mass);
    config.charge = get_number(particle, "charge", config.charge);
    config.light_speed = get_number(particle, "light_speed", config.light_speed);
    if (config.mass <= 0.0) throw ConfigError("'mass' must be positive");
    if (config.light_speed <= 0.0) throw ConfigError("'light_speed' must be positive");
  }

  if (j.contains("hamiltonian")) {
    if (!j.at("hamiltonian").is_string()) throw ConfigError("'hamiltonian' must be a string");
    config.hamiltonian = j.at("hamiltonian").get<std::string>();
    try {
      parse_expression(config.hamiltonian);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("hamiltonian: ") + e.what());
    }
  }

  if (j.contains("potentials")) {
    const auto& potentials = j.at("potentials");
    if (!potentials.is_object()) throw ConfigError("'potentials' must be an object");
    check_known_keys(potentials, "potentials", {"Phi", "A"});
    if (potentials.contains("Phi")) {
      config.scalar_potential = parse_potential(potentials.at("Phi"), "Phi");
    }
    if (potentials.contains("A")) {
      config.vector_potential = parse_potential(potentials.at("A"), "A");
    }
  }

  if (j.contains("evolution")) {
    const auto& evolution = j.at("evolution");
    if (!evolution.is_object()) throw ConfigError("'evolution' must be an object");
    check_known_keys(evolution, "evolution", {"dt", "steps"});
    config.dt = get_number(evolution, "dt", config.dt);
    if (config.dt <= 0.0) throw ConfigError("evolution 'dt' must be positive");
    if (evolution.contains("steps")) {
      if (!evolution.at("steps").is_number_integer() &&
          !evolution.at("steps").is_number_unsigned()) {
        throw ConfigError("evolution 'steps' must be an integer");
      }
      config.steps = evolution.at("steps").get<int>();
      if (config.steps < 0) throw ConfigError("evolution 'steps' must be >= 0");
    }
  }

  if (j.contains("tolerances")) {
    const auto& tolerances = j.at("tolerances");
    if (!tolerances.is_object()) throw ConfigError("'tolerances' must be an object");
    for (auto it = tolerances.begin(); it != tolerances.end(); ++it) {
      if (config.tolerances.find(it.key()) == config.tolerances.end()) {
        throw ConfigError("unknown tolerance '" + it.key() + "'");
      }
      if (!it.value().is_number()) {
        throw ConfigError("tolerance '" + it.key() + "' must be a number");
      }
      const double v = it.value().get<double>();
      if (!(v > 0.0)) throw ConfigError("tolerance '" + it.key() + "' must be positive");
      config.tolerances[it.key()] = v;
    }
  }

  try {
    config.make_grid();
    config.hamiltonian_spec(config.hbar).validate();
    config.evolution_params().validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return config;
}

SuiteConfig SuiteConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json SuiteConfig::to_json() const {
  nlohmann::json j;
  j["suites"] = suites;
  j["seed"] = seed;
  j["hbar"] = hbar;
  j["grid"] = {{"n", grid_n}, {"length", grid_length}};
  j["packet"] = {{"x0", packet_x0}, {"p0", packet_p0}, {"sigma", packet_sigma}};
  j["particle"] = {{"mass", mass}, {"charge", charge}, {"light_speed", light_speed}};
  j["hamiltonian"] = hamiltonian;
  j["potentials"] = {
      {"Phi",
       {{"expr", scalar_potential.expr},
        {"modulation", modulation_to_json(scalar_potential.modulation)}}},
      {"A",
       {{"expr", vector_potential.expr},
        {"modulation", modulation_to_json(vector_potential.modulation)}}},
  };
  j["evolution"] = {{"dt", dt}, {"steps", steps}};
  nlohmann::json tol;
  for (const auto& [name, value] : tolerances) tol[name] = value;
  j["tolerances"] = std::move(tol);
  return j;
}

Wavefunction SuiteConfig::make_packet(const Grid& grid, double hbar_signed) const {
  return make_gaussian(grid, packet_x0, packet_p0, packet_sigma, hbar_signed);
}

HamiltonianSpec SuiteConfig::hamiltonian_spec(double hbar_signed) const {
  HamiltonianSpec spec;
  spec.mass = mass;
  spec.charge = charge;
  spec.light_speed = light_speed;
  spec.hbar_signed = hbar_signed;

  HamiltonianSpec env;
  env.mass = mass;
  env.charge = charge;
  env.light_speed = light_speed;
  env.hbar_signed = hbar;

  const auto install = [&env](const PotentialTerm& term) -> Potential {
    if (!term.ast || (term.ast->kind == ExprAst::Kind::constant && term.ast->value == 0.0)) {
      return {};
    }
    return [term, env](double x, double t) { return term.sample(x, t, env); };
  };
  spec.scalar_potential = install(scalar_potential);
  spec.vector_potential = install(vector_potential);
  spec.time_dependent_potentials =
      scalar_potential.modulation.time_dependent() || vector_potential.modulation.time_dependent();
  return spec;
}

double SuiteConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + name + "'");
  return it->second;
}

}  // namespace hbarsign
