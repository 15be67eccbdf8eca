#include "hbarsign/config.hpp"
#include "hbarsign/constants.hpp"
#include "hbarsign/report.hpp"
#include "hbarsign/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

int run_verify_command(const std::string& config_path, const std::vector<std::string>& suites,
                       bool seed_given, std::uint64_t seed, const std::string& out_path,
                       bool no_timestamp) {
  hbarsign::SuiteConfig config;
  try {
    config = config_path.empty() ? hbarsign::SuiteConfig::defaults()
                                 : hbarsign::SuiteConfig::from_file(config_path);
    if (!suites.empty()) config.suites = hbarsign::validate_suites(suites);
    if (seed_given) config.seed = seed;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  hbarsign::VerificationReport report = hbarsign::run_verify(config);
  if (!no_timestamp) report.timestamp = hbarsign::utc_timestamp();
  const std::string rendered = hbarsign::render_report(report, config.to_json());

  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "config error: cannot write report to '" << out_path << "'\n";
      return kExitConfigError;
    }
    out << rendered;
  }

  for (const auto& check : report.checks) {
    if (!check.pass) {
      std::cerr << "FAIL " << check.id << " (" << check.equation << "): residual "
                << check.residual << " tolerance " << check.tolerance << "\n";
    }
  }
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_evolve_command(const std::string& config_path, const std::string& out_dir) {
  hbarsign::SuiteConfig config;
  try {
    config = hbarsign::SuiteConfig::from_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    hbarsign::run_evolve(config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed-hbar quantization verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  std::string out_path;
  bool no_timestamp = false;

  CLI::App* verify = app.add_subcommand("verify", "Run verification suites, emit a JSON report");
  verify->add_option("--config", config_path, "JSON config file (defaults used when omitted)");
  verify->add_option("--suite", suites, "Suite to run (repeatable); overrides the config");
  CLI::Option* seed_opt = verify->add_option("--seed", seed, "Seed override");
  verify->add_option("--out", out_path, "Report file (stdout when omitted)");
  verify->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp for byte-stable output");

  std::string evolve_config;
  std::string evolve_out;
  CLI::App* evolve = app.add_subcommand("evolve", "Write forward/mirror/deltas CSV trajectories");
  evolve->add_option("--config", evolve_config, "JSON config file")->required();
  evolve->add_option("--out", evolve_out, "Output directory")->required();

  double hbar_value = hbarsign::kHbarNatural;
  CLI::App* constants = app.add_subcommand("constants", "Print the hbar constants and sign");
  constants->add_option("--hbar", hbar_value, "Signed natural-unit value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfigError;
  }

  if (verify->parsed()) {
    return run_verify_command(config_path, suites, seed_opt->count() > 0, seed, out_path,
                              no_timestamp);
  }
  if (evolve->parsed()) {
    return run_evolve_command(evolve_config, evolve_out);
  }
  if (constants->parsed()) {
    if (hbar_value == 0.0) {
      std::cerr << "config error: --hbar must be nonzero\n";
      return kExitConfigError;
    }
    std::cout << hbarsign::constants_text(hbar_value);
    return kExitPass;
  }
  return kExitConfigError;
}
