#pragma once

#include "hbarsign/config.hpp"
#include "hbarsign/report.hpp"

#include <string>

namespace hbarsign {

/// Runs the selected verification suites sequentially in a fixed order; every
/// check draws from its own generator seeded by (config.seed, check id), so
/// the record set is a pure function of the configuration.
VerificationReport run_verify(const SuiteConfig& config);

/// Writes forward.csv, mirror.csv, and deltas.csv for the configured system
/// into out_dir. The mirror run flips the sign of hbar, keeps the potentials,
/// and starts from the conjugated packet.
void run_evolve(const SuiteConfig& config, const std::string& out_dir);

/// Text for the `constants` subcommand: the SI value of hbar, the natural-unit
/// working value, and the active sign convention.
std::string constants_text(double hbar_signed);

}  // namespace hbarsign
