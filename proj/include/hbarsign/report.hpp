#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hbarsign {

struct CheckRecord {
  std::string id;
  std::string equation;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  int schema = 1;
  std::string version;
  std::uint64_t seed = 0;
  /// RFC 3339 UTC; empty means omitted (--no-timestamp).
  std::string timestamp;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
  int passed_count() const;
};

/// Canonical serialization: object keys sorted, floats rendered with 17
/// significant digits, no insignificant whitespace differences between runs.
/// Identical (config, seed) inputs therefore produce byte-identical output
/// when the timestamp is omitted.
std::string render_report(const VerificationReport& report, const nlohmann::json& config_echo);

/// Canonical dump of an arbitrary JSON value (sorted keys, %.17g floats,
/// 2-space indentation).
std::string canonical_json(const nlohmann::json& value);

std::string utc_timestamp();

}  // namespace hbarsign
