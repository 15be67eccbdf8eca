#include <doctest.h>

#include "hbarsign/suites.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using hbarsign::CheckRecord;
using hbarsign::SuiteConfig;
using hbarsign::VerificationReport;
using nlohmann::json;

const std::set<std::string>& known_equations() {
  static const std::set<std::string> tags = {
      "Eq.1",  "Eq.2",  "Eq.5",  "Eq.6",  "Eq.9",  "Eq.11", "Eq.12",   "Eq.13",
      "Eq.14", "Eq.15", "Eq.17", "Eq.19", "Eq.22", "Eq.23", "Eq.24",   "Eq.25",
      "Eq.26", "Eq.27", "Eq.28", "Eq.29", "Jacobi", "Antisym", "Linearity"};
  return tags;
}

SuiteConfig quick_config(const std::string& extra = "") {
  // Small grid and short evolution keep the full sweep fast in unit tests.
  // The packet sits at the origin so its tails clear the CCR support window
  // even on this short grid.
  std::string text = R"({
    "grid": {"n": 128, "length": 30.0},
    "packet": {"x0": 0.0, "p0": 1.0, "sigma": 1.0},
    "evolution": {"dt": 1e-3, "steps": 40})";
  if (!extra.empty()) text += ",\n" + extra;
  text += "\n}";
  return SuiteConfig::from_json(json::parse(text));
}

std::vector<std::string> ids_of(const VerificationReport& report) {
  std::vector<std::string> ids;
  for (const auto& check : report.checks) ids.push_back(check.id);
  return ids;
}

}  // namespace

TEST_CASE("the default sweep passes with a comfortable record count") {
  const VerificationReport report = hbarsign::run_verify(quick_config());
  CHECK(report.checks.size() >= 40);
  CHECK(report.all_pass());
  CHECK(report.seed == 42);

  // Ids are unique and every record cites a known equation tag with a
  // positive tolerance.
  std::vector<std::string> ids = ids_of(report);
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
  for (const auto& check : report.checks) {
    CHECK(known_equations().count(check.equation) == 1);
    CHECK(check.tolerance > 0.0);
    CHECK(check.pass == (check.residual < check.tolerance));
  }
}

TEST_CASE("suite selection filters the record set") {
  const VerificationReport report =
      hbarsign::run_verify(quick_config(R"("suites": ["classical"])"));
  CHECK(report.checks.size() == 5);
  for (const auto& id : ids_of(report)) {
    CHECK(id.substr(0, 10) == "classical.");
  }

  const VerificationReport spin =
      hbarsign::run_verify(quick_config(R"("suites": ["spin", "algebra"])"));
  bool saw_spin = false, saw_algebra = false;
  for (const auto& id : ids_of(spin)) {
    saw_spin |= id.substr(0, 5) == "spin.";
    saw_algebra |= id.substr(0, 8) == "algebra.";
  }
  CHECK(saw_spin);
  CHECK(saw_algebra);
}

TEST_CASE("records are a pure function of the configuration") {
  const VerificationReport a = hbarsign::run_verify(quick_config());
  const VerificationReport b = hbarsign::run_verify(quick_config());
  REQUIRE(a.checks.size() == b.checks.size());
  for (size_t k = 0; k < a.checks.size(); ++k) {
    CHECK(a.checks[k].id == b.checks[k].id);
    CHECK(a.checks[k].residual == b.checks[k].residual);
  }

  // A different seed reshuffles the random draws without breaking any check.
  const VerificationReport other = hbarsign::run_verify(quick_config(R"("seed": 977)"));
  CHECK(other.all_pass());
  bool any_residual_moved = false;
  for (size_t k = 0; k < a.checks.size(); ++k) {
    any_residual_moved |= other.checks[k].residual != a.checks[k].residual;
  }
  CHECK(any_residual_moved);
}

TEST_CASE("the flipped sign convention verifies just as well") {
  CHECK(hbarsign::run_verify(quick_config(R"("hbar": -1.0)")).all_pass());
}

TEST_CASE("an impossible tolerance produces an honest failure") {
  const VerificationReport report =
      hbarsign::run_verify(quick_config(R"("suites": ["mirror"], "tolerances": {"norm": 1e-30})"));
  CHECK(!report.all_pass());
  int failed = 0;
  for (const auto& check : report.checks) {
    if (!check.pass) {
      ++failed;
      CHECK(check.equation == "Eq.22");
      CHECK(check.tolerance == 1e-30);
    }
  }
  CHECK(failed >= 1);
}

TEST_CASE("evolve writes the three trajectory files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hbarsign_evolve_test";
  fs::remove_all(dir);

  const SuiteConfig config = quick_config(R"("potentials": {"Phi": "0.5*x^2"})");
  hbarsign::run_evolve(config, dir.string());

  for (const char* name : {"forward.csv", "mirror.csv", "deltas.csv"}) {
    CHECK(fs::exists(dir / name));
  }

  std::ifstream forward(dir / "forward.csv");
  std::string header;
  std::getline(forward, header);
  CHECK(header == "step,t,re_norm,x_mean,p_mean,energy");
  int rows = 0;
  for (std::string line; std::getline(forward, line);) ++rows;
  CHECK(rows == config.steps + 1);

  std::ifstream deltas(dir / "deltas.csv");
  std::getline(deltas, header);
  CHECK(header == "step,t,abs_x_mean_diff,abs_p_mean_sum");

  // The mirror trajectory tracks the forward one to round-off.
  double worst = 0.0;
  for (std::string line; std::getline(deltas, line);) {
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    worst = std::max(worst, std::abs(std::stod(field)));
    std::getline(row, field, ',');
    worst = std::max(worst, std::abs(std::stod(field)));
  }
  CHECK(worst < 1e-8);

  fs::remove_all(dir);
}

TEST_CASE("constants text states the SI value and the active sign") {
  const std::string plus = hbarsign::constants_text(1.0);
  CHECK(plus.find("1.054e-34") != std::string::npos);
  CHECK(plus.find("+1") != std::string::npos);

  const std::string minus = hbarsign::constants_text(-0.5);
  CHECK(minus.find("1.054e-34") != std::string::npos);
  CHECK(minus.find("-1") != std::string::npos);
}
