#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "hbarsign_cli_test";
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string command = std::string(HBARSIGN_CLI_PATH) + " " + args + " > " +
                              out.string() + " 2> " + err.string();
  const int raw = std::system(command.c_str());
  const int code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  return {code, slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("verify runs clean on the defaults of a small suite") {
  const CliResult r = run_cli("verify --suite classical --suite spin --no-timestamp");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("summary").at("pass") == true);
  CHECK(report.at("schema") == 1);
  for (const auto& check : report.at("checks")) {
    const std::string id = check.at("id").get<std::string>();
    CHECK((id.rfind("classical.", 0) == 0 || id.rfind("spin.", 0) == 0));
  }
}

TEST_CASE("fixed seed and --no-timestamp give byte-identical reports") {
  const std::string args = "verify --suite classical --suite algebra --seed 12 --no-timestamp";
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(!first.out.empty());

  // Without --no-timestamp a timestamp field appears.
  const CliResult stamped = run_cli("verify --suite classical --seed 12");
  CHECK(json::parse(stamped.out).contains("timestamp"));
}

TEST_CASE("--out writes the same report to a file") {
  const fs::path report_path = scratch_dir() / "report.json";
  fs::remove(report_path);
  const CliResult direct = run_cli("verify --suite classical --seed 3 --no-timestamp");
  const CliResult filed =
      run_cli("verify --suite classical --seed 3 --no-timestamp --out " + report_path.string());
  CHECK(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(report_path) == direct.out);
}

TEST_CASE("a failing check exits 1 but still writes the report") {
  const fs::path config = write_config("fail.json", R"({
    "suites": ["algebra"],
    "tolerances": {"adjoint": 1e-30}
  })");
  const fs::path report_path = scratch_dir() / "fail_report.json";
  fs::remove(report_path);

  const CliResult r = run_cli("verify --config " + config.string() + " --no-timestamp --out " +
                              report_path.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("FAIL") != std::string::npos);

  const json report = json::parse(slurp(report_path));
  CHECK(report.at("summary").at("pass") == false);
  CHECK(report.at("summary").at("failed").get<int>() >= 1);
}

TEST_CASE("config problems exit 2") {
  CHECK(run_cli("verify --config /nonexistent/config.json").exit_code == 2);
  CHECK(run_cli("verify --suite bogus").exit_code == 2);
  CHECK(run_cli("verify --frobnicate").exit_code == 2);
  CHECK(run_cli("evolve --config missing.json").exit_code == 2);  // --out is required
  CHECK(run_cli("constants --hbar 0").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required

  const fs::path bad = write_config("bad.json", "{ not json");
  const CliResult r = run_cli("verify --config " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("config error:") != std::string::npos);
}

TEST_CASE("constants reports the SI value and the sign in use") {
  const CliResult plus = run_cli("constants");
  CHECK(plus.exit_code == 0);
  CHECK(plus.out.find("1.054e-34") != std::string::npos);
  CHECK(plus.out.find("+1") != std::string::npos);

  const CliResult minus = run_cli("constants --hbar -1");
  CHECK(minus.exit_code == 0);
  CHECK(minus.out.find("-1") != std::string::npos);
}

TEST_CASE("evolve writes trajectories with the documented headers") {
  const fs::path config = write_config("evolve.json", R"({
    "grid": {"n": 16, "length": 10.0},
    "evolution": {"dt": 1e-3, "steps": 5},
    "potentials": {"Phi": "0.5*x^2"}
  })");
  const fs::path out_dir = scratch_dir() / "trajectories";
  fs::remove_all(out_dir);

  const CliResult r = run_cli("evolve --config " + config.string() + " --out " + out_dir.string());
  REQUIRE(r.exit_code == 0);

  std::ifstream forward(out_dir / "forward.csv");
  std::ifstream mirror(out_dir / "mirror.csv");
  std::ifstream deltas(out_dir / "deltas.csv");
  REQUIRE(forward.good());
  REQUIRE(mirror.good());
  REQUIRE(deltas.good());

  std::string header;
  std::getline(forward, header);
  CHECK(header == "step,t,re_norm,x_mean,p_mean,energy");
  std::getline(mirror, header);
  CHECK(header == "step,t,re_norm,x_mean,p_mean,energy");
  std::getline(deltas, header);
  CHECK(header == "step,t,abs_x_mean_diff,abs_p_mean_sum");

  int rows = 0;
  for (std::string line; std::getline(forward, line);) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("evolve with zero steps records only the initial state") {
  const fs::path config = write_config("evolve0.json", R"({
    "grid": {"n": 16, "length": 10.0},
    "evolution": {"dt": 1e-3, "steps": 0}
  })");
  const fs::path out_dir = scratch_dir() / "trajectories0";
  fs::remove_all(out_dir);

  REQUIRE(run_cli("evolve --config " + config.string() + " --out " + out_dir.string()).exit_code ==
          0);
  std::ifstream forward(out_dir / "forward.csv");
  int lines = 0;
  for (std::string line; std::getline(forward, line);) ++lines;
  CHECK(lines == 2);  // header + initial row
}
