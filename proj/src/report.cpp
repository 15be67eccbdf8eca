#include "hbarsign/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace hbarsign {

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckRecord& r) { return r.pass; });
}

int VerificationReport::passed_count() const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; }));
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_string(std::ostringstream& out, const std::string& s) {
  out << '"';
  for (const char c : s) {
    switch (c) {
      case '"':
        out << "\\\"";
        break;
      case '\\':
        out << "\\\\";
        break;
      case '\n':
        out << "\\n";
        break;
      case '\t':
        out << "\\t";
        break;
      case '\r':
        out << "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

// nlohmann::json objects iterate in key order already (std::map backing);
// the custom dump exists to pin float formatting to %.17g.
void dump_value(std::ostringstream& out, const nlohmann::json& v, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string inner_pad(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner_pad;
        dump_string(out, it.key());
        out << ": ";
        dump_value(out, it.value(), indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out << ",\n";
        first = false;
        out << inner_pad;
        dump_value(out, item, indent + 1);
      }
      out << "\n" << pad << "]";
      return;
    }
    case nlohmann::json::value_t::string:
      dump_string(out, v.get_ref<const std::string&>());
      return;
    case nlohmann::json::value_t::boolean:
      out << (v.get<bool>() ? "true" : "false");
      return;
    case nlohmann::json::value_t::number_integer:
      out << v.get<std::int64_t>();
      return;
    case nlohmann::json::value_t::number_unsigned:
      out << v.get<std::uint64_t>();
      return;
    case nlohmann::json::value_t::number_float:
      out << format_double(v.get<double>());
      return;
    case nlohmann::json::value_t::null:
    default:
      out << "null";
      return;
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
  std::ostringstream out;
  dump_value(out, value, 0);
  return out.str();
}

std::string render_report(const VerificationReport& report, const nlohmann::json& config_echo) {
  nlohmann::json j;
  j["schema"] = report.schema;
  j["version"] = report.version;
  j["seed"] = report.seed;
  if (!report.timestamp.empty()) j["timestamp"] = report.timestamp;
  j["config"] = config_echo;

  const int total = static_cast<int>(report.checks.size());
  const int passed = report.passed_count();
  j["summary"] = {
      {"total", total},
      {"passed", passed},
      {"failed", total - passed},
      {"pass", report.all_pass()},
  };

  nlohmann::json checks = nlohmann::json::array();
  std::vector<CheckRecord> sorted = report.checks;
  std::sort(sorted.begin(), sorted.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  for (const CheckRecord& r : sorted) {
    checks.push_back({
        {"id", r.id},
        {"equation", r.equation},
        {"residual", r.residual},
        {"tolerance", r.tolerance},
        {"pass", r.pass},
    });
  }
  j["checks"] = std::move(checks);
  return canonical_json(j) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hbarsign
