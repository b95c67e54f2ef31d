#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace equichern {

/// 64-bit FNV-1a, used for input digests.
class Fnv {
 public:
  void add(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 1099511628211ull;
    }
    // separator so that ("ab", "c") and ("a", "bc") differ
    h_ ^= 0xFF;
    h_ *= 1099511628211ull;
  }
  void add(std::uint64_t v) { add(std::to_string(v)); }
  std::uint64_t value() const { return h_; }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h_;
    return os.str();
  }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

enum class Status { pass, fail, skipped_unsupported };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped_unsupported: return "skipped-unsupported";
  }
  return "?";
}

struct CheckRecord {
  std::string id;
  std::string anchor;
  std::string digest;
  Status status = Status::pass;
  long instances = 0;
  std::string counterexample;
  std::string note;
  double wall_ms = 0;
};

struct Report {
  std::string scenario;
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;

  int count(Status s) const {
    int c = 0;
    for (const auto& r : checks) c += r.status == s;
    return c;
  }
  bool all_pass() const { return count(Status::fail) == 0; }
};

/// Structured form. Wall times are left out so that reports of identical runs
/// are byte-identical.
inline nlohmann::json report_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j = {{"id", c.id},
                        {"anchor", c.anchor},
                        {"inputs_digest", c.digest},
                        {"status", status_name(c.status)},
                        {"instances", c.instances}};
    if (!c.counterexample.empty()) j["counterexample"] = c.counterexample;
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  return {{"scenario", r.scenario},
          {"suite", r.suite},
          {"seed", r.seed},
          {"checks", std::move(checks)},
          {"summary",
           {{"total", r.checks.size()},
            {"pass", r.count(Status::pass)},
            {"fail", r.count(Status::fail)},
            {"skipped", r.count(Status::skipped_unsupported)}}}};
}

inline std::string report_structured(const Report& r) { return report_json(r).dump(2) + "\n"; }

inline std::string report_human(const Report& r) {
  std::ostringstream os;
  os << "suite " << r.suite << " on " << r.scenario << " (seed " << r.seed << ")\n";
  for (const auto& c : r.checks) {
    os << (c.status == Status::pass ? "PASS " : c.status == Status::fail ? "FAIL " : "SKIP ") << c.id << "\n"
       << "     anchor: " << c.anchor << "\n"
       << "     instances: " << c.instances << "  digest: " << c.digest << "  time: " << std::fixed
       << std::setprecision(1) << c.wall_ms << " ms\n";
    if (!c.note.empty()) os << "     note: " << c.note << "\n";
    if (!c.counterexample.empty()) os << "     counterexample: " << c.counterexample << "\n";
  }
  os << r.checks.size() << " checks: " << r.count(Status::pass) << " pass, " << r.count(Status::fail) << " fail, "
     << r.count(Status::skipped_unsupported) << " skipped\n";
  return os.str();
}

enum class ReportFormat { human, structured };

inline void emit_report(const Report& r, ReportFormat f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report \"" + path + "\"");
  out << (f == ReportFormat::structured ? report_structured(r) : report_human(r));
  if (!out) throw std::runtime_error("write failed for \"" + path + "\"");
}

}  // namespace equichern
