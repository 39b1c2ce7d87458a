#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace smoothcvx {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Ordered list of named pass/fail checks. Failures are entries, not errors.
class VerificationReport {
 public:
  void add(std::string name, bool passed, std::string detail = {}) {
    checks_.push_back({std::move(name), passed, std::move(detail)});
  }

  void append(const VerificationReport& other) {
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  }

  const std::vector<CheckResult>& checks() const { return checks_; }

  bool all_passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.passed; });
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

  void write_text(std::ostream& os) const {
    for (const auto& c : checks_) {
      os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
      if (!c.detail.empty()) os << ": " << c.detail;
      os << '\n';
    }
    os << (all_passed() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << '\n';
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks_) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"passed", all_passed()}, {"checks", arr}};
  }

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace smoothcvx
