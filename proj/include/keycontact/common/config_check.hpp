#pragma once

#include <set>
#include <string>
#include <vector>

#include "keycontact/common/error.hpp"
#include "keycontact/common/json_io.hpp"

namespace keycontact {

struct FieldIssue {
  std::string field;
  std::string message;
};

/// Schema error carrying every offending field of a config document.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldIssue> issues)
      : Error(ErrorKind::schema, summarize(issues)), issues_(std::move(issues)) {}
  const std::vector<FieldIssue>& issues() const { return issues_; }

 private:
  static std::string summarize(const std::vector<FieldIssue>& issues) {
    std::string s = "invalid config:";
    for (const auto& i : issues) s += " " + i.field + ": " + i.message + ";";
    return s;
  }
  std::vector<FieldIssue> issues_;
};

/// Reads optional fields from a JSON object, recording problems instead of
/// throwing so that one pass reports all of them.
class FieldReader {
 public:
  FieldReader(const Json& j, std::string prefix, std::vector<FieldIssue>& issues)
      : j_(j), prefix_(std::move(prefix)), issues_(issues) {
    if (!j_.is_object()) issues_.push_back({prefix_.empty() ? "<root>" : prefix_, "expected an object"});
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  const Json& at(const std::string& key) const { return j_.at(key); }

  void number(const std::string& key, double& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number()) return issue(key, "expected a number");
    out = v.get<double>();
  }

  void integer(const std::string& key, int& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) return issue(key, "expected an integer");
    out = v.get<int>();
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      return issue(key, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void boolean(const std::string& key, bool& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) return issue(key, "expected a boolean");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_string()) return issue(key, "expected a string");
    out = v.get<std::string>();
  }

  /// Marks a key as known without reading it (nested objects, arrays).
  void known(const std::string& key) { seen_.insert(key); }

  void check(bool ok, const std::string& key, const std::string& message) {
    if (!ok) issue(key, message);
  }

  void issue(const std::string& key, const std::string& message) { issues_.push_back({path(key), message}); }

  /// Flags keys that were never read.
  void reject_unknown() {
    if (!j_.is_object()) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) issue(k, "unknown field");
  }

 private:
  const Json& j_;
  std::string prefix_;
  std::vector<FieldIssue>& issues_;
  std::set<std::string> seen_;
};

inline void throw_if_issues(std::vector<FieldIssue> issues) {
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace keycontact
