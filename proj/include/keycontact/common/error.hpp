#pragma once

#include <stdexcept>
#include <string>

namespace keycontact {

enum class ErrorKind {
  invalid_argument,
  degenerate,
  not_found,
  schema,
  io,
  pipeline,
};

const char* to_string(ErrorKind kind);

// Base for every error raised by the library. Carries a coarse category so
// the CLI can emit machine-readable diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::schema: return "schema";
    case ErrorKind::io: return "io";
    case ErrorKind::pipeline: return "pipeline";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace keycontact
