#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncsdp {

enum class ErrorKind {
  kInvalidInput,
  kNumericalFailure,
  kDomainViolation,
  kConstantsRequired,
  kPreconditionViolated,
  kLineSearchStall,
  kGenerationFailed,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw SolverError(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace ncsdp
