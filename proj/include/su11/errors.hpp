#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

enum class ErrorKind {
  InvalidArgument,
  NonFinite,
  InvariantViolation,
  DependentInputs,
  NotHyperbolic,
  PreconditionViolated,
  NotControllable,
  TruncationInsufficient,
  Overflow,
  NotConverged,
};

const char* to_string(ErrorKind kind);

// Validation errors map to CLI exit code 2, numerical failures to 3.
inline bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::Overflow || kind == ErrorKind::NotConverged;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace su11
