#pragma once

#include <stdexcept>
#include <string>

namespace backresp {

/// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
  Input,          // malformed or invalid model / weights / arguments
  CapExceeded,    // too many players for an enumerative engine
  Plan,           // sampling plan cannot be built from the budget
  Internal,       // violated internal invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Short machine-readable tag such as "RepeatedState" or "BudgetTooSmall".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error input_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Input, std::move(code), message);
}

}  // namespace backresp
