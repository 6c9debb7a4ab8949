#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdc {

/// Broad failure classes. The CLI maps each class to its own exit code.
enum class ErrorKind {
  Io,
  Schema,
  Validation,
  Config,
  EmptyMatrix,
  Degenerate,
  Numerical,
  Convergence,
  Rank,
  Specification,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error class (never 0).
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mdc
