#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace todatw {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  EvaluationError,
  DivergentWeight,
  IllConditioned,
  InvalidStep,
  Stiffness,
  UnknownIdentity,
  SingularConfiguration,
};

const char* to_string(ErrorKind kind);

/// Library error. `value()` carries the offending number where one exists:
/// the determinant for IllConditioned, the last accepted abscissa for
/// Stiffness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<double> value_;
};

}  // namespace todatw
