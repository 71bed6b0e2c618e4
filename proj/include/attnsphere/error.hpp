#pragma once

#include <stdexcept>
#include <string>

namespace attnsphere {

enum class ErrorCode {
  NonSymmetric,
  NonConvergent,
  Singular,
  NearZero,
  InPerp,
  InSubspace,
  SizeMismatch,
  EmptyCap,
  GridMismatch,
  ParseError,
  ValidationError,
  UnknownPreset,
  IoFailure,
  AssumptionViolation,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace attnsphere
