#pragma once

#include <stdexcept>
#include <string>

namespace rfis {

/// Failure categories surfaced by the library. The CLI maps these onto
/// distinct process exit codes (see README).
enum class ErrorCode {
  kDegenerateSimplex,
  kNotInSimplex,
  kUnknownVertex,
  kDegenerateInput,
  kCenterOutside,
  kNoIntersection,
  kNonFiniteDrift,
  kUnknownSystem,
  kEmptySet,
  kCapacityExceeded,
  kBudgetExceeded,
  kParseError,
  kValidationError,
  kIoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// A configuration field failed validation; `field()` names it.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(ErrorCode::kValidationError, field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace rfis
