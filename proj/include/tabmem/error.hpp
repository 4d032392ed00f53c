#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabmem {

enum class ErrorCode {
  InvalidArgument,
  InvalidSchema,
  SchemaMismatch,
  MissingColumn,
  UnparsableNumeric,
  MissingValue,
  IoFailure,
  EmptyTable,
  BadFractions,
  TrainTooSmall,
  EmptyRatios,
  LengthMismatch,
  NoTarget,
  ClassTooSmall,
  EmptyColumn,
  TooFewRows,
  BadTime,
  ZeroSigma,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the toolkit; `code()` identifies the contract
/// that was violated so callers (and tests) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace tabmem
