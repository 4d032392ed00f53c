#include "tabmem/error.hpp"

namespace tabmem {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparsableNumeric: return "UnparsableNumeric";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::BadFractions: return "BadFractions";
    case ErrorCode::TrainTooSmall: return "TrainTooSmall";
    case ErrorCode::EmptyRatios: return "EmptyRatios";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoTarget: return "NoTarget";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::BadTime: return "BadTime";
    case ErrorCode::ZeroSigma: return "ZeroSigma";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace tabmem
