#include "chernoff/error.hpp"

namespace chernoff {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotProjector: return "NotProjector";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::MethodUnavailable: return "MethodUnavailable";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace chernoff
