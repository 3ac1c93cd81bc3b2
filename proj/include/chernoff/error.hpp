#ifndef CHERNOFF_ERROR_HPP
#define CHERNOFF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace chernoff {

enum class ErrorCode {
  NonFinite = 1,
  Overflow,
  DimMismatch,
  DegenerateInput,
  NoConvergence,
  TooLarge,
  NotUnitary,
  NotProjector,
  NotContraction,
  NegativeTime,
  MethodUnavailable,
  NotDivisible,
  OddN,
  HypothesisViolated,
  InvalidSchedule,
  ParseError,
  ValidationError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chernoff

#endif
