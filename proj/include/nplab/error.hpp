#pragma once

#include <stdexcept>
#include <string>

namespace nplab {

enum class ErrorCode {
  ConeViolation,
  Domain,
  NonIntegral,
  PrecisionExhausted,
  MixedModulus,
  TruncationUnsound,
  VerificationFailed,
  WrongPolytope,
  FactorizationMismatch,
  NotAUnit,
  ScaleExceeded,
  IndexTooLarge,
  Mismatch,
  Inconsistent,
  HypothesisViolation,
  NonIntegralFit,
  OutOfMemory,
  Config,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what)
      : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nplab
