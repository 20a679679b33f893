#include "nplab/error.hpp"

namespace nplab {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConeViolation: return "CONE_VIOLATION";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::NonIntegral: return "NONINTEGRAL";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::MixedModulus: return "MIXED_MODULUS";
    case ErrorCode::TruncationUnsound: return "TRUNCATION_UNSOUND";
    case ErrorCode::VerificationFailed: return "VERIFICATION_FAILED";
    case ErrorCode::WrongPolytope: return "WRONG_POLYTOPE";
    case ErrorCode::FactorizationMismatch: return "FACTORIZATION_MISMATCH";
    case ErrorCode::NotAUnit: return "NOT_A_UNIT";
    case ErrorCode::ScaleExceeded: return "SCALE_EXCEEDED";
    case ErrorCode::IndexTooLarge: return "INDEX_TOO_LARGE";
    case ErrorCode::Mismatch: return "MISMATCH";
    case ErrorCode::Inconsistent: return "INCONSISTENT";
    case ErrorCode::HypothesisViolation: return "HYPOTHESIS_VIOLATION";
    case ErrorCode::NonIntegralFit: return "NONINTEGRAL_FIT";
    case ErrorCode::OutOfMemory: return "OUT_OF_MEMORY";
    case ErrorCode::Config: return "CONFIG";
  }
  return "UNKNOWN";
}

}  // namespace nplab
