#include "ji/error.hpp"

namespace ji {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonPhysical: return "NonPhysical";
    case ErrorCode::ThetaOne: return "ThetaOne";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::DenominatorZero: return "DenominatorZero";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InterlacingViolation: return "InterlacingViolation";
    case ErrorCode::GammaIsPole: return "GammaIsPole";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
    case ErrorCode::NegativeResidue: return "NegativeResidue";
    case ErrorCode::TooFewPoles: return "TooFewPoles";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::DegenerateEigenvalue: return "DegenerateEigenvalue";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::RootNotBracketed:
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::DegenerateEigenvalue:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ji
