#pragma once

#include <stdexcept>
#include <string>

namespace ji {

// Numeric values are mirrored by ji_status in ji.h; keep the two in sync.
enum class ErrorCode : int {
  InvalidInput = 1,
  NonPhysical = 2,
  ThetaOne = 3,
  PoleHit = 4,
  DenominatorZero = 5,
  ConvergenceFailure = 6,
  InterlacingViolation = 7,
  GammaIsPole = 8,
  RootNotBracketed = 9,
  NegativeResidue = 10,
  TooFewPoles = 11,
  NumericalBreakdown = 12,
  DegenerateEigenvalue = 13,
};

const char* to_string(ErrorCode code) noexcept;

// True for failures of the numerics (as opposed to bad inputs).
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ji
