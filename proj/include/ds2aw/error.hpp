#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ds2aw {

enum class ErrorCode {
  InvalidPeriod,
  ZeroWavevector,
  DegeneratePair,
  WrongClass,
  DuplicatePoint,
  NonzeroMean,
  Aliasing,
  DegenerateMode,
  CrossRatioDegenerate,
  NotNegativeDefinite,
  TruncationInsufficient,
  RadiusOverflow,
  DivisionByZeroTheta,
  ThetaZero,
  NanDetected,
  InvalidArgument,
  GridMismatch,
  TimeMismatch,
  ConfigParse,
  Genericity,
  Io,
};

std::string_view to_string(ErrorCode code);

// Process exit status for each error class: 2 config, 3 genericity,
// 4 degenerate spectrum, 5 numeric failure, 6 io.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ds2aw
