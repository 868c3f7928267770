#include "ds2aw/error.hpp"

namespace ds2aw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPeriod: return "invalid-period";
    case ErrorCode::ZeroWavevector: return "zero-wavevector";
    case ErrorCode::DegeneratePair: return "degenerate-pair";
    case ErrorCode::WrongClass: return "wrong-class";
    case ErrorCode::DuplicatePoint: return "duplicate-point";
    case ErrorCode::NonzeroMean: return "nonzero-mean";
    case ErrorCode::Aliasing: return "aliasing";
    case ErrorCode::DegenerateMode: return "degenerate-mode";
    case ErrorCode::CrossRatioDegenerate: return "cross-ratio-degenerate";
    case ErrorCode::NotNegativeDefinite: return "not-negative-definite";
    case ErrorCode::TruncationInsufficient: return "truncation-insufficient";
    case ErrorCode::RadiusOverflow: return "radius-overflow";
    case ErrorCode::DivisionByZeroTheta: return "division-by-zero-theta";
    case ErrorCode::ThetaZero: return "theta-zero";
    case ErrorCode::NanDetected: return "nan-detected";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::TimeMismatch: return "time-mismatch";
    case ErrorCode::ConfigParse: return "config";
    case ErrorCode::Genericity: return "genericity";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPeriod:
    case ErrorCode::NonzeroMean:
    case ErrorCode::Aliasing:
    case ErrorCode::InvalidArgument:
    case ErrorCode::GridMismatch:
    case ErrorCode::TimeMismatch:
    case ErrorCode::ConfigParse:
    case ErrorCode::ZeroWavevector:
    case ErrorCode::WrongClass:
      return 2;
    case ErrorCode::Genericity:
    case ErrorCode::DuplicatePoint:
      return 3;
    case ErrorCode::DegeneratePair:
    case ErrorCode::DegenerateMode:
    case ErrorCode::CrossRatioDegenerate:
      return 4;
    case ErrorCode::NotNegativeDefinite:
    case ErrorCode::TruncationInsufficient:
    case ErrorCode::RadiusOverflow:
    case ErrorCode::DivisionByZeroTheta:
    case ErrorCode::ThetaZero:
    case ErrorCode::NanDetected:
      return 5;
    case ErrorCode::Io:
      return 6;
  }
  return 1;
}

}  // namespace ds2aw
