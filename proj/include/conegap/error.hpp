#pragma once

#include <stdexcept>
#include <string>

namespace conegap {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  RankDeficient,
  NoConvergence,
  ConeMembership,
  InvalidAperturePair,
  NotConeMapping,
  NotContracting,
  ConeExit,
  NotInvariant,
  GapViolated,
  DefectiveLambda,
  SingularStep,
  ApertureDegenerate,
  DomainExit,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ConeMembership: return "ConeMembership";
    case ErrorCode::InvalidAperturePair: return "InvalidAperturePair";
    case ErrorCode::NotConeMapping: return "NotConeMapping";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::ConeExit: return "ConeExit";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::GapViolated: return "GapViolated";
    case ErrorCode::DefectiveLambda: return "DefectiveLambda";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::ApertureDegenerate: return "ApertureDegenerate";
    case ErrorCode::DomainExit: return "DomainExit";
  }
  return "Unknown";
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace conegap
