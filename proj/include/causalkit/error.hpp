#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalkit {

enum class Errc {
  CycleDetected,
  UnknownEndpoint,
  DuplicateEdge,
  UnknownNode,
  OverlapError,
  MissingEquation,
  ParentMismatch,
  ProbabilityOutOfRange,
  NonPositiveSigma,
  ValueOutOfSupport,
  RegimeExplosion,
  UnsupportedEquationForm,
  RankDeficient,
  InsufficientRows,
  UnknownColumn,
  BootstrapUnstable,
  PositivityViolation,
  EmptySubgroup,
  ZeroDenominator,
  LengthMismatch,
  InsufficientSegment,
  EmptyArm,
  InvalidMethodForScenario,
  UnknownScenario,
  InvalidArgument,
  ParseError,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::UnknownEndpoint: return "UnknownEndpoint";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::OverlapError: return "OverlapError";
    case Errc::MissingEquation: return "MissingEquation";
    case Errc::ParentMismatch: return "ParentMismatch";
    case Errc::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case Errc::NonPositiveSigma: return "NonPositiveSigma";
    case Errc::ValueOutOfSupport: return "ValueOutOfSupport";
    case Errc::RegimeExplosion: return "RegimeExplosion";
    case Errc::UnsupportedEquationForm: return "UnsupportedEquationForm";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::InsufficientRows: return "InsufficientRows";
    case Errc::UnknownColumn: return "UnknownColumn";
    case Errc::BootstrapUnstable: return "BootstrapUnstable";
    case Errc::PositivityViolation: return "PositivityViolation";
    case Errc::EmptySubgroup: return "EmptySubgroup";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InsufficientSegment: return "InsufficientSegment";
    case Errc::EmptyArm: return "EmptyArm";
    case Errc::InvalidMethodForScenario: return "InvalidMethodForScenario";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is meant for humans and names the offending node/column/stratum.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace causalkit
