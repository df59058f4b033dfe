#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ceerlab {

enum class ErrorKind {
  SupportExceeded,
  StageNotReached,
  ExhaustedOracle,
  GeneratorConflict,
  RangeError,
  NotTotal,
  FreshClassExhausted,
  SearchSpaceTooLarge,
  BoundViolated,
  LevelTooWide,
  InconsistentSegments,
  CompletenessBoundExceeded,
  BaseContainsZeroOrOne,
  InvalidComponent,
  FreezeStageInsufficient,
  SchemaError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SupportExceeded: return "support-exceeded";
    case ErrorKind::StageNotReached: return "stage-not-reached";
    case ErrorKind::ExhaustedOracle: return "exhausted-oracle";
    case ErrorKind::GeneratorConflict: return "generator-conflict";
    case ErrorKind::RangeError: return "range-error";
    case ErrorKind::NotTotal: return "not-total";
    case ErrorKind::FreshClassExhausted: return "fresh-class-exhausted";
    case ErrorKind::SearchSpaceTooLarge: return "search-space-too-large";
    case ErrorKind::BoundViolated: return "bound-violated";
    case ErrorKind::LevelTooWide: return "level-too-wide";
    case ErrorKind::InconsistentSegments: return "inconsistent-segments";
    case ErrorKind::CompletenessBoundExceeded: return "completeness-bound-exceeded";
    case ErrorKind::BaseContainsZeroOrOne: return "base-tables-contain-0-or-1";
    case ErrorKind::InvalidComponent: return "invalid-component";
    case ErrorKind::FreezeStageInsufficient: return "freeze-stage-insufficient";
    case ErrorKind::SchemaError: return "schema-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ceerlab
