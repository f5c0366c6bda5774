#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbp {

enum class ErrorKind {
  NonPositiveTimeGap,
  NegativePosition,
  InvalidArgument,
  IncompatibleData,
  EmptySolution,
  TooFewSamples,
  OutOfDomain,
  ContractionFailure,
  MaxIterations,
  BoundaryCollapse,
  WindowUnderflow,
  StabilityGuard,
  NoDormantState,
  DisjointRanges,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveTimeGap: return "NonPositiveTimeGap";
    case ErrorKind::NegativePosition: return "NegativePosition";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IncompatibleData: return "IncompatibleData";
    case ErrorKind::EmptySolution: return "EmptySolution";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::ContractionFailure: return "ContractionFailure";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::BoundaryCollapse: return "BoundaryCollapse";
    case ErrorKind::WindowUnderflow: return "WindowUnderflow";
    case ErrorKind::StabilityGuard: return "StabilityGuard";
    case ErrorKind::NoDormantState: return "NoDormantState";
    case ErrorKind::DisjointRanges: return "DisjointRanges";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fbp
