#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace projcoords {

enum class ErrorKind {
  InvalidValue,
  WindowViolation,
  DomainViolation,
  NoPositiveRoot,
  DegenerateConfiguration,
  NonPositiveRatio,
  NoValidBranch,
  CountMismatch,
  SlotReuse,
  NonNegativeEuler,
  Disconnected,
  ClosureViolation,
  UnknownCurve,
  BoundaryCurve,
  Schema,
  ChartFailure,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::WindowViolation: return "WindowViolation";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::NonPositiveRatio: return "NonPositiveRatio";
    case ErrorKind::NoValidBranch: return "NoValidBranch";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::SlotReuse: return "SlotReuse";
    case ErrorKind::NonNegativeEuler: return "NonNegativeEuler";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::ClosureViolation: return "ClosureViolation";
    case ErrorKind::UnknownCurve: return "UnknownCurve";
    case ErrorKind::BoundaryCurve: return "BoundaryCurve";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::ChartFailure: return "ChartFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so that front ends can
/// map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace projcoords
