#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lattika {

enum class ErrorKind {
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  NonPositiveScale,
  RadiusNegative,
  BudgetExceeded,
  RankUnsupported,
  DomainError,
  PoleAtOne,
  OutOfBand,
  QuadratureFailure,
  EnvelopeViolation,
  ZeroInput,
  TailUnbounded,
  NoInteriorMax,
  BoundaryVector,
  EvenPrime,
  NotIntegral,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::RadiusNegative: return "RadiusNegative";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::RankUnsupported: return "RankUnsupported";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PoleAtOne: return "PoleAtOne";
    case ErrorKind::OutOfBand: return "OutOfBand";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::EnvelopeViolation: return "EnvelopeViolation";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::TailUnbounded: return "TailUnbounded";
    case ErrorKind::NoInteriorMax: return "NoInteriorMax";
    case ErrorKind::BoundaryVector: return "BoundaryVector";
    case ErrorKind::EvenPrime: return "EvenPrime";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string const& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by make_lattice; `index` is the 1-based size of the first
/// non-positive leading principal minor.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(std::size_t index, std::string const& minor)
      : Error(ErrorKind::NotPositiveDefinite,
              "leading principal minor " + std::to_string(index) + " is " +
                  minor),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace lattika
