#pragma once

#include <stdexcept>
#include <string>

namespace spateco {

/// Structured error kinds. Every throwing operation in the library reports one
/// of these, so callers (and the CLI) can dispatch on the failure class
/// without parsing messages.
enum class ErrorKind {
  // panel
  MalformedHeader,
  DuplicateObservation,
  NonNumericValue,
  AllMissingSeries,
  UnknownSector,
  MissingYear,
  // indices
  ZeroCityTotal,
  ZeroSectorTotal,
  ZeroSubsetTotal,
  AxisMismatch,
  BothZero,
  // intensity
  ConstantIndicator,
  MissingValues,
  DegenerateSpectrum,
  AllZeroIndicator,
  SingleObservation,
  DimensionMismatch,
  // spatial
  UnknownCity,
  SelfLoop,
  ConstantVector,
  EmptyWeights,
  // econometrics
  InsufficientObservations,
  UnknownVariable,
  RankDeficientDesign,
  UnbalancedPanel,
  NonConvergence,
  BoundarySolution,
  // numerics
  AsymmetricInput,
  NonFiniteEvaluation,
  RankDeficient,
  // synth
  SingularReducedForm,
  // generic input validation and I/O
  InvalidArgument,
  IoError,
  ConfigError,
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::DuplicateObservation: return "DuplicateObservation";
    case ErrorKind::NonNumericValue: return "NonNumericValue";
    case ErrorKind::AllMissingSeries: return "AllMissingSeries";
    case ErrorKind::UnknownSector: return "UnknownSector";
    case ErrorKind::MissingYear: return "MissingYear";
    case ErrorKind::ZeroCityTotal: return "ZeroCityTotal";
    case ErrorKind::ZeroSectorTotal: return "ZeroSectorTotal";
    case ErrorKind::ZeroSubsetTotal: return "ZeroSubsetTotal";
    case ErrorKind::AxisMismatch: return "AxisMismatch";
    case ErrorKind::BothZero: return "BothZero";
    case ErrorKind::ConstantIndicator: return "ConstantIndicator";
    case ErrorKind::MissingValues: return "MissingValues";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::AllZeroIndicator: return "AllZeroIndicator";
    case ErrorKind::SingleObservation: return "SingleObservation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownCity: return "UnknownCity";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::ConstantVector: return "ConstantVector";
    case ErrorKind::EmptyWeights: return "EmptyWeights";
    case ErrorKind::InsufficientObservations: return "InsufficientObservations";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorKind::UnbalancedPanel: return "UnbalancedPanel";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::BoundarySolution: return "BoundarySolution";
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SingularReducedForm: return "SingularReducedForm";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

/// Exception carrying a structured kind plus a human-readable message.
/// `index()` optionally names an offending column/row when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long index = -1)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return error_kind_name(kind_); }
  long index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

}  // namespace spateco
