#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace eigenflow {

/// Machine-checkable failure codes. Every throwing precondition in the
/// library maps to exactly one of these; the textual what() adds context
/// (offending node index, measured value) but the code is the contract.
enum class Errc {
  NonSquare,
  ZeroMatrix,
  NotHermitian,
  NotNormal,
  NotDensityMatrix,
  NoConvergence,
  ShapeError,
  SizeMismatch,
  BadParam,
  BadExponent,
  TooLarge,
  NotUnitModulus,
  DegeneratePair,
  NotRealTuple,
  AxisOutOfRange,
  PairBudgetExceeded,
  GridMismatch,
  NotCurve,
  SingularNode,
  AllEqual,
  GapTooSmall,
  ClusterFlip,
  ParseError,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NotDensityMatrix: return "NotDensityMatrix";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ShapeError: return "ShapeError";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::BadParam: return "BadParam";
    case Errc::BadExponent: return "BadExponent";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotUnitModulus: return "NotUnitModulus";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::NotRealTuple: return "NotRealTuple";
    case Errc::AxisOutOfRange: return "AxisOutOfRange";
    case Errc::PairBudgetExceeded: return "PairBudgetExceeded";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::NotCurve: return "NotCurve";
    case Errc::SingularNode: return "SingularNode";
    case Errc::AllEqual: return "AllEqual";
    case Errc::GapTooSmall: return "GapTooSmall";
    case Errc::ClusterFlip: return "ClusterFlip";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Library exception. Carries an Errc plus an optional node index (for
/// errors raised while sweeping a sampled family) and an optional measured
/// value (e.g. the singular value that fell below the floor).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Error(Errc code, const std::string& what, long node)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what +
                           " (node " + std::to_string(node) + ")"),
        code_(code),
        node_(node) {}

  Error(Errc code, const std::string& what, long node, double value)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what +
                           " (node " + std::to_string(node) +
                           ", value " + std::to_string(value) + ")"),
        code_(code),
        node_(node),
        value_(value) {}

  Errc code() const noexcept { return code_; }

  /// Flat node index the error refers to, or -1 when not node-specific.
  long node() const noexcept { return node_; }

  /// Measured quantity attached to the error (NaN when unset).
  double value() const noexcept { return value_; }

 private:
  Errc code_;
  long node_ = -1;
  double value_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace eigenflow
