#pragma once

#include <stdexcept>
#include <string>

namespace siglap {

enum class ErrorKind {
  ZeroWeight,
  SelfLoop,
  NodeOutOfRange,
  InvalidArgument,
  NodesDisconnected,
  Disconnected,
  NotSymmetric,
  FactorNotPD,
  SingularCutGram,
  HypothesisViolated,
  ResistanceMismatch,
  Unbounded,
  ParseError,
  IoError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NodesDisconnected: return "NodesDisconnected";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::FactorNotPD: return "FactorNotPD";
    case ErrorKind::SingularCutGram: return "SingularCutGram";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ResistanceMismatch: return "ResistanceMismatch";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `kind()` lets callers (and the CLI's
/// exit-code mapping) branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace siglap
