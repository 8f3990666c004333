#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bounce {

enum class ErrorKind {
  HypothesisViolated,
  DomainError,
  ConvergenceError,
  NoImpact,
  GrazingImpact,
  TwistFailure,
  ParamTooSmall,
  GlueOrderViolated,
  NoGlueIndex,
  TruncationUnsafe,
  NoConvergence,
  SandwichBreach,
  Unclassifiable,
  OrbitMismatch,
  InvalidConstants,
  ConfigError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConvergenceError: return "ConvergenceError";
    case ErrorKind::NoImpact: return "NoImpact";
    case ErrorKind::GrazingImpact: return "GrazingImpact";
    case ErrorKind::TwistFailure: return "TwistFailure";
    case ErrorKind::ParamTooSmall: return "ParamTooSmall";
    case ErrorKind::GlueOrderViolated: return "GlueOrderViolated";
    case ErrorKind::NoGlueIndex: return "NoGlueIndex";
    case ErrorKind::TruncationUnsafe: return "TruncationUnsafe";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SandwichBreach: return "SandwichBreach";
    case ErrorKind::Unclassifiable: return "Unclassifiable";
    case ErrorKind::OrbitMismatch: return "OrbitMismatch";
    case ErrorKind::InvalidConstants: return "InvalidConstants";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

// All recoverable failures carry the module and operation that raised them so
// the CLI can emit a machine-readable report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string op, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " [" + module + "." + op + "]: " + what),
        kind_(kind),
        module_(std::move(module)),
        op_(std::move(op)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module_name() const { return module_; }
  const std::string& operation() const { return op_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string op_;
};

}  // namespace bounce
