#pragma once

#include <stdexcept>
#include <string>

namespace lowk {

/// Failure categories shared by every module. The CLI maps the first group to
/// exit code 2 (validation) and the rest to exit code 3 (numerical failure).
enum class ErrorKind {
  // validation
  UnknownPotential,
  BadParameter,
  InvalidSpec,
  MissingDecayMetadata,
  OrderExceedsValidity,
  NoClosedForm,
  UnsupportedAsymptotics,
  EvenOrder,
  // numerical
  ZeroLeadingCoefficient,
  OddLeadingOrder,
  NegativeOrderExponent,
  ToleranceNotMet,
  DivergentTail,
  BranchAmbiguity,
  ExceptionalCase,
  NegativeZeroMode,
  NonconvergedODE,
  WronskianDegenerate,
  BesselNonconvergence,
  DegenerateFit,
  DivisionByZero,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownPotential: return "UnknownPotential";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::MissingDecayMetadata: return "MissingDecayMetadata";
    case ErrorKind::OrderExceedsValidity: return "OrderExceedsValidity";
    case ErrorKind::NoClosedForm: return "NoClosedForm";
    case ErrorKind::UnsupportedAsymptotics: return "UnsupportedAsymptotics";
    case ErrorKind::EvenOrder: return "EvenOrder";
    case ErrorKind::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorKind::OddLeadingOrder: return "OddLeadingOrder";
    case ErrorKind::NegativeOrderExponent: return "NegativeOrderExponent";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::DivergentTail: return "DivergentTail";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::ExceptionalCase: return "ExceptionalCase";
    case ErrorKind::NegativeZeroMode: return "NegativeZeroMode";
    case ErrorKind::NonconvergedODE: return "NonconvergedODE";
    case ErrorKind::WronskianDegenerate: return "WronskianDegenerate";
    case ErrorKind::BesselNonconvergence: return "BesselNonconvergence";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
  }
  return "Unknown";
}

inline bool is_validation_error(ErrorKind kind) {
  return kind <= ErrorKind::EvenOrder;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lowk
