#pragma once

#include <stdexcept>
#include <string>

namespace prismkit {

// Error taxonomy shared by all modules. The CLI maps `code_name` onto stderr
// and exit code 1; library callers can switch on `code`.
enum class Errc {
  UnsupportedRelationSet,
  BadPrecision,
  SpecMismatch,
  NotAUnit,
  NotDivisible,
  RelationViolated,
  UnsupportedQuery,
  IntegralityFailure,
  CapExceeded,
  LengthUnderflow,
  NonIntegralGhost,
  PrecisionExhausted,
  DepthExceeded,
  UnsupportedCarrier,
  NotDistinguished,
  NotEisenstein,
  NonOrientable,
  EnumerationBudgetExceeded,
  NotCharP,
  NotSquareZeroInput,
  NotAPrism,
  UnramifiedInput,
  InsufficientTerms,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnsupportedRelationSet: return "UnsupportedRelationSet";
    case Errc::BadPrecision: return "BadPrecision";
    case Errc::SpecMismatch: return "SpecMismatch";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::RelationViolated: return "RelationViolated";
    case Errc::UnsupportedQuery: return "UnsupportedQuery";
    case Errc::IntegralityFailure: return "IntegralityFailure";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::LengthUnderflow: return "LengthUnderflow";
    case Errc::NonIntegralGhost: return "NonIntegralGhost";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::DepthExceeded: return "DepthExceeded";
    case Errc::UnsupportedCarrier: return "UnsupportedCarrier";
    case Errc::NotDistinguished: return "NotDistinguished";
    case Errc::NotEisenstein: return "NotEisenstein";
    case Errc::NonOrientable: return "NonOrientable";
    case Errc::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case Errc::NotCharP: return "NotCharP";
    case Errc::NotSquareZeroInput: return "NotSquareZeroInput";
    case Errc::NotAPrism: return "NotAPrism";
    case Errc::UnramifiedInput: return "UnramifiedInput";
    case Errc::InsufficientTerms: return "InsufficientTerms";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace prismkit
