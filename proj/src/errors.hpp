#pragma once

#include <stdexcept>
#include <string>

namespace plog {

// Stable error taxonomy; the C API and CLI exit codes are derived from it.
enum class ErrorCode {
  Syntax,                // malformed input text
  Sort,                  // undeclared sort/attribute, ill-sorted term, bad declaration
  Range,                 // pr value outside [0,1]
  TypeMismatch,          // builtin applied to non-integer
  UnboundedSort,         // defining program lacks a unique answer set
  BudgetExceeded,        // grounding cap or search-node cap hit
  DuplicateDeclaration,  // sort/attribute redeclared inconsistently
  Inconsistent,          // program has no possible worlds
  ProbabilityUndefined,  // no possible world with nonzero unnormalized measure
  ConditionViolation,    // Conditions 1-3 violated, or assigned probability mass > 1
  UniverseTooLarge,      // oracle enumeration refused
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Syntax: return "syntax error";
    case ErrorCode::Sort: return "sort error";
    case ErrorCode::Range: return "range error";
    case ErrorCode::TypeMismatch: return "type mismatch";
    case ErrorCode::UnboundedSort: return "unbounded sort";
    case ErrorCode::BudgetExceeded: return "budget exceeded";
    case ErrorCode::DuplicateDeclaration: return "duplicate declaration";
    case ErrorCode::Inconsistent: return "inconsistent";
    case ErrorCode::ProbabilityUndefined: return "probability undefined";
    case ErrorCode::ConditionViolation: return "condition violation";
    case ErrorCode::UniverseTooLarge: return "universe too large";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown error";
}

}  // namespace plog
