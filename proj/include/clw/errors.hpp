#pragma once

#include <stdexcept>
#include <string>

namespace clw {

// Machine-readable error codes, surfaced verbatim by the CLI.
enum class ErrorCode {
    IndexOutOfRange,
    LengthMismatch,
    DimensionMismatch,
    InconsistentPredicateOnClass,
    SyntaxError,
    UnknownPredicate,
    ArityMismatch,
    UnboundVariable,
    ModulusExceedsDeclared,
    IllFormed,
    InsufficientPrefix,
    BudgetExceeded,
    MissingStage,
    EmptySubspace,
    InvalidArgument,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace clw
