#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

enum class ErrorCode {
    // input / parse
    SyntaxError,
    UnknownIdentifier,
    ArityError,
    SpecSchema,
    // evaluation
    DomainError,
    DegenerateInput,
    NotPositiveDefinite,
    DegenerateGradient,
    FamilyMismatch,
    StrongConvexityViolated,
    UnsupportedVariance,
    ZeroFunction,
    // iterative solvers
    ConvergenceFailure,
    NotConverged,
};

const char* error_name(ErrorCode code);

// Process exit code the CLI maps each error class to:
// 2 = input error, 3 = evaluation error, 4 = non-convergence.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, long offset = -1)
        : std::runtime_error(std::move(message)), code_(code), offset_(offset) {}

    ErrorCode code() const { return code_; }

    // Byte offset into the originating source text, or -1 when not applicable.
    long offset() const { return offset_; }

private:
    ErrorCode code_;
    long offset_;
};

} // namespace finsler
