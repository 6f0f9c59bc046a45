#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hadamard {

enum class ErrorCode {
    ShapeMismatch,
    TagMismatch,
    NonPositiveExponent,
    WrongScalarTag,
    NumericalFailure,
    NotSquare,
    NotSymmetric,
    NotPSD,
    CapExceeded,
    FamilyTooLarge,
    RankDeficientDraw,
    UnknownFixture,
    InvalidProblem,
    SimplexCycling,
    SolverFailure,
    DimensionMismatch,
    ParseError,
    FileError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Errors caused by bad caller input (as opposed to internal failures).
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hadamard
