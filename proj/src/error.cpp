#include "hadamard/error.hpp"

namespace hadamard {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::TagMismatch: return "TagMismatch";
        case ErrorCode::NonPositiveExponent: return "NonPositiveExponent";
        case ErrorCode::WrongScalarTag: return "WrongScalarTag";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::FamilyTooLarge: return "FamilyTooLarge";
        case ErrorCode::RankDeficientDraw: return "RankDeficientDraw";
        case ErrorCode::UnknownFixture: return "UnknownFixture";
        case ErrorCode::InvalidProblem: return "InvalidProblem";
        case ErrorCode::SimplexCycling: return "SimplexCycling";
        case ErrorCode::SolverFailure: return "SolverFailure";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::FileError: return "FileError";
    }
    return "UnknownError";
}

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NumericalFailure:
        case ErrorCode::RankDeficientDraw:
        case ErrorCode::SimplexCycling:
        case ErrorCode::SolverFailure:
            return false;
        default:
            return true;
    }
}

}  // namespace hadamard
