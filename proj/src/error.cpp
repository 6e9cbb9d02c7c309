#include "formred/error.hpp"

namespace formred {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::NonConvergentRoots: return "NonConvergentRoots";
    case ErrorCode::DeterminantNotOne: return "DeterminantNotOne";
    case ErrorCode::DegreeDrop: return "DegreeDrop";
    case ErrorCode::ConjugacyViolation: return "ConjugacyViolation";
    case ErrorCode::NonPositiveU: return "NonPositiveU";
    case ErrorCode::DegenerateCluster: return "DegenerateCluster";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadCovariant: return "BadCovariant";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OddDegree: return "OddDegree";
    case ErrorCode::WrongClusterSize: return "WrongClusterSize";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::NotMajority: return "NotMajority";
    case ErrorCode::MissingDistances: return "MissingDistances";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::HypothesesNotMet: return "HypothesesNotMet";
    case ErrorCode::StepLimit: return "StepLimit";
    case ErrorCode::GrowthAssertionFailed: return "GrowthAssertionFailed";
    case ErrorCode::CovariantDrift: return "CovariantDrift";
    case ErrorCode::MatrixOverflow: return "MatrixOverflow";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace formred
