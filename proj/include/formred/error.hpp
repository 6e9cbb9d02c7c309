#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace formred {

enum class ErrorCode {
    ZeroLeadingCoefficient,
    DegreeTooLow,
    NonConvergentRoots,
    DeterminantNotOne,
    DegreeDrop,
    ConjugacyViolation,
    NonPositiveU,
    DegenerateCluster,
    NoConvergence,
    BadCovariant,
    EmptyInput,
    OddDegree,
    WrongClusterSize,
    TriangleViolation,
    NotMajority,
    MissingDistances,
    NotApplicable,
    HypothesesNotMet,
    StepLimit,
    GrowthAssertionFailed,
    CovariantDrift,
    MatrixOverflow,
    MalformedInput,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace formred
