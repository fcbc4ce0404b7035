#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

enum class ErrorCode {
    NonPositiveOmega,
    NonFiniteField,
    NegativeLevel,
    ZeroPolynomial,
    NonSquarefree,
    VanishingA,
    Boundary,
    OutOfTheoremRange,
    PoleCollision,
    CoincidentRoots,
    NoConvergence,
    OffSurface,
    ZeroDelta,
    CutoffTooSmall,
    NotConverged,
    RootCountMismatch,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace rabi
