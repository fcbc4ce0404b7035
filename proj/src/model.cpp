#include "rabi/model.hpp"

#include <cmath>

namespace rabi {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveOmega: return "NonPositiveOmega";
        case ErrorCode::NonFiniteField: return "NonFiniteField";
        case ErrorCode::NegativeLevel: return "NegativeLevel";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::NonSquarefree: return "NonSquarefree";
        case ErrorCode::VanishingA: return "VanishingA";
        case ErrorCode::Boundary: return "Boundary";
        case ErrorCode::OutOfTheoremRange: return "OutOfTheoremRange";
        case ErrorCode::PoleCollision: return "PoleCollision";
        case ErrorCode::CoincidentRoots: return "CoincidentRoots";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::OffSurface: return "OffSurface";
        case ErrorCode::ZeroDelta: return "ZeroDelta";
        case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::RootCountMismatch: return "RootCountMismatch";
    }
    return "Unknown";
}

ModelParams validate_params(ModelParams p) {
    if (!std::isfinite(p.omega) || !std::isfinite(p.g) || !std::isfinite(p.delta) ||
        !std::isfinite(p.epsilon)) {
        fail(ErrorCode::NonFiniteField, "model parameters must be finite");
    }
    if (p.omega <= 0.0) {
        fail(ErrorCode::NonPositiveOmega, "omega must be positive");
    }
    // only delta^2 ever enters; keep the canonical sign
    p.delta = std::fabs(p.delta);
    return p;
}

double exceptional_energy(const ModelParams& p, int n, Branch branch) {
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");
    return n * p.omega - p.g * p.g / p.omega + branch_sign(branch) * p.epsilon;
}

ExceptionalLevel make_level(const ModelParams& p, int n, Branch branch) {
    return ExceptionalLevel{n, branch, exceptional_energy(p, n, branch)};
}

} // namespace rabi
