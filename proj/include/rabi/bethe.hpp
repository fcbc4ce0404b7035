#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

using Complex = std::complex<double>;

// X(z) S'' + Y(z) S' + Z(z) S = 0 with X = sum a_k z^k (deg <= 4),
// Y = sum b_k z^k (deg <= 3), Z = sum c_k z^k (deg <= 2).
struct OdeCoefficients {
    std::array<double, 5> a{};
    std::array<double, 4> b{};
    std::array<double, 3> c{};

    Complex X(Complex z) const;
    Complex Y(Complex z) const;
    Complex Z(Complex z) const;
};

// Roots z_i of the polynomial factor of a wavefunction component. Complex roots
// are stored as such; on-surface sets with real coefficients come in conjugate
// pairs. The degenerate atomic limit (delta = 0) pins every root at -+ g/omega
// and is flagged, since the pairwise equations are singular there.
struct RootSet {
    std::vector<Complex> roots;
    bool degenerate_atomic = false;

    int n() const { return static_cast<int>(roots.size()); }
};

// Coefficients of the second-order ODE satisfied by the polynomial factor of
// the branch's wavefunction component at the given energy.
OdeCoefficients rabi_ode_coefficients(const ModelParams& p, double energy, Branch branch);

// Coefficient-matching conditions for a degree-n polynomial solution with
// distinct roots. Each residual vanishes iff the corresponding condition holds;
// for the Rabi coefficients the quadratic one is identically zero, the linear
// one fixes the exceptional energy, and the constant one is the root constraint.
struct ZhangConditions {
    double quadratic = 0.0;
    std::function<double(double sum_z)> linear;
    std::function<double(double sum_z, double sum_z2, double sum_pairs)> constant;
};

ZhangConditions zhang_conditions(const OdeCoefficients& k, int n);

// Residuals of the generic root equations sum_{j != i} 2/(z_i - z_j) + Y(z_i)/X(z_i).
std::vector<Complex> zhang_root_residual(const OdeCoefficients& k,
                                         const std::vector<Complex>& roots);

// Magnitude of the branch's algebraic-equation residual at each root.
std::vector<double> bethe_residual(const RootSet& roots, const ModelParams& p,
                                   int n, Branch branch);

// delta^2 + 2 n g^2 + 2 omega g sum z_i (Plus) or with - sum z_i (Minus).
double constraint_residual(const RootSet& roots, const ModelParams& p,
                           int n, Branch branch);

// Bethe roots from the truncating series expansion in x = (g-z)/(2g), via the
// companion matrix of the degree-n polynomial sum h_m x^m.
RootSet roots_via_recurrence(const ModelParams& p, int n, Branch branch);

// Damped Newton iteration on the algebraic equations, starting from init when
// given. Converged output satisfies max residual <= 1e-10 and
// |constraint_residual| <= 1e-10.
RootSet solve_bethe(const ModelParams& p, int n, Branch branch,
                    const RootSet* init = nullptr);

} // namespace rabi
