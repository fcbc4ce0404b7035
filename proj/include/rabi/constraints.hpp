#pragma once

#include <array>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/ratpoly.hpp"

namespace rabi {

// Exact-rational model parameters for the constraint recurrences. The coupling g
// enters only through the polynomial variable x = (2g)^2.
struct RatParams {
    Rational omega = 1;
    Rational delta = 0;
    Rational epsilon = 0;
};

// Three-term recurrence generating Q_k(x):
//   Q_0 = 1, Q_1 = x - alpha_1, Q_k = (x - alpha_k) Q_{k-1} - beta_k x Q_{k-2}.
// The primed variant replaces epsilon by -epsilon in alpha_k for every k.
struct ConstraintRecurrence {
    int n_target = 0;
    bool primed = false;
    RatParams params;

    Rational alpha(int k) const;
    Rational beta(int k) const;
};

// Coefficients h_0..h_{n+1} of the truncating series expansion in x = (g-z)/(2g),
// together with the recurrence coefficients (A_m, B_m, C_m) for m = 1..n+1.
struct HeunSeries {
    std::vector<double> h;
    std::vector<std::array<double, 3>> coeffs_abc;
};

struct RootCountReport {
    int n = 0;
    Branch branch = Branch::Plus;
    int predicted = 0;
    int counted = 0;
    std::vector<double> roots_x;
    std::vector<double> couplings_g;
    std::vector<RootInterval> intervals;
};

// Monic constraint polynomial Q_n in x = (2g)^2; Minus branch uses the primed
// recurrence (epsilon -> -epsilon).
RatPoly constraint_poly(const RatParams& p, int n, Branch branch);

// A_m, B_m, C_m of the series recurrence A_m h_m = B_m h_{m-1} + C_m h_{m-2}.
std::array<double, 3> heun_coeffs(const ModelParams& p, int n, Branch branch, int m);

// h_0..h_{n+1} by forward recurrence; raises VanishingA if some A_m = 0 for m <= n+1.
HeunSeries heun_series(const ModelParams& p, int n, Branch branch);

// The tail h_{n+1}: a constraint residual, zero exactly on the exceptional surface.
double heun_tail(const ModelParams& p, int n, Branch branch);

// Sturm count and isolation of the positive roots of Q_n, with the predicted
// count from the sign pattern of the alpha_k. An alpha_k that is exactly zero
// is a boundary parameter point and raises Boundary.
RootCountReport exceptional_couplings(const RatParams& p, int n, Branch branch);

// True iff the positive roots of Q_k and Q_{k-1} strictly interlace for all
// 2 <= k <= n. Requires 0 < delta/omega < sqrt(1 + 2 epsilon/omega).
bool verify_interlacing(const RatParams& p, int n);

// With epsilon fixed to m*omega/2, the maximum distance from a positive root of
// Q_n to the nearest positive root of the primed Q_{n+m}.
double crossing_coincidence(const Rational& omega, const Rational& delta, int n, int m);

} // namespace rabi
