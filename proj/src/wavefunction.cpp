#include "rabi/wavefunction.hpp"

#include <cmath>
#include <numbers>

#include "rabi/error.hpp"

namespace rabi {

namespace {

// Ascending monic coefficients of prod (z - r_i).
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> a(roots.size() + 1, Complex(0.0));
    a[0] = 1.0;
    size_t used = 0;
    for (const Complex& r : roots) {
        ++used;
        for (size_t j = used; j >= 1; --j) a[j] = a[j - 1] - r * a[j];
        a[0] = -r * a[0];
    }
    return a;
}

Complex eval_poly(const std::vector<Complex>& a, Complex z) {
    Complex acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Complex eval_poly_d1(const std::vector<Complex>& a, Complex z) {
    Complex acc = 0.0;
    for (size_t k = a.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * a[k];
    return acc;
}

Complex eval_poly_d2(const std::vector<Complex>& a, Complex z) {
    Complex acc = 0.0;
    for (size_t k = a.size() - 1; k >= 2; --k) {
        acc = acc * z + static_cast<double>(k) * static_cast<double>(k - 1) * a[k];
    }
    return acc;
}

// The pair shares one normalization: the product-form component carries the
// (-1)^n convention on the Minus branch, fixing the partner's sign too.
double leading_sign(const WavefunctionPair& w) {
    return (w.branch == Branch::Minus && w.n % 2 == 1) ? -1.0 : 1.0;
}

struct ComponentValues {
    Complex product, product_d;
    Complex partner, partner_d;
};

ComponentValues eval_pair(const WavefunctionPair& w, const std::vector<Complex>& a, Complex z) {
    const ModelParams& p = w.params;
    double s = branch_sign(w.branch);
    double lead = leading_sign(w);
    Complex S = eval_poly(a, z);
    Complex S1 = eval_poly_d1(a, z);
    Complex S2 = eval_poly_d2(a, z);
    Complex expo = std::exp(-s * p.g * z / p.omega);
    double slope = -s * p.g / p.omega;

    ComponentValues v;
    v.product = lead * expo * S;
    v.product_d = lead * expo * (S1 + slope * S);
    if (p.delta == 0.0) {
        if (!w.roots.degenerate_atomic) {
            fail(ErrorCode::ZeroDelta, "partner component undefined at delta = 0");
        }
        v.partner = 0.0;
        v.partner_d = 0.0;
        return v;
    }
    double kappa = p.g * p.g / p.omega + w.energy - s * p.epsilon;
    Complex pole = p.omega * z + s * p.g;
    Complex bracket = pole * S1 - kappa * S;
    Complex bracket_d = p.omega * S1 + pole * S2 - kappa * S1;
    v.partner = -(lead / p.delta) * expo * bracket;
    v.partner_d = -(lead / p.delta) * expo * (bracket_d + slope * bracket);
    return v;
}

} // namespace

WavefunctionPair make_wavefunction(const ModelParams& params, int n, Branch branch,
                                   RootSet roots) {
    ModelParams p = validate_params(params);
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");
    if (roots.n() != n) fail(ErrorCode::RootCountMismatch, "root set size differs from n");
    WavefunctionPair w;
    w.branch = branch;
    w.n = n;
    w.roots = std::move(roots);
    w.params = p;
    w.energy = exceptional_energy(p, n, branch);
    return w;
}

Complex component_eval(const WavefunctionPair& w, Component which, Complex z) {
    std::vector<Complex> a = poly_from_roots(w.roots.roots);
    ComponentValues v = eval_pair(w, a, z);
    bool product_side = (w.branch == Branch::Plus) == (which == Component::PlusComp);
    return product_side ? v.product : v.partner;
}

std::vector<Complex> standard_sample_grid(const ModelParams& params) {
    ModelParams p = validate_params(params);
    double pole = p.g / p.omega;
    auto clear_of_poles = [pole](Complex z) {
        return std::abs(z - pole) > 1e-3 && std::abs(z + pole) > 1e-3;
    };
    std::vector<Complex> pts;
    for (double radius : {1.0, 2.0}) {
        for (int k = 0; k < 16; ++k) {
            double th = 2.0 * std::numbers::pi * k / 16.0;
            Complex z = radius * Complex(std::cos(th), std::sin(th));
            if (clear_of_poles(z)) pts.push_back(z);
        }
    }
    for (int k = 0; k < 13; ++k) {
        Complex z(-3.0 + 0.5 * k, 0.0);
        if (clear_of_poles(z)) pts.push_back(z);
    }
    return pts;
}

double schrodinger_residual(const WavefunctionPair& w, const std::vector<Complex>& samples) {
    const ModelParams& p = w.params;
    std::vector<Complex> a = poly_from_roots(w.roots.roots);
    double worst = 0.0;
    double biggest = 0.0;
    for (const Complex& z : samples) {
        ComponentValues v = eval_pair(w, a, z);
        Complex psi_p = w.branch == Branch::Plus ? v.product : v.partner;
        Complex psi_p_d = w.branch == Branch::Plus ? v.product_d : v.partner_d;
        Complex psi_m = w.branch == Branch::Plus ? v.partner : v.product;
        Complex psi_m_d = w.branch == Branch::Plus ? v.partner_d : v.product_d;

        Complex r1 = (p.omega * z + p.g) * psi_p_d + (p.g * z + p.epsilon - w.energy) * psi_p +
                     p.delta * psi_m;
        Complex r2 = (p.omega * z - p.g) * psi_m_d - (p.g * z + p.epsilon + w.energy) * psi_m +
                     p.delta * psi_p;
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
        biggest = std::max({biggest, std::abs(psi_p), std::abs(psi_m)});
    }
    return worst / std::max(biggest, 1e-300);
}

} // namespace rabi
