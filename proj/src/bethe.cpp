#include "rabi/bethe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rabi/constraints.hpp"
#include "rabi/error.hpp"
#include "rabi/log.hpp"
#include "rabi/rational.hpp"

namespace rabi {

namespace {

template <size_t K>
Complex horner(const std::array<double, K>& coeffs, Complex z) {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

} // namespace

Complex OdeCoefficients::X(Complex z) const { return horner(a, z); }
Complex OdeCoefficients::Y(Complex z) const { return horner(b, z); }
Complex OdeCoefficients::Z(Complex z) const { return horner(c, z); }

OdeCoefficients rabi_ode_coefficients(const ModelParams& params, double energy, Branch branch) {
    ModelParams p = validate_params(params);
    double w = p.omega, g = p.g, e = p.epsilon, E = energy;
    double s = branch_sign(branch);
    OdeCoefficients k;
    k.a[0] = -g * g;
    k.a[2] = w * w;
    k.b[0] = s * (2.0 * g * g * g / w - w * g) - 2.0 * e * g;
    k.b[1] = w * w - 2.0 * g * g - 2.0 * E * w;
    k.b[2] = -s * 2.0 * w * g;
    k.c[0] = E * E - p.delta * p.delta - e * e + s * 2.0 * e * g * g / w - g * g * g * g / (w * w);
    k.c[1] = s * 2.0 * g * (g * g / w + E - s * e);
    return k;
}

ZhangConditions zhang_conditions(const OdeCoefficients& coeffs, int n) {
    if (n < 1) fail(ErrorCode::NegativeLevel, "conditions need n >= 1");
    const OdeCoefficients k = coeffs;
    const double nn = n;
    ZhangConditions z;
    z.quadratic = k.c[2] + nn * (nn - 1) * k.a[4] + nn * k.b[3];
    z.linear = [k, nn](double sum_z) {
        return -k.c[1] - (2.0 * (nn - 1) * k.a[4] + k.b[3]) * sum_z - nn * (nn - 1) * k.a[3] -
               nn * k.b[2];
    };
    z.constant = [k, nn](double sum_z, double sum_z2, double sum_pairs) {
        return -k.c[0] - (2.0 * (nn - 1) * k.a[4] + k.b[3]) * sum_z2 - 2.0 * k.a[4] * sum_pairs -
               (2.0 * (nn - 1) * k.a[3] + k.b[2]) * sum_z - nn * (nn - 1) * k.a[2] - nn * k.b[1];
    };
    return z;
}

std::vector<Complex> zhang_root_residual(const OdeCoefficients& k,
                                         const std::vector<Complex>& roots) {
    size_t n = roots.size();
    std::vector<Complex> res(n);
    for (size_t i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            Complex dz = roots[i] - roots[j];
            if (std::abs(dz) == 0.0) fail(ErrorCode::CoincidentRoots, "coincident roots");
            acc += 2.0 / dz;
        }
        Complex x = k.X(roots[i]);
        if (std::abs(x) == 0.0) fail(ErrorCode::PoleCollision, "root sits on a zero of X");
        res[i] = acc + k.Y(roots[i]) / x;
    }
    return res;
}

namespace {

struct BranchWeights {
    double pole_minus; // numerator over (omega z - g)
    double pole_plus;  // numerator over (omega z + g)
    double shift;      // additive constant
};

BranchWeights branch_weights(const ModelParams& p, int n, Branch branch) {
    double w = p.omega, e = p.epsilon;
    if (branch == Branch::Plus) {
        return {n * w * w + 2.0 * e * w, n * w * w - w * w, -2.0 * p.g};
    }
    return {n * w * w - w * w, n * w * w - 2.0 * e * w, 2.0 * p.g};
}

// Residual of the pairwise root equations; ok=false flags a near-singular
// configuration instead of throwing, for use inside the solver loop.
bool residual_vector(const std::vector<Complex>& z, const ModelParams& p,
                     const BranchWeights& bw, std::vector<Complex>& out) {
    size_t n = z.size();
    out.assign(n, Complex(0.0));
    double w = p.omega, g = p.g;
    for (size_t i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            Complex dz = z[i] - z[j];
            if (std::abs(dz) < 1e-13) return false;
            acc += 2.0 * w / dz;
        }
        Complex dm = w * z[i] - g;
        Complex dp = w * z[i] + g;
        if (std::abs(dm) < 1e-13 || std::abs(dp) < 1e-13) return false;
        out[i] = acc - bw.pole_minus / dm - bw.pole_plus / dp + bw.shift;
    }
    return true;
}

double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const Complex& c : v) m = std::max(m, std::abs(c));
    return m;
}

// Root sets of the real-coefficient systems come in exact conjugate pairs;
// enforcing that before sorting keeps the ordering stable across solvers.
void sort_roots(std::vector<Complex>& roots) {
    double scale = 1.0;
    for (const Complex& z : roots) scale = std::max(scale, std::abs(z));
    const double tol = 1e-10 * scale;
    for (Complex& z : roots) {
        if (std::fabs(z.imag()) <= tol) z = Complex(z.real(), 0.0);
    }
    std::vector<size_t> open;
    for (size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].imag() == 0.0) continue;
        bool paired = false;
        for (auto it = open.begin(); it != open.end(); ++it) {
            if (std::abs(roots[*it] - std::conj(roots[i])) <= tol) {
                size_t j = *it;
                double re = 0.5 * (roots[i].real() + roots[j].real());
                double im = 0.5 * (std::fabs(roots[i].imag()) + std::fabs(roots[j].imag()));
                roots[j] = Complex(re, roots[j].imag() > 0.0 ? im : -im);
                roots[i] = std::conj(roots[j]);
                open.erase(it);
                paired = true;
                break;
            }
        }
        if (!paired) open.push_back(i);
    }
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

std::vector<Complex> companion_roots(const std::vector<Complex>& coeffs) {
    int deg = static_cast<int>(coeffs.size()) - 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) m(i, deg - 1) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    std::vector<Complex> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()(i);
    sort_roots(roots);
    return roots;
}

RootSet degenerate_set(const ModelParams& p, int n, Branch branch) {
    RootSet rs;
    rs.degenerate_atomic = true;
    rs.roots.assign(n, Complex(-branch_sign(branch) * p.g / p.omega, 0.0));
    return rs;
}

// Series coefficients h_0..h_n in x=(g-z)/(2g), plus the surface residual from
// the first recurrence row past the truncation point. Throws VanishingA when
// the series itself cannot be built, OffSurface when the parameters miss the
// exceptional surface for this level.
std::vector<double> series_poly_checked(const ModelParams& p, int n, Branch branch) {
    std::vector<double> h(n + 1, 0.0);
    h[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        auto [a, b, c] = heun_coeffs(p, n, branch, m);
        if (std::fabs(a) < 1e-10 * m) {
            fail(ErrorCode::VanishingA,
                 "series coefficient A_" + std::to_string(m) + " vanishes; series route inapplicable");
        }
        h[m] = (b * h[m - 1] + c * (m >= 2 ? h[m - 2] : 0.0)) / a;
    }
    double scale = 1.0;
    for (double v : h) scale = std::max(scale, std::fabs(v));
    auto [a, b, c] = heun_coeffs(p, n, branch, n + 1);
    double tail_num = b * h[n] + c * (n >= 1 ? h[n - 1] : 0.0);
    double residual = std::fabs(a) < 1e-10 * (n + 1)
                          ? std::fabs(tail_num) / std::max(std::fabs(b) + std::fabs(c), 1e-300)
                          : std::fabs(tail_num / a) / scale;
    if (residual > 1e-8) {
        fail(ErrorCode::OffSurface, "parameters are not on the exceptional surface for this level");
    }
    return h;
}

// Surface membership via exact constraint-polynomial evaluation; used when the
// series route is unavailable.
void check_surface_by_constraint(const ModelParams& p, int n, Branch branch) {
    RatParams rp{rational_from_double(p.omega), rational_from_double(p.delta),
                 rational_from_double(p.epsilon)};
    RatPoly q = constraint_poly(rp, n, branch);
    double x = 4.0 * p.g * p.g;
    double scale = 0.0, pow_x = 1.0;
    for (int k = 0; k <= q.degree(); ++k) {
        scale += std::fabs(q.coeff(k).get_d()) * pow_x;
        pow_x *= x;
    }
    double residual = std::fabs(q.eval_double(x)) / std::max(scale, 1.0);
    if (residual > 1e-8) {
        fail(ErrorCode::OffSurface, "parameters are not on the exceptional surface for this level");
    }
}

} // namespace

RootSet roots_via_recurrence(const ModelParams& params, int n, Branch branch) {
    ModelParams p = validate_params(params);
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");
    if (p.delta == 0.0) return degenerate_set(p, n, branch);

    std::vector<double> h = series_poly_checked(p, n, branch);
    if (n == 0) return RootSet{};

    double scale = 0.0;
    for (double v : h) scale = std::max(scale, std::fabs(v));
    if (std::fabs(h[n]) < 1e-12 * scale) {
        fail(ErrorCode::NoConvergence, "series polynomial dropped degree; a root escaped to infinity");
    }
    std::vector<Complex> coeffs(h.begin(), h.end());
    std::vector<Complex> xroots = companion_roots(coeffs);

    RootSet rs;
    double s = branch_sign(branch);
    for (const Complex& x : xroots) rs.roots.push_back(s * p.g * (1.0 - 2.0 * x));
    sort_roots(rs.roots);
    return rs;
}

std::vector<double> bethe_residual(const RootSet& roots, const ModelParams& params,
                                   int n, Branch branch) {
    ModelParams p = validate_params(params);
    if (roots.n() != n) fail(ErrorCode::RootCountMismatch, "root set size differs from n");
    double w = p.omega, g = p.g;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(roots.roots[i] - roots.roots[j]) <= 1e-9) {
                fail(ErrorCode::CoincidentRoots, "roots closer than the distinctness tolerance");
            }
        }
        if (std::abs(w * roots.roots[i] - g) <= 1e-9 || std::abs(w * roots.roots[i] + g) <= 1e-9) {
            fail(ErrorCode::PoleCollision, "a root sits on a pole at +-g/omega");
        }
    }
    std::vector<Complex> res;
    residual_vector(roots.roots, p, branch_weights(p, n, branch), res);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = std::abs(res[i]);
    return out;
}

double constraint_residual(const RootSet& roots, const ModelParams& params,
                           int n, Branch branch) {
    ModelParams p = validate_params(params);
    Complex sum = 0.0;
    for (const Complex& z : roots.roots) sum += z;
    return p.delta * p.delta + 2.0 * n * p.g * p.g +
           branch_sign(branch) * 2.0 * p.omega * p.g * sum.real();
}

namespace {

// Monomial coefficients of the degree-n polynomial factor, built downward from
// the leading term; the pivot 2*omega*g*(n-m+1) (Plus) never vanishes on
// surface for g > 0, likewise its Minus mirror.
bool monomial_init(const ModelParams& p, int n, Branch branch, std::vector<Complex>& out) {
    double E = exceptional_energy(p, n, branch);
    OdeCoefficients k = rabi_ode_coefficients(p, E, branch);
    std::vector<double> c(n + 3, 0.0);
    c[n] = 1.0;
    for (int m = n; m >= 1; --m) {
        double pivot = k.b[2] * (m - 1) + k.c[1];
        if (std::fabs(pivot) < 1e-12) return false;
        double rhs = k.a[0] * (m + 2.0) * (m + 1.0) * c[m + 2] + k.b[0] * (m + 1.0) * c[m + 1] +
                     (k.a[2] * m * (m - 1.0) + k.b[1] * m + k.c[0]) * c[m];
        c[m - 1] = -rhs / pivot;
    }
    std::vector<Complex> coeffs(c.begin(), c.begin() + n + 1);
    out = companion_roots(coeffs);
    return true;
}

bool newton_polish(std::vector<Complex>& z, const ModelParams& p, const BranchWeights& bw) {
    size_t n = z.size();
    double w = p.omega, g = p.g;
    std::vector<Complex> f, f_trial;
    if (!residual_vector(z, p, bw, f)) return false;
    double fn = max_abs(f);

    for (int iter = 0; iter < 200 && fn > 1e-12; ++iter) {
        Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(n, n);
        for (size_t i = 0; i < n; ++i) {
            Complex diag = 0.0;
            for (size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                Complex dz2 = (z[i] - z[j]) * (z[i] - z[j]);
                diag += -2.0 * w / dz2;
                jac(i, j) = 2.0 * w / dz2;
            }
            Complex dm = w * z[i] - g;
            Complex dp = w * z[i] + g;
            diag += bw.pole_minus * w / (dm * dm) + bw.pole_plus * w / (dp * dp);
            jac(i, i) = diag;
        }
        Eigen::VectorXcd rhs(n);
        for (size_t i = 0; i < n; ++i) rhs(i) = -f[i];
        Eigen::VectorXcd step = jac.partialPivLu().solve(rhs);
        if (!step.allFinite()) return false;

        double t = 1.0;
        bool accepted = false;
        std::vector<Complex> trial(n);
        for (int halving = 0; halving <= 8; ++halving) {
            for (size_t i = 0; i < n; ++i) trial[i] = z[i] + t * step(i);
            if (residual_vector(trial, p, bw, f_trial) && max_abs(f_trial) < fn) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) return fn <= 1e-10;
        z = trial;
        f = f_trial;
        fn = max_abs(f);
    }
    return fn <= 1e-10;
}

} // namespace

RootSet solve_bethe(const ModelParams& params, int n, Branch branch, const RootSet* init) {
    ModelParams p = validate_params(params);
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");
    if (p.delta == 0.0) return degenerate_set(p, n, branch);

    try {
        series_poly_checked(p, n, branch);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::VanishingA) throw;
        check_surface_by_constraint(p, n, branch);
    }
    if (n == 0) return RootSet{};

    BranchWeights bw = branch_weights(p, n, branch);
    std::vector<std::vector<Complex>> starts;
    if (init != nullptr && init->n() == n) starts.push_back(init->roots);
    try {
        RootSet guess = roots_via_recurrence(p, n, branch);
        for (int k = 0; k < n; ++k) {
            guess.roots[k] += 1e-6 * Complex(std::cos(0.7 + k), std::sin(0.7 + k));
        }
        starts.push_back(guess.roots);
    } catch (const Error& err) {
        log_debug(std::string("series start unavailable: ") + err.what());
    }
    {
        std::vector<Complex> cluster(n);
        double base = -branch_sign(branch) * p.g / p.omega;
        for (int k = 0; k < n; ++k) {
            double r = 0.1 * (k + 1.0) / n;
            cluster[k] = base + r * Complex(std::cos(2.4 * k + 0.9), std::sin(2.4 * k + 0.9));
        }
        starts.push_back(std::move(cluster));
    }
    {
        std::vector<Complex> z;
        if (monomial_init(p, n, branch, z)) starts.push_back(std::move(z));
    }

    for (std::vector<Complex>& z : starts) {
        if (!newton_polish(z, p, bw)) continue;
        RootSet rs;
        rs.roots = std::move(z);
        sort_roots(rs.roots);
        if (std::fabs(constraint_residual(rs, p, n, branch)) > 1e-10) continue;
        return rs;
    }
    fail(ErrorCode::NoConvergence, "no starting set reached the residual tolerance");
}

} // namespace rabi
