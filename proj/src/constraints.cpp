#include "rabi/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rabi/error.hpp"
#include "rabi/log.hpp"

namespace rabi {

Rational ConstraintRecurrence::alpha(int k) const {
    Rational eps = primed ? Rational(-params.epsilon) : params.epsilon;
    Rational kr(k);
    return (kr * kr * params.omega * params.omega + 2 * kr * eps * params.omega -
            params.delta * params.delta) / kr;
}

Rational ConstraintRecurrence::beta(int k) const {
    return Rational(n_target - k + 1) * params.omega * params.omega;
}

namespace {

void check_rat_params(const RatParams& p) {
    if (!(p.omega > 0)) fail(ErrorCode::NonPositiveOmega, "omega must be positive");
}

} // namespace

RatPoly constraint_poly(const RatParams& p, int n, Branch branch) {
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");
    check_rat_params(p);
    ConstraintRecurrence rec{n, branch == Branch::Minus, p};

    RatPoly x(std::vector<Rational>{0, 1});
    RatPoly prev = RatPoly::constant(1);
    if (n == 0) return prev;
    RatPoly cur = x - RatPoly::constant(rec.alpha(1));
    for (int k = 2; k <= n; ++k) {
        RatPoly next = (x - RatPoly::constant(rec.alpha(k))) * cur - (x * rec.beta(k)) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::array<double, 3> heun_coeffs(const ModelParams& p, int n, Branch branch, int m) {
    double w = p.omega;
    double eps = branch_sign(branch) * p.epsilon;
    double g2 = p.g * p.g / (w * w);
    double nm = 1.0 - m + n;
    double a = m * (-1.0 + m - n - 2.0 * eps / w);
    double b = nm * nm - 4.0 * (m - 1) * g2 - p.delta * p.delta / (w * w) + 2.0 * nm * eps / w;
    double c = 4.0 * (m - 2.0 - n) * g2;
    return {a, b, c};
}

namespace {

bool vanishing_a(double a, int m) { return std::fabs(a) < 1e-10 * m; }

} // namespace

HeunSeries heun_series(const ModelParams& params, int n, Branch branch) {
    ModelParams p = validate_params(params);
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");

    HeunSeries s;
    s.h.assign(n + 2, 0.0);
    s.h[0] = 1.0;
    double hm2 = 0.0; // h_{-1}
    for (int m = 1; m <= n + 1; ++m) {
        auto [a, b, c] = heun_coeffs(p, n, branch, m);
        s.coeffs_abc.push_back({a, b, c});
        if (vanishing_a(a, m)) {
            fail(ErrorCode::VanishingA,
                 "series coefficient A_" + std::to_string(m) + " vanishes; series route inapplicable");
        }
        s.h[m] = (b * s.h[m - 1] + c * hm2) / a;
        hm2 = s.h[m - 1];
        if (m % 8 == 0) {
            double peak = 0.0;
            for (int j = 0; j <= m; ++j) peak = std::max(peak, std::fabs(s.h[j]));
            if (peak > 1e100) { // overflow guard; rescaling preserves the recurrence
                for (int j = 0; j <= m; ++j) s.h[j] /= peak;
                hm2 /= peak;
            }
        }
    }
    return s;
}

double heun_tail(const ModelParams& params, int n, Branch branch) {
    ModelParams p = validate_params(params);
    if (n < 0) fail(ErrorCode::NegativeLevel, "level index must be nonnegative");

    double prev = 0.0; // h_{m-2}
    double cur = 1.0;  // h_{m-1}
    double next = cur;
    for (int m = 1; m <= n + 1; ++m) {
        auto [a, b, c] = heun_coeffs(p, n, branch, m);
        if (vanishing_a(a, m)) {
            fail(ErrorCode::VanishingA,
                 "series coefficient A_" + std::to_string(m) + " vanishes; tail undefined");
        }
        next = (b * cur + c * prev) / a;
        prev = cur;
        cur = next;
        if (m % 8 == 0) {
            double peak = std::max(std::fabs(prev), std::fabs(cur));
            if (peak > 0.0) {
                prev /= peak;
                cur /= peak;
            }
        }
    }
    return next;
}

RootCountReport exceptional_couplings(const RatParams& p, int n, Branch branch) {
    if (n < 1) fail(ErrorCode::NegativeLevel, "root counting needs n >= 1");
    check_rat_params(p);

    ConstraintRecurrence rec{n, branch == Branch::Minus, p};
    RootCountReport report;
    report.n = n;
    report.branch = branch;
    for (int k = 1; k <= n; ++k) {
        int s = sgn(rec.alpha(k));
        if (s == 0) {
            fail(ErrorCode::Boundary,
                 "delta sits exactly on a band edge (alpha_" + std::to_string(k) + " = 0)");
        }
        if (s > 0) ++report.predicted;
    }

    RatPoly q = constraint_poly(p, n, branch);
    report.intervals = isolate_positive_roots(q);
    report.counted = sturm_count(q, Rational(0), cauchy_bound(q));
    if (report.counted != static_cast<int>(report.intervals.size()) ||
        report.counted != report.predicted) {
        fail(ErrorCode::RootCountMismatch,
             "positive-root count " + std::to_string(report.counted) + " does not match the predicted " +
             std::to_string(report.predicted));
    }
    for (const RootInterval& iv : report.intervals) {
        report.roots_x.push_back(iv.refined);
        report.couplings_g.push_back(std::sqrt(iv.refined) / 2.0);
    }
    return report;
}

namespace {

// Halve a certified sign-change bracket around a root of q.
void shrink_bracket(const RatPoly& q, Rational& lo, Rational& hi) {
    if (lo == hi) return;
    Rational mid = (lo + hi) / 2;
    int s = sgn(q.eval(mid));
    if (s == 0) {
        lo = mid;
        hi = mid;
        return;
    }
    if (s == sgn(q.eval(hi))) hi = mid; else lo = mid;
}

// Certify root(a) < root(b) by shrinking both brackets until they separate.
bool certify_order(const RatPoly& qa, RootInterval& a, const RatPoly& qb, RootInterval& b) {
    for (int round = 0; round < 256; ++round) {
        if (a.hi <= b.lo) return true;
        if (b.hi <= a.lo) return false;
        if (a.hi - a.lo >= b.hi - b.lo) shrink_bracket(qa, a.lo, a.hi);
        else shrink_bracket(qb, b.lo, b.hi);
    }
    return false;
}

} // namespace

bool verify_interlacing(const RatParams& p, int n) {
    if (n < 2) fail(ErrorCode::NegativeLevel, "interlacing needs n >= 2");
    check_rat_params(p);
    Rational d2 = p.delta * p.delta;
    Rational limit = p.omega * p.omega + 2 * p.epsilon * p.omega;
    if (!(p.delta > 0) || !(d2 < limit)) {
        fail(ErrorCode::OutOfTheoremRange, "delta must satisfy 0 < delta < omega sqrt(1 + 2 eps/omega)");
    }

    std::vector<RatPoly> q(n + 1);
    std::vector<std::vector<RootInterval>> roots(n + 1);
    for (int k = 1; k <= n; ++k) {
        q[k] = constraint_poly(p, k, Branch::Plus);
        roots[k] = isolate_positive_roots(q[k]);
        if (static_cast<int>(roots[k].size()) != k) return false;
    }

    for (int k = 2; k <= n; ++k) {
        RatPoly shared = poly_gcd(q[k], q[k - 1]);
        if (shared.degree() > 0 &&
            sturm_count(shared, Rational(0), cauchy_bound(shared)) > 0) {
            return false; // common positive root: not strict
        }
        // required order: r_k[0] < r_{k-1}[0] < r_k[1] < ... < r_k[k-1]
        for (int i = 0; i + 1 < k; ++i) {
            if (!certify_order(q[k], roots[k][i], q[k - 1], roots[k - 1][i])) return false;
            if (!certify_order(q[k - 1], roots[k - 1][i], q[k], roots[k][i + 1])) return false;
        }
    }
    return true;
}

double crossing_coincidence(const Rational& omega, const Rational& delta, int n, int m) {
    if (n < 0 || m < 1) fail(ErrorCode::NegativeLevel, "need n >= 0 and m >= 1");
    RatParams p{omega, delta, Rational(m) * omega / 2};

    RatPoly qn = constraint_poly(p, n, Branch::Plus);
    RatPoly qp = constraint_poly(p, n + m, Branch::Minus);
    std::vector<RootInterval> rn = isolate_positive_roots(qn);
    std::vector<RootInterval> rp = isolate_positive_roots(qp);
    if (rn.size() != rp.size()) {
        fail(ErrorCode::RootCountMismatch,
             "the shifted primed polynomial has a different positive-root count");
    }

    double worst = 0.0;
    for (const RootInterval& a : rn) {
        double best = std::numeric_limits<double>::infinity();
        for (const RootInterval& b : rp) best = std::min(best, std::fabs(a.refined - b.refined));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace rabi
