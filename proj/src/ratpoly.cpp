#include "rabi/ratpoly.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/error.hpp"

namespace rabi {

void RatPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RatPoly::RatPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
}

RatPoly RatPoly::zero() { return RatPoly{}; }

RatPoly RatPoly::constant(const Rational& c) {
    return RatPoly(std::vector<Rational>{c});
}

RatPoly RatPoly::from_roots(const std::vector<Rational>& roots) {
    RatPoly p = constant(1);
    for (const Rational& r : roots) {
        p = p * RatPoly(std::vector<Rational>{-r, Rational(1)});
    }
    return p;
}

Rational RatPoly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Rational(0);
    return coeffs_[k];
}

Rational RatPoly::leading() const {
    return coeffs_.empty() ? Rational(0) : coeffs_.back();
}

Rational RatPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double RatPoly::eval_double(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + it->get_d();
    }
    return acc;
}

RatPoly RatPoly::derivative() const {
    if (coeffs_.size() <= 1) return zero();
    std::vector<Rational> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = coeffs_[k] * Rational(static_cast<long>(k));
    }
    return RatPoly(std::move(d));
}

RatPoly RatPoly::operator+(const RatPoly& other) const {
    std::vector<Rational> out(std::max(coeffs_.size(), other.coeffs_.size()), Rational(0));
    for (size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
    for (size_t k = 0; k < other.coeffs_.size(); ++k) out[k] += other.coeffs_[k];
    return RatPoly(std::move(out));
}

RatPoly RatPoly::operator-(const RatPoly& other) const {
    std::vector<Rational> out(std::max(coeffs_.size(), other.coeffs_.size()), Rational(0));
    for (size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
    for (size_t k = 0; k < other.coeffs_.size(); ++k) out[k] -= other.coeffs_[k];
    return RatPoly(std::move(out));
}

RatPoly RatPoly::operator*(const RatPoly& other) const {
    if (is_zero() || other.is_zero()) return zero();
    std::vector<Rational> out(coeffs_.size() + other.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        for (size_t j = 0; j < other.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    return RatPoly(std::move(out));
}

RatPoly RatPoly::operator*(const Rational& s) const {
    std::vector<Rational> out = coeffs_;
    for (Rational& c : out) c *= s;
    return RatPoly(std::move(out));
}

RatPoly RatPoly::operator-() const {
    return *this * Rational(-1);
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& d) const {
    if (d.is_zero()) fail(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
    std::vector<Rational> rem = coeffs_;
    int dd = d.degree();
    if (degree() < dd) return {zero(), *this};
    std::vector<Rational> quo(degree() - dd + 1, Rational(0));
    Rational lead = d.leading();
    for (int k = degree(); k >= dd; --k) {
        Rational factor = rem[k] / lead;
        quo[k - dd] = factor;
        if (factor == 0) continue;
        for (int j = 0; j <= dd; ++j) {
            rem[k - dd + j] -= factor * d.coeff(j);
        }
    }
    rem.resize(dd);
    return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * (Rational(1) / a.leading());
}

namespace {

// Divide out (x - root) exactly; the caller guarantees p(root) == 0.
RatPoly deflate_linear(const RatPoly& p, const Rational& root) {
    RatPoly lin(std::vector<Rational>{-root, Rational(1)});
    auto [q, r] = p.divmod(lin);
    return q;
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
    std::vector<RatPoly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        const RatPoly& prev = chain[chain.size() - 2];
        RatPoly r = -(prev.divmod(chain.back()).second);
        if (r.is_zero()) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_variations(const std::vector<RatPoly>& chain, const Rational& x) {
    int variations = 0;
    int last = 0;
    for (const RatPoly& q : chain) {
        int s = sgn(q.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++variations;
        last = s;
    }
    return variations;
}

} // namespace

int sturm_count(const RatPoly& p, const Rational& lo, const Rational& hi) {
    if (p.is_zero()) fail(ErrorCode::ZeroPolynomial, "root count of the zero polynomial");
    if (!(lo < hi)) return 0;

    RatPoly q = p;
    int count = 0;
    while (!q.is_zero() && q.eval(hi) == 0) {
        q = deflate_linear(q, hi);
        count = 1; // the root at hi lies in (lo, hi]; count it once
    }
    while (!q.is_zero() && q.eval(lo) == 0) {
        q = deflate_linear(q, lo); // lo itself is excluded
    }
    if (q.degree() <= 0) return count;

    std::vector<RatPoly> chain = sturm_chain(q);
    count += sign_variations(chain, lo) - sign_variations(chain, hi);
    return count;
}

Rational cauchy_bound(const RatPoly& p) {
    if (p.is_zero()) fail(ErrorCode::ZeroPolynomial, "root bound of the zero polynomial");
    Rational lead = abs(p.leading());
    Rational biggest = 0;
    for (int k = 0; k < p.degree(); ++k) {
        Rational m = abs(p.coeff(k)) / lead;
        if (m > biggest) biggest = m;
    }
    return Rational(1) + biggest;
}

namespace {

struct Bracket {
    Rational lo, hi; // p(lo) != 0, p(hi) != 0, exactly one root inside
};

// Split point inside (lo, hi) where p does not vanish.
Rational nonroot_split(const RatPoly& p, const Rational& lo, const Rational& hi) {
    static const std::pair<int, int> fractions[] = {{1, 2}, {1, 3}, {2, 3}, {1, 5}, {4, 5}, {1, 7}};
    for (auto [num, den] : fractions) {
        Rational mid = lo + (hi - lo) * Rational(num, den);
        if (p.eval(mid) != 0) return mid;
    }
    // rationals at dyadic offsets must eventually miss the finitely many roots
    Rational width = hi - lo;
    Rational denom = 16;
    while (true) {
        Rational mid = lo + width / denom;
        if (p.eval(mid) != 0) return mid;
        denom *= 2;
    }
}

void isolate_recursive(const RatPoly& p, const std::vector<RatPoly>& chain,
                       const Rational& lo, const Rational& hi, int count,
                       std::vector<Bracket>& out) {
    if (count == 0) return;
    if (count == 1) {
        out.push_back(Bracket{lo, hi});
        return;
    }
    Rational mid = nonroot_split(p, lo, hi);
    int left = sign_variations(chain, lo) - sign_variations(chain, mid);
    isolate_recursive(p, chain, lo, mid, left, out);
    isolate_recursive(p, chain, mid, hi, count - left, out);
}

double refine_root(const RatPoly& p, Rational lo, Rational hi) {
    // certified bisection down to width 1e-9
    const Rational width_target(1, 1000000000);
    int sign_hi = sgn(p.eval(hi));
    while (hi - lo > width_target) {
        Rational mid = (lo + hi) / 2;
        int s = sgn(p.eval(mid));
        if (s == 0) {
            // landed exactly on the root
            lo = mid;
            hi = mid;
            break;
        }
        if (s == sign_hi) hi = mid; else lo = mid;
    }
    double x = (lo.get_d() + hi.get_d()) / 2.0;

    // Newton polish in floating point
    RatPoly dp = p.derivative();
    for (int step = 0; step < 10; ++step) {
        double f = p.eval_double(x);
        double df = dp.eval_double(x);
        if (df == 0.0) break;
        double next = x - f / df;
        if (!std::isfinite(next)) break;
        if (std::fabs(next - x) <= 1e-15 * std::max(1.0, std::fabs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

double residual_scale(const RatPoly& p, double x) {
    double acc = 0.0;
    double pow_x = 1.0;
    for (int k = 0; k <= p.degree(); ++k) {
        acc += std::fabs(p.coeff(k).get_d()) * pow_x;
        pow_x *= std::fabs(x);
    }
    return std::max(1.0, acc);
}

} // namespace

std::vector<RootInterval> isolate_positive_roots(const RatPoly& p) {
    if (p.is_zero()) fail(ErrorCode::ZeroPolynomial, "cannot isolate roots of the zero polynomial");

    RatPoly q = p;
    while (q.eval(Rational(0)) == 0 && q.degree() > 0) {
        q = deflate_linear(q, Rational(0)); // roots at the origin are not positive
    }
    if (q.degree() <= 0) return {};

    RatPoly g = poly_gcd(q, q.derivative());
    if (g.degree() > 0) {
        Rational gb = cauchy_bound(g);
        if (sturm_count(g, Rational(0), gb) > 0) {
            fail(ErrorCode::NonSquarefree, "repeated positive root (degenerate parameter point)");
        }
    }

    Rational bound = cauchy_bound(q);
    std::vector<RatPoly> chain = sturm_chain(q);
    int total = sign_variations(chain, Rational(0)) - sign_variations(chain, bound);
    std::vector<Bracket> brackets;
    isolate_recursive(q, chain, Rational(0), bound, total, brackets);

    std::vector<RootInterval> out;
    out.reserve(brackets.size());
    for (const Bracket& b : brackets) {
        RootInterval iv;
        iv.lo = b.lo;
        iv.hi = b.hi;
        iv.refined = refine_root(q, b.lo, b.hi);
        if (std::fabs(q.eval_double(iv.refined)) > 1e-12 * residual_scale(q, iv.refined)) {
            fail(ErrorCode::NoConvergence, "root refinement did not reach the residual tolerance");
        }
        out.push_back(std::move(iv));
    }
    std::sort(out.begin(), out.end(),
              [](const RootInterval& a, const RootInterval& b) { return a.refined < b.refined; });
    return out;
}

} // namespace rabi
