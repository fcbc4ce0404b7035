#pragma once

#include <utility>
#include <vector>

#include "rabi/rational.hpp"

namespace rabi {

// Univariate polynomial over exact rationals; coefficient k multiplies x^k.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coefficients);

    static RatPoly zero();
    static RatPoly constant(const Rational& c);
    // Monic product of (x - r) over the given roots.
    static RatPoly from_roots(const std::vector<Rational>& roots);

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Rational coeff(int k) const;
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational leading() const;

    Rational eval(const Rational& x) const;
    double eval_double(double x) const;
    RatPoly derivative() const;

    RatPoly operator+(const RatPoly& other) const;
    RatPoly operator-(const RatPoly& other) const;
    RatPoly operator*(const RatPoly& other) const;
    RatPoly operator*(const Rational& s) const;
    RatPoly operator-() const;
    bool operator==(const RatPoly& other) const { return coeffs_ == other.coeffs_; }

    // Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<RatPoly, RatPoly> divmod(const RatPoly& d) const;

private:
    std::vector<Rational> coeffs_;
    void trim();
};

// Monic polynomial gcd.
RatPoly poly_gcd(RatPoly a, RatPoly b);

// Isolating interval for one real root, certified by a Sturm count of 1 over (lo, hi].
struct RootInterval {
    Rational lo;
    Rational hi;
    double refined = 0.0;
};

// Exact number of distinct real roots in (lo, hi]. Roots at the endpoints are
// handled by exact deflation, so lo itself is excluded and hi included.
int sturm_count(const RatPoly& p, const Rational& lo, const Rational& hi);

// B = 1 + max |c_k / c_deg|: every real root lies in (-B, B).
Rational cauchy_bound(const RatPoly& p);

// Disjoint certified intervals covering all positive roots, each refined to a
// floating-point root with relative residual <= 1e-12. Requires p squarefree
// on (0, inf); a repeated positive root raises NonSquarefree.
std::vector<RootInterval> isolate_positive_roots(const RatPoly& p);

} // namespace rabi
