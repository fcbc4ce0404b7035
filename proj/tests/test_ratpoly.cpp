#include <doctest.h>

#include <cmath>

#include "rabi/error.hpp"
#include "rabi/ratpoly.hpp"

using namespace rabi;

namespace {

RatPoly poly(std::initializer_list<long> ascending) {
    std::vector<Rational> c;
    for (long v : ascending) c.emplace_back(v);
    return RatPoly(std::move(c));
}

} // namespace

TEST_CASE("construction trims and reports degree") {
    RatPoly p(std::vector<Rational>{Rational(1), Rational(2), Rational(0), Rational(0)});
    CHECK(p.degree() == 1);
    CHECK(p.coeff(0) == 1);
    CHECK(p.coeff(1) == 2);
    CHECK(p.coeff(7) == 0);
    CHECK(RatPoly::zero().is_zero());
    CHECK(RatPoly::constant(Rational(5)).degree() == 0);
}

TEST_CASE("evaluation and derivative") {
    RatPoly p = poly({1, -3, 0, 2}); // 2x^3 - 3x + 1
    CHECK(p.eval(Rational(2)) == Rational(11));
    CHECK(p.eval(Rational(1, 2)) == Rational(-1, 4));
    CHECK(p.eval_double(2.0) == doctest::Approx(11.0));

    RatPoly d = p.derivative();
    CHECK(d == poly({-3, 0, 6}));
    CHECK(RatPoly::constant(Rational(4)).derivative().is_zero());
}

TEST_CASE("ring operations") {
    RatPoly a = poly({-1, 1}); // x - 1
    RatPoly b = poly({1, 1});  // x + 1
    CHECK(a * b == poly({-1, 0, 1}));
    CHECK(a + b == poly({0, 2}));
    CHECK(a - a == RatPoly::zero());
    CHECK((-a) == poly({1, -1}));
    CHECK(a * Rational(3) == poly({-3, 3}));
}

TEST_CASE("divmod is euclidean") {
    RatPoly p = poly({2, 0, -4, 1, 3}); // 3x^4 + x^3 - 4x^2 + 2
    RatPoly d = poly({-1, 0, 1});       // x^2 - 1
    auto [q, r] = p.divmod(d);
    CHECK(q * d + r == p);
    CHECK(r.degree() < d.degree());
    CHECK_THROWS_AS(p.divmod(RatPoly::zero()), Error);
}

TEST_CASE("from_roots builds monic products") {
    RatPoly p = RatPoly::from_roots({Rational(1), Rational(2), Rational(3)});
    CHECK(p == poly({-6, 11, -6, 1}));
    CHECK(p.leading() == 1);
    CHECK(RatPoly::from_roots({}).degree() == 0);
}

TEST_CASE("poly_gcd finds the common factor") {
    RatPoly a = RatPoly::from_roots({Rational(1), Rational(2)});
    RatPoly b = RatPoly::from_roots({Rational(2), Rational(3)});
    CHECK(poly_gcd(a, b) == poly({-2, 1}));

    RatPoly c = RatPoly::from_roots({Rational(5)});
    CHECK(poly_gcd(a * c, b * c) == RatPoly::from_roots({Rational(2), Rational(5)}));
    // coprime inputs reduce to the constant 1
    CHECK(poly_gcd(a, RatPoly::from_roots({Rational(7)})) == RatPoly::constant(Rational(1)));
}

TEST_CASE("sturm_count with endpoint deflation") {
    RatPoly p = RatPoly::from_roots({Rational(1), Rational(2), Rational(3)});
    CHECK(sturm_count(p, Rational(0), Rational(4)) == 3);
    CHECK(sturm_count(p, Rational(1), Rational(3)) == 2);  // lo excluded, hi included
    CHECK(sturm_count(p, Rational(1), Rational(2)) == 1);
    CHECK(sturm_count(p, Rational(3), Rational(10)) == 0);
    CHECK(sturm_count(p, Rational(-5), Rational(0)) == 0);
}

TEST_CASE("cauchy_bound dominates the roots") {
    RatPoly p = RatPoly::from_roots({Rational(-7), Rational(1, 3), Rational(5)});
    Rational b = cauchy_bound(p);
    CHECK(b > 7);
    CHECK(sturm_count(p, -b, b) == 3);
}

TEST_CASE("isolate_positive_roots certified and refined") {
    RatPoly p = RatPoly::from_roots({Rational(-1), Rational(1, 3), Rational(2), Rational(5)});
    auto roots = isolate_positive_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].refined == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(roots[1].refined == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(roots[2].refined == doctest::Approx(5.0).epsilon(1e-12));
    for (const auto& iv : roots) {
        CHECK(iv.lo < iv.hi);
        CHECK(sturm_count(p, iv.lo, iv.hi) == 1);
    }
}

TEST_CASE("isolate_positive_roots ignores zero and negative roots") {
    // x^2 (x + 2): no positive roots at all
    RatPoly p = poly({0, 0, 2, 1});
    CHECK(isolate_positive_roots(p).empty());
}

TEST_CASE("isolate_positive_roots rejects repeated positive roots") {
    RatPoly p = RatPoly::from_roots({Rational(2), Rational(2)});
    CHECK_THROWS_AS(isolate_positive_roots(p), Error);
    try {
        isolate_positive_roots(p);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonSquarefree);
    }
    // a repeated negative root is not an obstruction
    RatPoly q = RatPoly::from_roots({Rational(-2), Rational(-2), Rational(3)});
    auto roots = isolate_positive_roots(q);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].refined == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("isolation separates close roots") {
    RatPoly p = RatPoly::from_roots(
        {Rational(1), Rational(1001, 1000), Rational(1002, 1000)});
    auto roots = isolate_positive_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].refined == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(roots[1].refined == doctest::Approx(1.001).epsilon(1e-10));
    CHECK(roots[2].refined == doctest::Approx(1.002).epsilon(1e-10));
}

TEST_CASE("isolation handles a wide dynamic range") {
    std::vector<Rational> rs;
    for (int k = 1; k <= 8; ++k) rs.emplace_back(k);
    RatPoly p = RatPoly::from_roots(rs);
    auto roots = isolate_positive_roots(p);
    REQUIRE(roots.size() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(roots[k].refined == doctest::Approx(double(k + 1)).epsilon(1e-11));
    }
}
