#include "doctest.h"
#include "support.hpp"

#include "qdiff/text.hpp"

using namespace qdiff;
using namespace qdiff::testing;

namespace {

LaurentSeries poly(const std::string& s, long prec = 32) { return parse_series_expr(s, prec); }

}  // namespace

TEST_CASE("products propagate precision") {
    LaurentSeries p = poly("1+z") * poly("1-z");
    CHECK(p.compare(poly("1-z^2")) == Tri::equal);
    CHECK(p.prec() == 32);
    LaurentSeries a = poly("z^3", 10);
    LaurentSeries b = poly("1+z", 20);
    // Unknown tail of b starts at 20, of a at 10; leading exponents 3 and 0.
    CHECK((a * b).prec() == 10);
    CHECK((poly("z^2", 32) * LaurentSeries::zero(10)).prec() == 12);
}

TEST_CASE("ramified exponents add") {
    LaurentSeries h = LaurentSeries::monomial(Quadratic(1), 1, 64, 2);
    LaurentSeries sq = h * h;
    CHECK(sq.ram() == 2);
    CHECK(sq.compare(poly("z")) == Tri::equal);
    LaurentSeries f = poly("z+3*z^2", 16);
    LaurentSeries r = ls_ramify(f, 2);
    CHECK(r.lo() == 2);
    CHECK(r.compare(f) == Tri::equal);
    CHECK((r * h).valuation() == f.valuation() + make_rational(1, 2));
}

TEST_CASE("inversion") {
    LaurentSeries g = ls_invert(poly("1-z", 12));
    for (long i = 0; i < 12; ++i) CHECK(g.coeff(i) == Quadratic(1));
    CHECK_THROWS_AS(g.coeff(12), PrecisionError);
    LaurentSeries z2 = ls_invert(poly("z^2"));
    CHECK(z2.val_index() == -2);
    CHECK(z2.leading() == Quadratic(1));
    CHECK_THROWS_AS(ls_invert(LaurentSeries::zero(8)), PrecisionError);
}

TEST_CASE("random units multiply back to one") {
    Rng rng(24);
    for (int t = 0; t < 50; ++t) {
        LaurentSeries u = random_series(rng, -1, 0, 24, 24);
        LaurentSeries w = ls_invert(u);
        CHECK(w.val_index() == -u.val_index());
        CHECK((u * w).compare(LaurentSeries::constant(Quadratic(1), 24)) == Tri::equal);
    }
}

TEST_CASE("ring axioms and valuation additivity on random triples") {
    Rng rng(32);
    for (int t = 0; t < 100; ++t) {
        long d = t % 2 ? -1 : 1;
        LaurentSeries f = random_series(rng, d, uniform(rng, -3, 3), 10, 32);
        LaurentSeries g = random_series(rng, d, uniform(rng, -3, 3), 10, 32);
        LaurentSeries h = random_series(rng, d, uniform(rng, -3, 3), 10, 32);
        REQUIRE(((f + g) - g).agrees(f));
        REQUIRE(((f * g) * h).agrees(f * (g * h)));
        REQUIRE((f * (g + h)).agrees(f * g + f * h));
        REQUIRE((f * g).agrees(g * f));
        REQUIRE((f * g).val_index() == f.val_index() + g.val_index());
    }
}

TEST_CASE("precision is never optimistic") {
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        LaurentSeries f = random_series(rng, 1, uniform(rng, -2, 2), 40, 40);
        LaurentSeries g = random_series(rng, 1, uniform(rng, 0, 2), 40, 40);
        LaurentSeries exact = f * g.inverse();
        LaurentSeries low = f.truncated(20) * g.truncated(20).inverse();
        REQUIRE(low.prec() <= exact.prec());
        REQUIRE(low.agrees(exact));
    }
}

TEST_CASE("substitute power and ramify") {
    CHECK(ls_substitute_power(poly("z+z^3"), 2).compare(poly("z^2+z^6", 64)) == Tri::equal);
    LaurentSeries f = poly("2-z+z^5", 16);
    CHECK(ls_substitute_power(f, 1).compare(f) == Tri::equal);
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        LaurentSeries g = random_series(rng, 1, uniform(rng, -3, 3), 12, 16);
        int n = static_cast<int>(uniform(rng, 2, 4));
        // Ramifying by n then substituting z -> z^n scales every exponent by n.
        LaurentSeries back = ls_substitute_power(ls_ramify(g, n), n);
        LaurentSeries direct = ls_substitute_power(g, n);
        REQUIRE(back.compare(direct) == Tri::equal);
        REQUIRE(back.valuation() == Rational(n) * g.valuation());
    }
    LaurentSeries h = LaurentSeries::monomial(Quadratic(1), 1, 8, 2);  // z^(1/2)
    LaurentSeries s2 = ls_substitute_power(h, 2);
    CHECK(s2.ram() == 1);
    CHECK(s2.compare(poly("z", 16)) == Tri::equal);
}

TEST_CASE("exp and log") {
    CHECK(ls_exp(LaurentSeries::zero(8)).compare(LaurentSeries::constant(Quadratic(1), 8)) == Tri::equal);
    LaurentSeries f = poly("z+3*z^2", 8);
    CHECK(ls_log(ls_exp(f)).compare(f) == Tri::equal);
    CHECK_THROWS_AS(ls_exp(poly("1+z")), MathError);
    CHECK_THROWS_AS(ls_log(poly("2+z")), MathError);
    Rng rng(12);
    for (int t = 0; t < 10; ++t) {
        LaurentSeries a = random_series(rng, -1, 1, 11, 12);
        LaurentSeries b = random_series(rng, -1, 1, 11, 12);
        REQUIRE(ls_exp(a + b).compare(ls_exp(a) * ls_exp(b)) == Tri::equal);
    }
}

TEST_CASE("three-valued comparison") {
    CHECK(poly("z^40", 64).compare(LaurentSeries::zero(32)) == Tri::undecidable);
    CHECK(poly("1+z", 32).compare(poly("1+z", 10)) == Tri::equal);
    CHECK(poly("1+z").compare(poly("1+2*z")) == Tri::unequal);
}

TEST_CASE("series text form") {
    LaurentSeries f = parse_series("{ram=2; prec=32; terms: -1:2/3, 0:1, 5:-7/2}");
    CHECK(f.ram() == 2);
    CHECK(f.lo() == -1);
    CHECK(f.coeff(5) == Quadratic(make_rational(-7, 2)));
    CHECK(to_string(f) == "{ram=2; prec=32; terms: -1:2/3, 0:1, 5:-7/2}");
    CHECK(parse_series(to_string(f)).compare(f) == Tri::equal);
    CHECK(to_string(LaurentSeries::zero(8)) == "{ram=1; prec=8; terms:}");
    CHECK_THROWS_AS(parse_series("{ram=0; prec=3; terms: }"), ParseError);
    CHECK_THROWS_AS(parse_series("{ram=1; prec=3; terms: 4:1}"), ParseError);
    CHECK(parse_series_expr("q*z^-1", 8, {{"q", Quadratic(2)}}).coeff(-1) == Quadratic(2));
}
