#include "doctest.h"
#include "support.hpp"

#include "qdiff/text.hpp"

using namespace qdiff;
using namespace qdiff::testing;

TEST_CASE("rational arithmetic and text form") {
    CHECK(make_rational(1, 2) + make_rational(1, 3) == make_rational(5, 6));
    CHECK(parse_rational("\xE2\x88\x92" "3/7") == make_rational(-3, 7));
    CHECK(parse_rational("-6/14") == make_rational(-3, 7));
    CHECK_THROWS_AS(parse_rational("3/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
}

TEST_CASE("unit-circle q has exact norm one") {
    Quadratic q = parse_scalar("3/5+4/5*sqrt(-1)");
    CHECK(q * q.conj() == Quadratic(1));
    AbsValue a = abs_value(q);
    CHECK(a.squared);
    CHECK(a.value == 1);
    CHECK(abs_value(Quadratic(0)).value == 0);
}

TEST_CASE("quadratic text form round-trips") {
    Quadratic x = parse_scalar("3/5+4/5*sqrt(-1)");
    CHECK(to_string(x) == "3/5+4/5*sqrt(-1)");
    CHECK(parse_scalar(to_string(x)) == x);
    CHECK(parse_scalar("(1+sqrt(5))/2") == Quadratic(make_rational(1, 2), make_rational(1, 2), 5));
    CHECK(parse_scalar("2*i") == Quadratic(0, 2, -1));
    CHECK_THROWS_AS(parse_scalar("sqrt(4)"), ParseError);
    CHECK_THROWS_AS(parse_scalar("1 +"), ParseError);
    CHECK_THROWS_AS(parse_scalar("sqrt(2)+sqrt(3)"), ParseError);
}

TEST_CASE("mixed-field operands are rejected") {
    CHECK_THROWS_AS(Quadratic::sqrt_of(2) + Quadratic::sqrt_of(3), MathError);
    CHECK_NOTHROW(Quadratic::sqrt_of(2) + Quadratic(3));
    CHECK_THROWS_AS(Quadratic(1) / Quadratic(0), MathError);
}

TEST_CASE("real quadratic signs are exact") {
    Quadratic s2 = Quadratic::sqrt_of(2);
    CHECK(real_sign(s2 - Quadratic(make_rational(141, 100))) > 0);
    CHECK(real_sign(s2 - Quadratic(make_rational(1415, 1000))) < 0);
    CHECK(real_floor(s2) == 1);
    CHECK(real_floor(-s2) == -2);
    CHECK(real_floor(Quadratic(make_rational(7, 2))) == 3);
    AbsValue a = abs_value(Quadratic(1) - s2);
    REQUIRE(a.real_abs.has_value());
    CHECK(*a.real_abs == s2 - Quadratic(1));
}

TEST_CASE("root of unity detection") {
    CHECK(is_root_of_unity(Quadratic::sqrt_of(-1), 8).order == 4);
    CHECK_FALSE(is_root_of_unity(parse_scalar("3/5+4/5*sqrt(-1)"), 64).root_of_unity);
    CHECK_FALSE(is_root_of_unity(Quadratic(2), 10).root_of_unity);
    CHECK(is_root_of_unity(Quadratic(-1), 10).order == 2);
}

TEST_CASE("field axioms on random triples") {
    for (long d : {1L, -1L, 2L, -3L, 5L}) {
        Rng rng(1000 + static_cast<unsigned long>(d + 10));
        for (int t = 0; t < 1000; ++t) {
            Quadratic x = random_quadratic(rng, d), y = random_quadratic(rng, d), z = random_quadratic(rng, d);
            REQUIRE((x + y) + z == x + (y + z));
            REQUIRE((x * y) * z == x * (y * z));
            REQUIRE(x * (y + z) == x * y + x * z);
            REQUIRE(x * y == y * x);
            if (!x.is_zero()) REQUIRE(x * x.inverse() == Quadratic(1));
            if (d < 0) REQUIRE(abs_value(x * y).value == abs_value(x).value * abs_value(y).value);
        }
    }
}

TEST_CASE("p-adic absolute value and text form") {
    Padic x = Padic::from_integer(75, 5, 12);
    CHECK(x.valuation() == 2);
    CHECK(x.abs() == make_rational(1, 25));
    CHECK(Padic::from_integer(5, 5, 12).abs() == make_rational(1, 5));
    Padic y = parse_padic("5^2 * 3 mod 5^12");
    CHECK(y.equals(x));
    CHECK(to_string(y) == "5^2 * 3 mod 5^12");
    CHECK(parse_padic(to_string(y)).equals(y));
    CHECK_THROWS_AS(parse_padic("5^2 * 10 mod 5^12"), ParseError);
    CHECK_THROWS_AS(parse_padic("4^2 * 3 mod 4^12"), ParseError);
}

TEST_CASE("p-adic precision bookkeeping") {
    Padic a = Padic::from_integer(1, 5, 12);
    Padic b = Padic::from_integer(1 + 5 * 5 * 5, 5, 12);
    Padic diff = b - a;  // 5^3, relative precision drops to 9
    CHECK(diff.valuation() == 3);
    CHECK(diff.precision() == 9);
    CHECK_NOTHROW(diff.check_floor());
    Padic tiny = Padic::from_integer(1 + 5L * 5 * 5 * 5 * 5 * 5 * 5 * 5 * 5, 5, 12) - a;
    CHECK(tiny.precision() == 3);
    CHECK_THROWS_AS(tiny.check_floor(), PrecisionError);
    Padic z = a - a;
    CHECK(z.is_zero());
    CHECK_THROWS_AS(a / z, PrecisionError);
    CHECK_THROWS_AS(z.valuation(), PrecisionError);
    CHECK_THROWS_AS(Padic::from_integer(1, 5, 4) + Padic::from_integer(1, 7, 4), MathError);
}

TEST_CASE("p-adic field axioms and multiplicativity") {
    Rng rng(77);
    auto rnd = [&](void) {
        long v = uniform(rng, -2, 3);
        Integer u(uniform(rng, 1, 244140624));  // < 5^12
        if (u % 5 == 0) u += 1;
        return Padic::make(5, v, u, 12);
    };
    for (int t = 0; t < 1000; ++t) {
        Padic x = rnd(), y = rnd(), z = rnd();
        REQUIRE((x * y).abs() == x.abs() * y.abs());
        REQUIRE(((x * y) * z).equals(x * (y * z)));
        REQUIRE(((x + y) + z).equals(x + (y + z)));
        REQUIRE((x * (y + z)).equals(x * y + x * z));
        REQUIRE((x * x.inverse()).equals(Padic::from_integer(1, 5, 12)));
    }
}
