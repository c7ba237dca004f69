#include "doctest.h"
#include "support.hpp"

#include "qdiff/torus.hpp"

using namespace qdiff;
using namespace qdiff::testing;

namespace {

constexpr long P = 5;
constexpr long N = 12;

Padic unit(Rng& rng, long v = 0) {
    for (;;) {
        long u = uniform(rng, 1, 244140624);  // 5^12 - 1
        if (u % P) return Padic::make(P, v, Integer(u), N);
    }
}

Padic pint(long x, long prec = N) { return Padic::from_integer(x, P, prec); }

TorusForm form2(long chi01 = 2) { return make_form(2, P, {pint(chi01)}); }

TorusElement random_element(Rng& rng, const TorusForm& form, long terms = 5) {
    std::map<Lattice, Padic> c;
    long t = uniform(rng, 1, terms);
    for (long i = 0; i < t; ++i) {
        Lattice l;
        for (long j = 0; j < form.d; ++j) l.push_back(uniform(rng, -3, 3));
        c[l] = unit(rng, uniform(rng, -1, 2));
    }
    return t_make(form, c);
}

}  // namespace

TEST_CASE("torus forms") {
    auto f = form2(2);
    CHECK(f.chi[1][0].equals(pint(2).inverse()));
    CHECK(f.chi[0][0].equals(pint(1)));
    CHECK_THROWS_AS(make_form(2, P, {pint(5)}), MathError);
    CHECK_THROWS_AS(make_form(2, P, {}), MathError);
    CHECK_THROWS_AS(make_form(2, 6, {pint(2)}), MathError);

    Rng rng(1);
    auto g = make_form(3, P, {unit(rng), unit(rng), unit(rng)});
    for (int t = 0; t < 50; ++t) {
        Lattice a{uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, -4, 4)};
        Lattice b{uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, -4, 4)};
        Lattice c{uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, -4, 4)};
        Lattice ab{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
        CHECK((g.character(a, c) * g.character(c, a)).equals(pint(1)));
        CHECK(g.character(ab, c).equals(g.character(a, c) * g.character(b, c)));
        CHECK(g.character(a, a).equals(pint(1)));
    }
}

TEST_CASE("torus product") {
    auto f = form2(2);
    auto e1 = t_monomial(f, {1, 0}, pint(1));
    auto e2 = t_monomial(f, {0, 1}, pint(1));
    auto e12 = t_mul(e1, e2), e21 = t_mul(e2, e1);
    REQUIRE(e12.coeffs.size() == 1);
    CHECK(e12.coeffs.begin()->first == Lattice{1, 1});
    CHECK(e12.coeffs.begin()->second.equals(pint(2)));
    CHECK(e21.coeffs.begin()->second.equals(pint(2).inverse()));
    // Commutation factor chi(e1, e2) / chi(e2, e1) = chi01^2.
    CHECK((e12.coeffs.begin()->second / e21.coeffs.begin()->second).equals(pint(4)));
    CHECK_FALSE(t_equal(e12, e21));
    CHECK_FALSE(t_equal(e12, t_add(e12, e1)));

    // e(l) e(m) = chi(l, m) e(l + m).
    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        Lattice l{uniform(rng, -5, 5), uniform(rng, -5, 5)}, m{uniform(rng, -5, 5), uniform(rng, -5, 5)};
        auto prod = t_mul(t_monomial(f, l, pint(1)), t_monomial(f, m, pint(1)));
        CHECK(t_equal(prod, t_monomial(f, {l[0] + m[0], l[1] + m[1]}, f.character(l, m))));
    }

    auto one = t_unit(f, N);
    for (int t = 0; t < 20; ++t) {
        auto x = random_element(rng, f);
        CHECK(t_equal(t_mul(x, one), x));
        CHECK(t_equal(t_mul(one, x), x));
        CHECK(t_mul(x, t_zero(f)).coeffs.empty());
    }
    CHECK_THROWS_AS(t_mul(e1, t_monomial(form2(3), {0, 0}, pint(1))), MathError);
}

TEST_CASE("torus associativity") {
    Rng rng(8);
    auto f = make_form(2, P, {unit(rng)});
    for (int t = 0; t < 200; ++t) {
        auto a = random_element(rng, f), b = random_element(rng, f), c = random_element(rng, f);
        CHECK(t_equal(t_mul(t_mul(a, b), c), t_mul(a, t_mul(b, c))));
    }
    // Distributivity alongside.
    for (int t = 0; t < 50; ++t) {
        auto a = random_element(rng, f), b = random_element(rng, f), c = random_element(rng, f);
        CHECK(t_equal(t_mul(a, t_add(b, c)), t_add(t_mul(a, b), t_mul(a, c))));
    }
}

TEST_CASE("torus norm") {
    auto f = form2();
    Radius r{make_rational(1, 5), 3};
    CHECK(t_norm(t_monomial(f, {2, -1}, pint(1)), r) == make_rational(1, 75));
    auto x = t_make(f, {{{0, 0}, pint(5)}, {{1, 0}, pint(1)}});
    CHECK(t_norm(x, Radius{1, 1}) == 1);
    CHECK(t_norm(t_zero(f), r) == 0);
    CHECK_THROWS_AS(t_norm(x, Radius{1}), MathError);
    CHECK_THROWS_AS(t_norm(x, Radius{1, 0}), MathError);

    Rng rng(13);
    for (const Radius& rv : {Radius{1, 1}, Radius{5, 1}, Radius{make_rational(1, 5), 3}}) {
        for (int t = 0; t < 200; ++t) {
            auto a = random_element(rng, f), b = random_element(rng, f);
            CHECK(t_norm(t_mul(a, b), rv) <= t_norm(a, rv) * t_norm(b, rv));
            CHECK(t_norm(t_add(a, b), rv) <= std::max(t_norm(a, rv), t_norm(b, rv)));
        }
    }
}

TEST_CASE("torus truncation") {
    auto f = form2();
    Radius r{1, 1};
    auto x = t_make(f, {{{0, 0}, pint(1)}, {{1, 0}, pint(5)}, {{0, 1}, pint(25)}});
    auto all = t_truncate(x, r, 2);
    CHECK(all.kept.coeffs.empty());
    CHECK(all.tail_bound == t_norm(x, r));
    auto none = t_truncate(x, r, make_rational(1, 1000));
    CHECK(t_equal(none.kept, x));
    CHECK(none.tail_bound == 0);
    CHECK(t_membership_report(x, r) == std::vector<Rational>{1, make_rational(1, 5), make_rational(1, 25)});
    CHECK(t_membership_report(t_monomial(f, {1, 1}, pint(3)), r).size() == 1);

    Rng rng(21);
    Radius rv{5, make_rational(1, 5)};
    for (int t = 0; t < 100; ++t) {
        auto y = random_element(rng, f, 8);
        Rational eps = make_rational(1, static_cast<long>(uniform(rng, 1, 200)));
        auto tr = t_truncate(y, rv, eps);
        CHECK(t_norm(t_add(y, t_neg(tr.kept)), rv) == tr.tail_bound);
        CHECK(tr.tail_bound < eps);
        for (const auto& n : t_membership_report(tr.kept, rv)) CHECK(n >= eps);
    }

    auto big = t_make(f, {{{0, 0}, pint(1)}, {{1, 1}, pint(5)}});
    auto small = t_make(f, {{{0, 0}, pint(5)}, {{2, 0}, pint(25)}});
    for (const auto& n : t_membership_report(t_mul(big, small), r)) CHECK(n <= make_rational(1, 5));
}

TEST_CASE("torus precision floor") {
    auto f = form2();
    auto x = t_monomial(f, {1, 0}, Padic::make(P, 0, Integer(2), 2));
    CHECK_THROWS_AS(t_mul(x, x), PrecisionError);
    CHECK_NOTHROW(t_mul(x, x, 2));
}

TEST_CASE("torus text") {
    Rng rng(34);
    auto f = make_form(2, P, {unit(rng)});
    for (int t = 0; t < 20; ++t) {
        auto x = random_element(rng, f, 6);
        std::string s = write_torus(x);
        auto y = read_torus(s);
        CHECK(t_equal(x, y));
        CHECK(write_torus(y) == s);
    }
    auto e = read_torus("# element\nform 2 5\nchi 0 1 : 5^0 * 2 mod 5^12\n1 0 : 5^0 * 3 mod 5^12\n0 -1 : 5^1 * 7 mod 5^10\n"
                        "2 2 : 0 mod 5^4\n");
    CHECK(e.coeffs.size() == 2);
    CHECK(t_norm(e, Radius{1, 5}) == 1);
    CHECK(write_torus(e) == "form 2 5\nchi 0 1 : 5^0 * 2 mod 5^12\n0 -1 : 5^1 * 7 mod 5^10\n1 0 : 5^0 * 3 mod 5^12\n");

    CHECK_THROWS_AS(read_torus(""), ParseError);
    CHECK_THROWS_AS(read_torus("form 2 5\n1 0 : 5^0 * 3 mod 5^12\n"), ParseError);
    CHECK_THROWS_AS(read_torus("form 2 5\nchi 0 1 : 5^1 * 2 mod 5^12\n"), ParseError);
    CHECK_THROWS_AS(read_torus("form 2 5\nchi 0 1 : 5^0 * 2 mod 5^12\n1 : 5^0 * 3 mod 5^12\n"), ParseError);
    CHECK_THROWS_WITH_AS(read_torus("form 2 5\nchi 0 1 : 5^0 * 2 mod 5^12\n1 x : 5^0 * 3 mod 5^12\n"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_AS(read_torus("form 2 5\nchi 0 1 : 7^0 * 2 mod 7^12\n"), ParseError);

    CHECK(parse_radius("1/5, 3") == Radius{make_rational(1, 5), 3});
    CHECK_THROWS_AS(parse_radius("1, -2"), ParseError);
}
