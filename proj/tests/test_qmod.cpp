#include <numeric>

#include "doctest.h"
#include "support.hpp"

#include "qdiff/qmod.hpp"
#include "qdiff/text.hpp"

using namespace qdiff;
using namespace qdiff::testing;

namespace {

using Status = IsoResult::Status;

Context rational_ctx(long q = 2, long prec = 32) { return make_context(QuadField{1}, Quadratic(q), prec); }

Context gaussian_ctx(long prec = 32) {
    return make_context(QuadField{-1}, Quadratic(make_rational(3, 5), make_rational(4, 5), -1), prec);
}

SkewPoly sp(const std::string& s, const Context& ctx) { return parse_skew(s, ctx); }

LaurentSeries ser(const std::string& s, long prec = 32) { return parse_series_expr(s, prec); }

QDiffModule mod(const Context& ctx, const std::vector<std::vector<std::string>>& rows) {
    SMatrix phi(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) phi(i, j) = parse_series_expr(rows[i][j], ctx->prec);
    return make_module(ctx, phi);
}

IndecompLabel lab(long n, long k, long l, const Quadratic& a) { return IndecompLabel{n, k, l, a}; }

bool same_labels(const std::vector<IndecompLabel>& x, const std::vector<IndecompLabel>& y, const Context& ctx) {
    return label_multiset_eq(x, y, ctx->q);
}

bool zero_matrix(const SMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

long degree_weight(const std::vector<IndecompLabel>& labels) {
    long s = 0;
    for (const auto& l : labels) s += l.k * l.l;
    return s;
}

std::vector<IndecompLabel> random_labels(Rng& rng, long d, long max_dim) {
    std::vector<IndecompLabel> out;
    long left = uniform(rng, 1, max_dim);
    while (left > 0) {
        long n = uniform(rng, 1, std::min(left, 3L));
        long l = uniform(rng, 1, left / n);
        long k = 0;
        do {
            k = uniform(rng, -2, 2);
        } while (n > 1 && (k == 0 || std::gcd(n, k) != 1));
        out.push_back(lab(n, k, l, random_nonzero(rng, d, 4)));
        left -= n * l;
    }
    return out;
}

SMatrix random_unipotent(Rng& rng, std::size_t d, long prec) {
    SMatrix t = s_identity(d, prec);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (uniform(rng, 0, 1)) t(i, j) = LaurentSeries::monomial(Quadratic(uniform(rng, -2, 2)), uniform(rng, 0, 1), prec);
    return t;
}

}  // namespace

TEST_CASE("construction") {
    auto ctx = rational_ctx();
    CHECK_THROWS_AS(make_module(ctx, SMatrix(2, 3)), MathError);
    CHECK_THROWS_AS(mod(ctx, {{"1", "z"}, {"1", "z"}}), PrecisionError);
    auto a = mod(ctx, {{"3"}});
    auto b = mod(ctx, {{"z"}});
    auto s = direct_sum({a, b});
    CHECK(s.dim() == 2);
    CHECK(s.phi(0, 1).is_zero());
    CHECK(s.phi(1, 1).compare(ser("z")) == Tri::equal);
    // Gauge by a constant diagonal matrix leaves a diagonal Phi unchanged.
    SMatrix t = s_identity(2, 32);
    t(1, 1) = ser("5");
    CHECK(s_compare(gauge(s, t).phi, s.phi) == Tri::equal);
}

TEST_CASE("from_cyclic") {
    auto ctx = rational_ctx();
    auto v = from_cyclic(sp("xi - 7", ctx));
    CHECK(v.dim() == 1);
    CHECK(v.phi(0, 0).compare(ser("7")) == Tri::equal);
    auto w = from_cyclic(sp("xi^2 - 5*z", ctx));
    CHECK(s_compare(w.phi, mod(ctx, {{"0", "5*z"}, {"1", "0"}}).phi) == Tri::equal);
    // Units on either side do not change the module.
    auto u = from_cyclic(sp("z^3*(xi^2 - 5*z)*xi^4", ctx));
    CHECK(iso_oracle(u, w, 4).status == Status::isomorphic);
    CHECK_THROWS_AS(from_cyclic(SkewPoly(ctx)), MathError);
    CHECK_THROWS_AS(from_cyclic(sp("z^2*xi^3", ctx)), MathError);
    auto j = classify(from_cyclic(sp("(xi - 1)^2", ctx)));
    CHECK(same_labels(j, {lab(1, 0, 2, Quadratic(1))}, ctx));
}

TEST_CASE("minimal skew polynomial") {
    auto ctx = rational_ctx(3);
    auto one = LaurentSeries::constant(Quadratic(1), 32);
    auto zero = LaurentSeries::zero(32);
    auto v = from_cyclic(sp("xi - 4", ctx));
    CHECK(minimal_skew_poly(v, {one}).compare(sp("xi - 4", ctx)) == Tri::equal);
    auto w = from_cyclic(sp("xi^2 - 2*z", ctx));
    CHECK(minimal_skew_poly(w, {one, zero}).compare(sp("xi^2 - 2*z", ctx)) == Tri::equal);
    auto s = build(ctx, {lab(1, 0, 1, Quadratic(1)), lab(1, 0, 1, Quadratic(2))});
    SkewPoly x = minimal_skew_poly(s, {one, one});
    CHECK(sp_span(x) == 2);
    CHECK(x.compare(sp("(xi - 1)*(xi - 2)", ctx)) == Tri::equal);
    CHECK(iso_oracle(from_cyclic(x), s, 4).status == Status::isomorphic);
    // An eigenvector has a span-1 annihilator.
    CHECK(minimal_skew_poly(s, {zero, one}).compare(sp("xi - 2", ctx)) == Tri::equal);
    CHECK_THROWS_AS(minimal_skew_poly(s, {zero, zero}), MathError);
}

TEST_CASE("cyclic decomposition") {
    auto ctx = rational_ctx(3);
    auto v = from_cyclic(sp("xi - 5", ctx));
    auto xs = cyclic_decompose(v, 1);
    REQUIRE(xs.size() == 1);
    CHECK(xs[0].compare(sp("xi - 5", ctx)) == Tri::equal);

    auto s = build(ctx, {lab(1, 0, 1, Quadratic(1)), lab(1, 0, 1, Quadratic(2))});
    xs = cyclic_decompose(s, 1);
    REQUIRE(xs.size() == 2);
    CHECK(sp_span(xs[0]) == 1);
    CHECK(sp_span(xs[1]) == 1);
    CHECK(iso_oracle(direct_sum({from_cyclic(xs[0]), from_cyclic(xs[1])}), s, 4).status == Status::isomorphic);

    auto w = from_cyclic(sp("xi^2 - 2*z", ctx));
    xs = cyclic_decompose(w, 1);
    REQUIRE(xs.size() == 1);
    CHECK(sp_span(xs[0]) == 2);

    CHECK(block_components(s.phi).size() == 2);
    CHECK(block_components(w.phi).size() == 1);

    // Dense modules: spans add up and the reassembled sum is isomorphic.
    Rng rng(5);
    for (int t = 0; t < 4; ++t) {
        auto m = build(ctx, random_labels(rng, 1, 3));
        m = gauge(m, random_unipotent(rng, m.dim(), 32));
        auto parts = cyclic_decompose(m, static_cast<std::uint64_t>(t));
        long total = 0;
        std::vector<QDiffModule> mods;
        for (const auto& x : parts) {
            total += sp_span(x);
            mods.push_back(from_cyclic(x));
        }
        CHECK(total == static_cast<long>(m.dim()));
        CHECK(same_labels(classify(direct_sum(mods)), classify(m), ctx));
    }
}

TEST_CASE("slope factors") {
    auto ctx = rational_ctx();
    auto fs = slope_factors(sp("(xi - 1)*(xi - z)", ctx));
    REQUIRE(fs.size() == 2);
    for (const auto& f : fs) CHECK(sp_newton_polygon(f).size() == 1);
    // The product of the factors generates an isomorphic module.
    auto whole = from_cyclic(sp("(xi - 1)*(xi - z)", ctx));
    auto parts = direct_sum({from_cyclic(fs[0]), from_cyclic(fs[1])});
    CHECK(iso_oracle(whole, parts, 6).status == Status::isomorphic);

    Rng rng(9);
    for (int t = 0; t < 6; ++t) {
        // Three coefficients with distinct slopes.
        SkewPoly x(ctx);
        x.set(0, random_series(rng, 1, uniform(rng, 2, 3), 4, 32, 4));
        x.set(1, random_series(rng, 1, uniform(rng, 0, 1), 4, 32, 4));
        x.set(2, LaurentSeries::constant(Quadratic(1), 32));
        auto fs2 = slope_factors(x);
        long span = 0;
        for (const auto& f : fs2) {
            CHECK(sp_newton_polygon(f).size() == 1);
            span += sp_span(f);
        }
        CHECK(span == 2);
    }
}

TEST_CASE("labels") {
    auto ctx = rational_ctx();
    CHECK_NOTHROW(validate(lab(1, 0, 1, Quadratic(1))));
    CHECK_NOTHROW(validate(lab(3, -2, 2, Quadratic(5))));
    CHECK_THROWS_AS(validate(lab(2, 0, 1, Quadratic(1))), MathError);
    CHECK_THROWS_AS(validate(lab(2, 4, 1, Quadratic(1))), MathError);
    CHECK_THROWS_AS(validate(lab(1, 0, 0, Quadratic(1))), MathError);
    CHECK_THROWS_AS(validate(lab(1, 0, 1, Quadratic(0))), MathError);

    Quadratic q(2);
    CHECK(orbit_eq(Quadratic(3), Quadratic(24), q, 24));
    CHECK(orbit_eq(Quadratic(3), Quadratic(make_rational(3, 8)), q, 24));
    CHECK_FALSE(orbit_eq(Quadratic(3), Quadratic(5), q, 24));
    CHECK_FALSE(orbit_eq(Quadratic(1), q.pow(30), q, 24));
    CHECK(orbit_canonical(Quadratic(make_rational(3, 32)), q, 24) == Quadratic(3));
    CHECK(label_eq(lab(1, 1, 1, Quadratic(3)), lab(1, 1, 1, Quadratic(12)), q));
    CHECK_FALSE(label_eq(lab(1, 1, 1, Quadratic(3)), lab(1, 0, 1, Quadratic(3)), q));
    CHECK(label_multiset_eq({lab(1, 0, 1, Quadratic(1)), lab(1, 0, 1, Quadratic(3))},
                            {lab(1, 0, 1, Quadratic(6)), lab(1, 0, 1, Quadratic(2))}, q));
    CHECK_FALSE(label_multiset_eq({lab(1, 0, 1, Quadratic(1)), lab(1, 0, 1, Quadratic(1))},
                                  {lab(1, 0, 1, Quadratic(1)), lab(1, 0, 1, Quadratic(3))}, q));

    std::vector<IndecompLabel> v{lab(2, 1, 1, Quadratic(1)), lab(1, 0, 2, Quadratic(5)), lab(1, 0, 1, Quadratic(7)),
                                 lab(1, 0, 1, Quadratic(3))};
    sort_labels(v);
    CHECK(to_string(v[0]) == "1 0 1 3");
    CHECK(to_string(v[1]) == "1 0 1 7");
    CHECK(to_string(v[2]) == "1 0 2 5");
    CHECK(to_string(v[3]) == "2 1 1 1");

    // For l = 1 the label polynomial is a unit multiple of xi^n - a z^k.
    auto p = label_poly(ctx, lab(2, 1, 1, Quadratic(5)));
    CHECK(p.compare(sp("xi^2 - 5*z", ctx)) == Tri::equal);
    CHECK(p.prec() == 32);
    CHECK(label_poly(ctx, lab(3, -5, 1, Quadratic(1))).prec() == 32);
}

TEST_CASE("build") {
    auto ctx = rational_ctx();
    auto id = build(ctx, {lab(1, 0, 1, Quadratic(1))});
    CHECK(s_compare(id.phi, s_identity(1, 32)) == Tri::equal);
    auto p = build(ctx, {lab(2, 1, 1, Quadratic(3))});
    CHECK(s_compare(p.phi, from_cyclic(sp("xi^2 - 3*z", ctx)).phi) == Tri::equal);
    auto s = build(ctx, {lab(1, 0, 1, Quadratic(1)), lab(2, 1, 1, Quadratic(3)), lab(1, -1, 2, Quadratic(5))});
    CHECK(s.dim() == 5);
    CHECK(block_components(s.phi).size() == 3);
}

TEST_CASE("classify examples") {
    auto ctx = rational_ctx();
    CHECK(same_labels(classify(from_cyclic(sp("xi - 3", ctx))), {lab(1, 0, 1, Quadratic(3))}, ctx));
    CHECK(same_labels(classify(from_cyclic(sp("xi^2 - 3*z", ctx))), {lab(2, 1, 1, Quadratic(3))}, ctx));
    CHECK(same_labels(classify(from_cyclic(sp("(xi - 1)*(xi - z)", ctx))),
                      {lab(1, 0, 1, Quadratic(1)), lab(1, 1, 1, Quadratic(1))}, ctx));
    CHECK(same_labels(classify(from_cyclic(sp("(xi - 3)*(xi - 6)", ctx))),
                      {lab(1, 0, 1, Quadratic(3)), lab(1, 0, 1, Quadratic(3))}, ctx));
    // Jordan blocks twisted by a slope survive.
    CHECK(same_labels(classify(build(ctx, {lab(1, -1, 2, Quadratic(7))})), {lab(1, -1, 2, Quadratic(7))}, ctx));
    CHECK(same_labels(classify(build(ctx, {lab(2, 1, 2, Quadratic(3))})), {lab(2, 1, 2, Quadratic(3))}, ctx));
}

TEST_CASE("classify errors and retry") {
    auto ctx = rational_ctx();
    CHECK_THROWS_AS(classify(from_cyclic(sp("xi^2 - 2", ctx))), FieldExtensionRequired);
    auto r2 = make_context(QuadField{2}, Quadratic(3));
    auto got = classify(from_cyclic(sp("xi^2 - 2", r2)));
    CHECK(same_labels(got, {lab(1, 0, 1, Quadratic::sqrt_of(2)), lab(1, 0, 1, -Quadratic::sqrt_of(2))}, r2));

    std::vector<long> seen;
    auto make = [&](long prec) {
        seen.push_back(prec);
        if (prec < 64) throw PrecisionError("test window");
        return build(rational_ctx(2, prec), {lab(1, 1, 1, Quadratic(3))});
    };
    auto labels = classify_with_retry(make, 32);
    CHECK(seen == std::vector<long>{32, 64});
    CHECK(same_labels(labels, {lab(1, 1, 1, Quadratic(3))}, ctx));
}

TEST_CASE("classification roundtrip") {
    Rng rng(2024);
    for (int t = 0; t < 40; ++t) {
        auto ctx = t % 2 ? gaussian_ctx() : rational_ctx();
        auto s = random_labels(rng, ctx->field.d, 4);
        CAPTURE(write_labels(s));
        CHECK(same_labels(classify(build(ctx, s)), s, ctx));
    }
}

TEST_CASE("gauge invariance of classify") {
    Rng rng(77);
    for (int t = 0; t < 6; ++t) {
        auto ctx = t % 2 ? gaussian_ctx() : rational_ctx();
        auto s = random_labels(rng, ctx->field.d, 3);
        auto m = build(ctx, s);
        m = gauge(m, random_unipotent(rng, m.dim(), 32));
        CAPTURE(write_labels(s));
        auto got = classify_with_retry(
            [&](long prec) {
                auto c = t % 2 ? gaussian_ctx(prec) : rational_ctx(2, prec);
                return QDiffModule{c, s_truncated(m.phi, prec)};
            },
            32);
        CHECK(same_labels(got, s, ctx));
    }
}

TEST_CASE("lattice frames") {
    auto ctx = rational_ctx(3);
    auto m = mod(ctx, {{"1 + z", "z"}, {"2*z", "2 + z^2"}});
    auto f = identity_frame(m);
    CHECK(f.invariant());
    CHECK(find_resonances(f, 24).empty());
    CHECK(s_compare(improve_lattice(f, 24).phi, f.phi) == Tri::equal);

    // Distinct non-resonant eigenvalues split off degree by degree.
    auto g = lift_splitting(f, 1, 24);
    CHECK(g.invariant());
    CHECK(g.phi(0, 1).is_zero());
    CHECK(g.phi(1, 0).is_zero());
    CHECK(s_compare(g.phi, s_inverse(g.t) * m.phi * s_twisted(g.t, ctx->q)) == Tri::equal);
    CHECK(s_compare(s_truncated(g.t, 1), s_identity(2, 1)) == Tri::equal);
    CHECK(s_compare(lift_splitting(f, 2, 24).phi, f.phi) == Tri::equal);

    auto r = identity_frame(mod(ctx, {{"2", "z"}, {"z", "6"}}));
    auto res = find_resonances(r, 24);
    REQUIRE(res.size() == 1);
    CHECK(res[0].alpha == Quadratic(2));
    CHECK(res[0].m == 1);
    CHECK_THROWS_WITH_AS(lift_splitting(r, 1, 24), doctest::Contains("resonance detected"), MathError);

    auto polar = identity_frame(mod(ctx, {{"z^-1"}}));
    CHECK_FALSE(polar.invariant());
    CHECK_THROWS_AS(find_resonances(polar, 24), MathError);
}

TEST_CASE("split residue") {
    auto ctx = rational_ctx(3);
    auto f = identity_frame(mod(ctx, {{"2", "1 + z"}, {"0", "5"}}));
    std::size_t split = 0;
    auto g = split_residue(f, {Quadratic(5)}, split);
    CHECK(split == 1);
    KMatrix a = s_residue(g.phi);
    CHECK(a(0, 0) == Quadratic(5));
    CHECK(a(0, 1).is_zero());
    CHECK(a(1, 0).is_zero());
    auto h = lift_splitting(g, split, 24);
    CHECK(h.phi(0, 1).is_zero());
    CHECK(h.phi(1, 0).is_zero());
}

TEST_CASE("improve lattice") {
    auto ctx = rational_ctx(3);
    const Quadratic a(2);
    auto charpoly = [](const LatticeFrame& f) { return k_charpoly(s_residue(f.phi)); };
    KPoly double_a = kp_mul(KPoly{-a, Quadratic(1)}, KPoly{-a, Quadratic(1)});

    // {a, qa}: one rescale gives {a, a}.
    auto f = identity_frame(mod(ctx, {{"2", "1 + z"}, {"z", "6"}}));
    auto g = improve_lattice_step(f, 24);
    CHECK(g.invariant());
    CHECK(charpoly(g) == double_a);
    CHECK(find_resonances(g, 24).empty());
    CHECK(s_compare(g.phi, s_inverse(g.t) * f.phi * s_twisted(g.t, ctx->q)) == Tri::equal);

    // {a, q^2 a}: two single steps.
    auto h = identity_frame(mod(ctx, {{"2", "1"}, {"z", "18"}}));
    auto h1 = improve_lattice_step(h, 24);
    CHECK_FALSE(find_resonances(h1, 24).empty());
    auto h2 = improve_lattice_step(h1, 24);
    CHECK(find_resonances(h2, 24).empty());
    CHECK(charpoly(h2) == double_a);
    CHECK(s_compare(improve_lattice(h, 24).phi, h2.phi) == Tri::equal);

    // A full Jordan block after merging: (xi - a)(xi - q a) is semisimple.
    auto j = integral_invariant(from_cyclic(sp("(xi - 2)*(xi - 6)", ctx)), 24);
    REQUIRE(j.classes.size() == 1);
    CHECK(j.classes[0].blocks == std::vector<long>{1, 1});
}

TEST_CASE("integral invariant") {
    auto ctx = rational_ctx(3);
    auto one = integral_invariant(from_cyclic(sp("xi - 5", ctx)));
    REQUIRE(one.classes.size() == 1);
    CHECK(one.classes[0].a == Quadratic(5));
    CHECK(one.classes[0].blocks == std::vector<long>{1});

    auto jordan = integral_invariant(from_cyclic(sp("(xi - 5)^2", ctx)));
    REQUIRE(jordan.classes.size() == 1);
    CHECK(jordan.classes[0].blocks == std::vector<long>{2});

    auto merged = integral_invariant(build(ctx, {lab(1, 0, 1, Quadratic(5)), lab(1, 0, 1, Quadratic(15))}));
    REQUIRE(merged.classes.size() == 1);
    CHECK(merged.classes[0].blocks == std::vector<long>{1, 1});

    auto mixed = integral_invariant(build(ctx, {lab(1, 0, 2, Quadratic(5)), lab(1, 0, 1, Quadratic(7))}));
    long total = 0;
    for (const auto& c : mixed.classes)
        for (long b : c.blocks) total += b;
    CHECK(total == 3);
    CHECK(mixed.classes.size() == 2);

    CHECK_THROWS_AS(integral_invariant(from_cyclic(sp("xi - z", ctx))), MathError);
}

TEST_CASE("iso oracle") {
    auto ctx = rational_ctx(3);
    auto v = build(ctx, {lab(1, 0, 1, Quadratic(2)), lab(1, 1, 1, Quadratic(1))});
    auto r = iso_oracle(v, v, 8);
    REQUIRE(r.status == Status::isomorphic);

    auto a = from_cyclic(sp("xi - 2", ctx));
    auto qa = from_cyclic(sp("xi - 6", ctx));
    r = iso_oracle(a, qa, 8);
    REQUIRE(r.status == Status::isomorphic);
    // T(z) a = q a T(qz) forces T = c z^-1.
    const auto& t = (*r.witness)(0, 0);
    CHECK(t.val_index() == -1);
    CHECK(t.compare(LaurentSeries::monomial(t.raw(-1), -1, t.prec())) == Tri::equal);

    for (long d : {4, 6, 8}) {
        auto x = iso_oracle(from_cyclic(sp("xi - 1", ctx)), from_cyclic(sp("xi - 2", ctx)), d);
        CHECK(x.status == Status::not_isomorphic);
        CHECK(x.nullity == 0);
    }
    CHECK(iso_oracle(a, v, 8).status == Status::not_isomorphic);

    // Gauge equivalent modules are found isomorphic; the witness solves the equation.
    Rng rng(3);
    auto w = gauge(v, random_unipotent(rng, 2, 32));
    r = iso_oracle(v, w, 8);
    REQUIRE(r.status == Status::isomorphic);
    SMatrix lhs = *r.witness * v.phi;
    SMatrix rhs = w.phi * s_twisted(*r.witness, ctx->q);
    CHECK(s_compare(lhs, rhs) != Tri::unequal);
}

TEST_CASE("hom dimension") {
    auto ctx = rational_ctx(3);
    auto a = from_cyclic(sp("xi - 2", ctx));
    auto h = hom_dim(a, a, 8);
    CHECK(h.dimension == 1);
    CHECK(h.stabilized);
    auto p = build(ctx, {lab(2, 1, 1, Quadratic(1))});
    h = hom_dim(p, p, 8);
    CHECK(h.dimension == 1);
    CHECK(h.stabilized);
    h = hom_dim(from_cyclic(sp("xi - 2*z", ctx)), from_cyclic(sp("xi - 5", ctx)), 8);
    CHECK(h.dimension == 0);
    CHECK(h.stabilized);
    auto sum = build(ctx, {lab(1, 0, 1, Quadratic(2)), lab(1, 0, 1, Quadratic(2))});
    CHECK(hom_dim(sum, sum, 6).dimension == 4);
    CHECK(hom_dim(a, sum, 6).dimension == 2);
    CHECK(hom_basis(a, sum, 6).size() == 2);
    // Jordan block: endomorphisms are polynomials in the nilpotent part.
    auto j = build(ctx, {lab(1, 0, 2, Quadratic(2))});
    CHECK(hom_dim(j, j, 6).dimension == 2);
    // Distinct slope sectors.
    CHECK(hom_dim(build(ctx, {lab(2, 1, 1, Quadratic(1))}), build(ctx, {lab(3, 1, 1, Quadratic(1))}), 6).dimension == 0);
}

TEST_CASE("functors along z -> z^n") {
    // Pushforward along z -> z^n divides the precision by n.
    auto cs = rational_ctx(2, 64);
    auto v = build(cs, {lab(1, 1, 1, Quadratic(1))});
    CHECK(s_compare(pushforward_f(v, 1).phi, v.phi) == Tri::equal);
    auto pf = pushforward_f(v, 2);
    CHECK(pf.dim() == 2);
    CHECK(pf.ctx->q == Quadratic(4));
    // xi e = w e and xi (w e) = s z e: the companion of xi^2 - s z.
    CHECK(same_labels(classify(pf), {lab(2, 1, 1, Quadratic(2))}, pf.ctx));
    CHECK(iso_oracle(pf, build(pf.ctx, {lab(2, 1, 1, Quadratic(2))}), 6).status == Status::isomorphic);

    auto back = pullback_f(pf, 2, cs);
    CHECK(back.dim() == 2);
    CHECK(same_labels(classify(back), {lab(1, 1, 1, Quadratic(1)), lab(1, 1, 1, Quadratic(-1))}, cs));
    CHECK(s_compare(pullback_f(pf, 1, pf.ctx).phi, pf.phi) == Tri::equal);
    CHECK_THROWS_AS(pullback_f(pf, 3, cs), MathError);
    CHECK_THROWS_AS(pushforward_f(v, 2, rational_ctx(5)), MathError);

    Rng rng(8);
    for (int t = 0; t < 3; ++t) {
        auto m = build(cs, random_labels(rng, 1, 2));
        CHECK(pushforward_f(m, 3).dim() == 3 * m.dim());
        auto q8 = power_context(cs, 3);
        auto w = build(q8, random_labels(rng, 1, 2));
        CHECK(pushforward_f(pullback_f(w, 3, cs), 3, q8).dim() == 3 * w.dim());
    }
}

TEST_CASE("functors along xi -> xi^n") {
    auto cs = rational_ctx(2);
    auto az = mod(cs, {{"3*z"}});
    auto g = pullback_g(az, 3);
    CHECK(g.ctx->q == Quadratic(8));
    // 3z * 3(2z) * 3(4z).
    CHECK(g.phi(0, 0).compare(ser("216*z^3")) == Tri::equal);
    CHECK(pullback_g(mod(cs, {{"5"}}), 2).phi(0, 0).compare(ser("25")) == Tri::equal);
    CHECK(s_compare(pullback_g(az, 1).phi, az.phi) == Tri::equal);

    auto q4 = power_context(cs, 2);
    auto w = build(q4, {lab(1, 1, 1, Quadratic(3))});
    auto up = pushforward_g(w, 2, cs);
    CHECK(up.dim() == 2);
    CHECK(up.ctx->q == Quadratic(2));
    // The induced module is A_s / (xi^2 - 3 z).
    CHECK(same_labels(classify(up), {lab(2, 1, 1, Quadratic(3))}, cs));
    CHECK_THROWS_AS(pushforward_g(w, 3, cs), MathError);
}

TEST_CASE("pullback of pushforward splits by roots of unity") {
    auto s2 = rational_ctx(2);
    for (long k : {-3, 1, 5}) {
        auto p = build(s2, {lab(1, k, 1, Quadratic(1))});
        auto got = classify(pullback_f(pushforward_f(p, 2), 2, s2));
        CHECK(same_labels(got, {lab(1, k, 1, Quadratic(1)), lab(1, k, 1, Quadratic(-1))}, s2));
    }
    auto s3 = make_context(QuadField{-3}, Quadratic(2));
    Quadratic w(make_rational(-1, 2), make_rational(1, 2), -3);
    for (long k : {-2, 1, 4}) {
        auto p = build(s3, {lab(1, k, 1, Quadratic(1))});
        auto got = classify(pullback_f(pushforward_f(p, 3), 3, s3));
        CHECK(same_labels(got, {lab(1, k, 1, Quadratic(1)), lab(1, k, 1, w), lab(1, k, 1, w * w)}, s3));
    }
}

TEST_CASE("degree bookkeeping") {
    auto ctx = rational_ctx(2);
    Rng rng(31);
    for (int t = 0; t < 5; ++t) {
        auto x = random_labels(rng, 1, 2);
        auto y = random_labels(rng, 1, 2);
        auto vx = build(ctx, x), vy = build(ctx, y);
        CHECK(degree_weight(classify(direct_sum({vx, vy}))) == degree_weight(classify(vx)) + degree_weight(classify(vy)));
    }
    auto q = power_context(ctx, 2);
    auto p = build(q, {lab(1, 1, 1, Quadratic(3)), lab(1, -2, 1, Quadratic(1))});
    CHECK(degree_weight(classify(pullback_f(p, 2, ctx))) == 2 * degree_weight(classify(p)));
}

TEST_CASE("module and label text") {
    auto ctx = gaussian_ctx();
    auto m = build(ctx, {lab(2, 1, 1, Quadratic(3)), lab(1, 0, 1, Quadratic(make_rational(1, 2), 1, -1))});
    std::string text = write_module(m);
    CHECK(text.rfind("dim 3\n", 0) == 0);
    auto back = read_module(text, ctx);
    CHECK(s_compare(back.phi, m.phi) == Tri::equal);
    CHECK(write_module(back) == text);

    auto e = read_module("# companion\ndim 2\n0 | 5*z   # row 1\n1 | 0\n", rational_ctx());
    CHECK(s_compare(e.phi, from_cyclic(sp("xi^2 - 5*z", rational_ctx())).phi) == Tri::equal);
    auto qv = read_module("dim 1\nq*z\n", rational_ctx(3));
    CHECK(qv.phi(0, 0).compare(ser("3*z")) == Tri::equal);

    CHECK_THROWS_AS(read_module("", ctx), ParseError);
    CHECK_THROWS_AS(read_module("dim 0\n", ctx), ParseError);
    CHECK_THROWS_AS(read_module("dim 2\n1 | 0\n", ctx), ParseError);
    CHECK_THROWS_AS(read_module("dim 2\n1 | 0 | 0\n0 | 1\n", ctx), ParseError);
    CHECK_THROWS_WITH_AS(read_module("dim 2\n1 | 0\n0 | 1 +* z\n", ctx), doctest::Contains("line 3, column 8"),
                         ParseError);
    CHECK_THROWS_AS(read_module("dim 1\n0\n", ctx), PrecisionError);

    std::vector<IndecompLabel> labels{lab(1, 0, 1, Quadratic(1)), lab(2, 1, 3, Quadratic(make_rational(3, 5), 2, -1)),
                                      IndecompLabel{1, -2, 1, Quadratic(7), 40}};
    std::string lt = write_labels(labels);
    CHECK(lt == "1 0 1 1\n2 1 3 3/5+2*sqrt(-1)\n1 -2 1 7 40\n");
    auto lb = read_labels(lt);
    REQUIRE(lb.size() == 3);
    CHECK(lb[2].orbit_bound == 40);
    CHECK(lb[1].orbit_bound == 24);
    CHECK(write_labels(lb) == lt);
    auto spaced = read_labels("# header\n2 1 1 3/5 + 4/5*i   \n\n1 0 2 q 12\n", {{"q", Quadratic(2)}});
    REQUIRE(spaced.size() == 2);
    CHECK(spaced[0].a == Quadratic(make_rational(3, 5), make_rational(4, 5), -1));
    CHECK(spaced[1].a == Quadratic(2));
    CHECK(spaced[1].orbit_bound == 12);
    CHECK_THROWS_AS(read_labels("1 0 1\n"), ParseError);
    CHECK_THROWS_AS(read_labels("2 0 1 1\n"), ParseError);
    CHECK_THROWS_WITH_AS(read_labels("1 x 1 1\n"), doctest::Contains("line 1, column 3"), ParseError);
}
