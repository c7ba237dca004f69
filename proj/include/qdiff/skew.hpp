#pragma once

// The skew Laurent polynomial algebra F[xi, xi^-1] with xi f(z) = f(qz) xi.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qdiff/laurent.hpp"
#include "qdiff/scalars.hpp"
#include "qdiff/text.hpp"

namespace qdiff {

struct AlgebraContext {
    QuadField field;
    Quadratic q{1};
    long root_check_bound = 64;
    long prec = LaurentSeries::default_prec;
    // Set when q may be a root of unity; only skew arithmetic is allowed.
    bool root_of_unity_tolerant = false;
    // Known roots q^(1/n), needed to twist series of ramification n.
    std::map<int, Quadratic> roots;

    bool same_algebra(const AlgebraContext& o) const { return field == o.field && q == o.q; }
};

using Context = std::shared_ptr<const AlgebraContext>;

// Validates q against the field and the root-of-unity bound.
Context make_context(QuadField field, const Quadratic& q, long prec = LaurentSeries::default_prec,
                     long root_check_bound = 64, bool tolerant = false);
// Registers s = q^(1/n) after checking s^n == q exactly.
Context with_root(const Context& ctx, int n, const Quadratic& s);
// The context for q' = q^n (roots carried over where possible).
Context power_context(const Context& ctx, long n);

// q^(1/ram); FieldExtensionRequired when no such root is registered.
Quadratic q_step(const AlgebraContext& ctx, int ram);
// f(q^i z).
LaurentSeries sigma(const AlgebraContext& ctx, const LaurentSeries& f, long i = 1);

class SkewPoly {
public:
    explicit SkewPoly(Context ctx) : ctx_(std::move(ctx)) {}

    static SkewPoly monomial(Context ctx, const LaurentSeries& c, long degree);
    static SkewPoly xi(Context ctx, long degree = 1);
    static SkewPoly scalar(Context ctx, const LaurentSeries& c) { return monomial(std::move(ctx), c, 0); }

    const Context& ctx() const noexcept { return ctx_; }
    const std::map<long, LaurentSeries>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    long top() const;
    long bottom() const;
    // Zero series at the context precision when the degree is absent.
    LaurentSeries coeff(long degree) const;
    const LaurentSeries& lead() const;

    SkewPoly operator-() const;
    SkewPoly& operator+=(const SkewPoly& o);
    SkewPoly& operator-=(const SkewPoly& o);
    friend SkewPoly operator+(SkewPoly x, const SkewPoly& y) { return x += y; }
    friend SkewPoly operator-(SkewPoly x, const SkewPoly& y) { return x -= y; }
    friend SkewPoly operator*(const SkewPoly& x, const SkewPoly& y);

    // f * X.
    SkewPoly left_mul(const LaurentSeries& f) const;
    SkewPoly truncated(long prec) const;
    // Coefficientwise three-valued comparison.
    Tri compare(const SkewPoly& o) const;
    // Smallest coefficient precision (the context precision when zero).
    long prec() const;

    void set(long degree, const LaurentSeries& c);

private:
    void check(const SkewPoly& o) const;

    Context ctx_;
    std::map<long, LaurentSeries> coeffs_;
};

SkewPoly sp_mul(const SkewPoly& x, const SkewPoly& y);
long sp_span(const SkewPoly& x);

enum class Side { left, right };

struct Division {
    SkewPoly quotient;
    SkewPoly remainder;
};

// right: X = Q*Y + R.  left: X = Y*Q + R.  R = 0 or span(R) < span(Y),
// and top(R) < top(Y) so polynomial inputs divide as polynomials.
Division sp_divide(const SkewPoly& x, const SkewPoly& y, Side side);

struct Slope {
    Rational slope;
    long length = 0;
    friend bool operator==(const Slope&, const Slope&) = default;
};

// Lower hull of (i, valuation(a_i)); slopes are minus the hull slopes, left
// to right (so in decreasing order), collinear pieces merged.
std::vector<Slope> sp_newton_polygon(const SkewPoly& x);

// Left-multiplies by the inverse of the top coefficient.
SkewPoly sp_monic(const SkewPoly& x);

struct SlopeNormal {
    long n = 1;
    long k = 0;
    SkewPoly poly;
};

// Single slope k/n: rewrites X in eta = z^(-k/n) xi and divides out
// z^(span k/n) on the left. Needs q^(1/n) in the context.
SlopeNormal sp_slope_normalize(const SkewPoly& x);

std::string to_string(const SkewPoly& x);
// Expressions in xi, z, i, sqrt(d), named scalars and braces literals;
// products are taken in the skew algebra.
SkewPoly parse_skew(const std::string& text, const Context& ctx, const ScalarVars& vars = {});

}  // namespace qdiff
