#include "qdiff/pic.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qdiff/qmod.hpp"

namespace qdiff {

namespace {

double log10_of(const Integer& x) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log10(std::fabs(m)) + static_cast<double>(e) * std::log10(2.0);
}

double log10_of(const Rational& x) { return log10_of(x.get_num()) - log10_of(x.get_den()); }

double log10_of(const AbsValue& v) {
    if (v.real_abs) return std::log10(to_double_real(*v.real_abs));
    return log10_of(v.value);
}

std::string exact_string(const AbsValue& v) { return v.real_abs ? to_string(*v.real_abs) : to_string(v.value); }

void require_zero_constant(const LaurentSeries& g) {
    if (g.ram() != 1) throw MathError("unit exponent must be unramified");
    if (g.prec() > 0 && !g.raw(0).is_zero()) throw MathError("unit exponent g must have zero constant term");
}

void fit(DivisorDiagnostics& d) {
    if (d.entries.size() < 2) return;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(d.entries.size());
    for (const auto& e : d.entries) {
        double x = std::log10(static_cast<double>(e.n));
        double y = d.squared ? e.log10 / 2 : e.log10;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    d.fit_l = -slope;
    d.fit_c = std::pow(10.0, icept);
}

}  // namespace

UnitCocycle make_unit(const Quadratic& c, long k, const LaurentSeries& g) {
    if (c.is_zero()) throw MathError("unit constant must be nonzero");
    require_zero_constant(g);
    return UnitCocycle{c, k, g};
}

UnitCocycle unit_from_series(const LaurentSeries& u) {
    if (u.ram() != 1) throw MathError("unit must be unramified");
    long k = u.val_index();
    Quadratic c = u.leading();
    LaurentSeries one_plus_h = u.shifted(-k).scaled(c.inverse());
    return UnitCocycle{c, k, ls_log(one_plus_h)};
}

LaurentSeries unit_to_series(const UnitCocycle& u) {
    return ls_exp(u.g).scaled(u.c).shifted(u.k);
}

UnitCocycle unit_mul(const UnitCocycle& x, const UnitCocycle& y) {
    return UnitCocycle{x.c * y.c, x.k + y.k, x.g + y.g};
}

UnitCocycle unit_inv(const UnitCocycle& x) {
    return UnitCocycle{x.c.inverse(), -x.k, -x.g};
}

UnitCocycle coboundary(const AlgebraContext& ctx, long k, const LaurentSeries& h) {
    require_zero_constant(h);
    return UnitCocycle{ctx.q.pow(k), 0, sigma(ctx, h) - h};
}

std::string to_string(const UnitCocycle& u) {
    return to_string(u.c) + " * z^" + std::to_string(u.k) + " * exp(" + to_string(u.g) + ")";
}

AdditiveSolution solve_additive(const AlgebraContext& ctx, const LaurentSeries& g, std::size_t height_cap) {
    if (g.ram() != 1) throw MathError("cocycle solver needs an unramified series");
    AdditiveSolution out{LaurentSeries::zero(g.prec()), Quadratic(0)};
    if (g.prec() > 0) out.obstruction = g.raw(0);
    std::map<long, Quadratic> terms;
    for (long n = g.lo(); n < g.hi(); ++n) {
        if (n == 0 || g.raw(n).is_zero()) continue;
        Quadratic div = ctx.q.pow(n) - Quadratic(1);
        if (div.is_zero()) throw MathError("small divisor q^" + std::to_string(n) + " - 1 vanishes: q is a root of unity");
        Quadratic an = g.raw(n) / div;
        if (an.height() > height_cap)
            throw ResourceError("cocycle coefficient at z^" + std::to_string(n) + " exceeds " +
                                std::to_string(height_cap) + " bits");
        terms.emplace(n, an);
    }
    out.a = LaurentSeries::from_terms(terms, g.prec());
    return out;
}

long degree(const UnitCocycle& u) { return u.k; }

PicardClass picard_class(const AlgebraContext& ctx, const UnitCocycle& u, long orbit_bound) {
    if (orbit_bound <= 0) throw MathError("orbit bound must be positive");
    require_zero_constant(u.g);
    // exp(g) = exp(a(qz) - a(z)) is a coboundary, leaving c z^k.
    auto sol = solve_additive(ctx, u.g);
    if (!sol.obstruction.is_zero()) throw MathError("unit exponent has a nonzero obstruction");
    return PicardClass{u.k, orbit_canonical(u.c, ctx.q, orbit_bound), orbit_bound};
}

PicardClass class_mul(const PicardClass& x, const PicardClass& y) {
    return PicardClass{x.deg + y.deg, x.point * y.point, std::min(x.orbit_bound, y.orbit_bound)};
}

PicardClass class_inv(const PicardClass& x) {
    return PicardClass{-x.deg, x.point.inverse(), x.orbit_bound};
}

ClassEq class_eq(const PicardClass& x, const PicardClass& y, const Quadratic& q) {
    if (x.deg != y.deg) return ClassEq::unequal;
    const long bound = std::min(x.orbit_bound, y.orbit_bound);
    if (orbit_eq(x.point, y.point, q, bound)) return ClassEq::equal;
    // r = q^m forces N(r) = N(q)^m.
    Rational nr = (y.point / x.point).norm();
    Rational nq = q.norm();
    if (abs(nq) == 1) return abs(nr) == 1 ? ClassEq::undecided : ClassEq::unequal;
    long guess = std::lround(log10_of(Rational(abs(nr))) / log10_of(Rational(abs(nq))));
    for (long m = guess - 1; m <= guess + 1; ++m) {
        if (rational_pow(nq, m) != nr) continue;
        if (std::labs(m) > bound) return ClassEq::undecided;
        return y.point / x.point == q.pow(m) ? ClassEq::equal : ClassEq::unequal;
    }
    return ClassEq::unequal;
}

std::string to_string(const PicardClass& x) {
    return "(" + std::to_string(x.deg) + ", " + to_string(x.point) + ") [orbit M=" + std::to_string(x.orbit_bound) + "]";
}

std::string to_string(ClassEq e) {
    switch (e) {
    case ClassEq::equal: return "equal";
    case ClassEq::unequal: return "unequal";
    case ClassEq::undecided: return "undecided-at-bound";
    }
    return "?";
}

DivisorDiagnostics divisor_diagnostics(const Quadratic& q, QuadField field, long n_max) {
    if (n_max <= 0) throw MathError("diagnostics need N >= 1");
    DivisorDiagnostics out;
    out.squared = field.is_imaginary() || q.d() < 0;
    Quadratic p(1);
    for (long n = 1; n <= n_max; ++n) {
        p *= q;
        Quadratic x = p - Quadratic(1);
        if (x.is_zero()) throw MathError("q is a root of unity: q^" + std::to_string(n) + " = 1");
        DivisorEntry e{n, abs_value(x, field), 0};
        e.log10 = log10_of(e.value);
        out.entries.push_back(std::move(e));
    }
    fit(out);
    return out;
}

DivisorDiagnostics divisor_diagnostics(const Padic& q, long n_max) {
    if (n_max <= 0) throw MathError("diagnostics need N >= 1");
    DivisorDiagnostics out;
    const Padic one = Padic::from_integer(1, q.p(), std::max(q.abs_precision(), 1L));
    Padic p = one;
    for (long n = 1; n <= n_max; ++n) {
        p = p * q;
        Padic x = p - one;
        if (x.is_zero())
            throw PrecisionError("q^" + std::to_string(n) + " - 1 vanishes modulo p^" + std::to_string(x.abs_precision()));
        DivisorEntry e{n, abs_value(x), 0};
        e.log10 = log10_of(e.value);
        out.entries.push_back(std::move(e));
    }
    fit(out);
    return out;
}

std::string diagnostics_csv(const DivisorDiagnostics& d) {
    std::ostringstream os;
    os << "n,abs_qn_minus_1_exact,log10_float\n";
    char buf[64];
    for (const auto& e : d.entries) {
        std::snprintf(buf, sizeof buf, "%.12g", e.log10);
        os << e.n << "," << exact_string(e.value) << "," << buf << "\n";
    }
    return os.str();
}

}  // namespace qdiff
