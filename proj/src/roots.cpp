#include <algorithm>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "qdiff/linalg.hpp"

namespace qdiff {

namespace {

using Real = boost::multiprecision::cpp_bin_float_100;
using Complex = boost::multiprecision::cpp_complex_100;

Real to_real(const Rational& r) { return Real(r.get_num().get_str()) / Real(r.get_den().get_str()); }

Complex to_complex(const Quadratic& x) {
    Real a = to_real(x.a());
    if (x.is_rational()) return Complex(a, Real(0));
    Real b = to_real(x.b());
    if (x.d() < 0) return Complex(a, b * sqrt(Real(-x.d())));
    return Complex(a + b * sqrt(Real(x.d())), Real(0));
}

// Simultaneous Aberth iteration on a squarefree polynomial.
std::vector<Complex> approximate_roots(const std::vector<Complex>& c) {
    std::size_t m = c.size() - 1;
    Real radius(1);
    for (std::size_t i = 0; i < m; ++i) radius = std::max(radius, Real(1) + abs(c[i] / c[m]));
    std::vector<Complex> z(m);
    const Real pi = boost::math::constants::pi<Real>();
    for (std::size_t k = 0; k < m; ++k) {
        Real t = 2 * pi * Real(k) / Real(m) + Real(0.4);
        z[k] = Complex(radius * cos(t), radius * sin(t));
    }
    const Real tol("1e-85");
    for (int iter = 0; iter < 4000; ++iter) {
        Real worst(0);
        for (std::size_t k = 0; k < m; ++k) {
            Complex p = c[m];
            Complex dp(0);
            for (std::size_t i = m; i-- > 0;) {
                dp = dp * z[k] + p;
                p = p * z[k] + c[i];
            }
            if (abs(p) == 0) continue;
            Complex ratio = p / dp;
            Complex s(0);
            for (std::size_t j = 0; j < m; ++j)
                if (j != k) s += Complex(1) / (z[k] - z[j]);
            Complex w = ratio / (Complex(1) - ratio * s);
            z[k] -= w;
            worst = std::max(worst, abs(w) / (Real(1) + abs(z[k])));
        }
        if (worst < tol) break;
    }
    return z;
}

// fl must be integral.
Integer to_integer(const Real& fl) {
    std::string s = fl.str(0, std::ios_base::fixed);
    auto dot = s.find('.');
    if (dot != std::string::npos) s = s.substr(0, dot);
    if (s == "-0") s = "0";
    return Integer(s);
}

// Continued-fraction reconstruction of a rational from a real approximation.
Rational reconstruct(const Real& x) {
    const Real eps("1e-60");
    if (abs(x) < eps) return Rational(0);
    Integer h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    Real y = x;
    for (int step = 0; step < 240; ++step) {
        Real fl = floor(y);
        Integer a = to_integer(fl);
        Integer h = a * h0 + h1;
        Integer k = a * k0 + k1;
        h1 = h0;
        h0 = h;
        k1 = k0;
        k0 = k;
        Rational cand(h, k);
        cand.canonicalize();
        if (abs(x - to_real(cand)) < eps * (Real(1) + abs(x))) return cand;
        Real frac = y - fl;
        if (frac == 0) return cand;
        y = Real(1) / frac;
        if (mpz_sizeinbase(k.get_mpz_t(), 10) > 40) break;
    }
    Rational r(h0, k0);
    r.canonicalize();
    return r;
}

Quadratic conj_poly_coeff(const Quadratic& c) { return c.conj(); }

}  // namespace

std::vector<Eigenvalue> kp_roots(const KPoly& p0, QuadField field, const std::string& what) {
    KPoly p = kp_monic(p0);
    if (p.empty()) throw MathError("roots of the zero polynomial");
    std::vector<Eigenvalue> out;
    if (p.size() == 1) return out;
    // Squarefree part carries every root exactly once.
    KPoly g = kp_gcd(p, kp_derivative(p));
    KPoly sq = kp_monic(kp_divmod(p, g).first);

    std::vector<Quadratic> found;
    auto accept = [&](const Quadratic& r) {
        if (!kp_eval(sq, r).is_zero()) return;
        for (const auto& f : found)
            if (f == r) return;
        found.push_back(r);
    };

    // Linear factors are read off directly.
    if (sq.size() == 2) {
        accept(-sq[0]);
    } else {
        std::vector<Complex> c;
        for (const auto& x : sq) c.push_back(to_complex(x));
        auto z = approximate_roots(c);
        if (field.d == 1) {
            for (const auto& r : z) accept(Quadratic(reconstruct(r.real())));
        } else if (field.d < 0) {
            Real s = sqrt(Real(-field.d));
            for (const auto& r : z) {
                Rational a = reconstruct(r.real());
                Rational b = reconstruct(r.imag() / s);
                accept(sgn(b) == 0 ? Quadratic(a) : Quadratic(a, b, field.d));
            }
        } else {
            // Real embedding: pair roots of p with roots of its conjugate.
            std::vector<Complex> cc;
            for (const auto& x : sq) cc.push_back(to_complex(conj_poly_coeff(x)));
            auto w = approximate_roots(cc);
            Real s = sqrt(Real(field.d));
            const Real tiny("1e-50");
            for (const auto& r : z) {
                if (abs(r.imag()) > tiny) continue;
                accept(Quadratic(reconstruct(r.real())));
                for (const auto& t : w) {
                    if (abs(t.imag()) > tiny) continue;
                    Rational a = reconstruct((r.real() + t.real()) / 2);
                    Rational b = reconstruct((r.real() - t.real()) / (2 * s));
                    accept(sgn(b) == 0 ? Quadratic(a) : Quadratic(a, b, field.d));
                }
            }
        }
    }
    if (static_cast<long>(found.size()) != kp_degree(sq))
        throw FieldExtensionRequired(what + " " + kp_to_string(p) + " does not split over the coefficient field");
    std::sort(found.begin(), found.end());
    for (const auto& r : found) {
        KPoly lin{-r, Quadratic(1)};
        KPoly rest = p;
        long mult = 0;
        for (;;) {
            auto [q, rem] = kp_divmod(rest, lin);
            if (!rem.empty()) break;
            rest = q;
            ++mult;
        }
        out.push_back({r, mult});
    }
    return out;
}

}  // namespace qdiff
