#include "qdiff/moduli.hpp"

#include <map>
#include <sstream>

#include "qdiff/errors.hpp"
#include "qdiff/text.hpp"

namespace qdiff {

namespace {

constexpr long step_cap = 100000;

Quadratic num(const Integer& x) { return Quadratic(Rational(x)); }

Integer floor_q(const Rational& x) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return out;
}

// Complete quotients x_0 = tau, x_{k+1} = 1 / (x_k - a_k), until the first
// repeat, plus `extra` further steps. prefix[k] maps x_k to x_0.
struct CFRun {
    std::vector<Quadratic> x;
    std::vector<Integer> a;
    std::vector<Mat2> prefix;
    std::size_t pre = 0, per = 0;
};

CFRun cf_run(const Quadratic& tau, std::size_t extra) {
    CFRun run;
    std::map<Quadratic, std::size_t> seen;
    Quadratic x = tau;
    Mat2 p = Mat2::identity();
    for (long step = 0;; ++step) {
        if (step > step_cap) throw ResourceError("continued fraction period exceeds " + std::to_string(step_cap));
        if (run.per == 0) {
            auto [it, fresh] = seen.emplace(x, run.x.size());
            if (!fresh) {
                run.pre = it->second;
                run.per = run.x.size() - it->second;
            }
        }
        if (run.per != 0 && run.x.size() >= run.pre + run.per + extra) break;
        Integer ak = real_floor(x);
        run.x.push_back(x);
        run.a.push_back(ak);
        run.prefix.push_back(p);
        p = p * Mat2{ak, 1, 1, 0};
        x = (x - num(ak)).inverse();
    }
    return run;
}

void require_real(const Quadratic& tau) {
    if (regime(tau) != Regime::real) throw MathError("expected a real quadratic irrational");
}

// Q-coordinates of (a, b) parts.
std::pair<Rational, Rational> parts(const Quadratic& x) { return {x.a(), x.b()}; }

}  // namespace

Mat2 Mat2::inverse() const {
    Integer e = det();
    if (e != 1 && e != -1) throw MathError("matrix is not unimodular");
    return Mat2{e * d, -e * b, -e * c, e * a};
}

Quadratic Mat2::apply(const Quadratic& tau) const {
    Quadratic den = num(c) * tau + num(d);
    if (den.is_zero()) throw MathError("fractional transformation hits a pole");
    return (num(a) * tau + num(b)) / den;
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

std::string to_string(const Mat2& m) {
    return "[[" + m.a.get_str() + ", " + m.b.get_str() + "], [" + m.c.get_str() + ", " + m.d.get_str() + "]]";
}

Regime regime(const Quadratic& tau) {
    if (tau.is_rational()) throw MathError("tau must be irrational, got " + to_string(tau));
    if (tau.d() > 0) return Regime::real;
    return sgn(tau.b()) > 0 ? Regime::upper : Regime::lower;
}

std::string to_string(Regime r) {
    switch (r) {
    case Regime::upper: return "upper";
    case Regime::lower: return "lower";
    case Regime::real: return "real";
    }
    return "?";
}

bool in_fundamental_domain(const Quadratic& tau) {
    if (regime(tau) != Regime::upper) return false;
    const Rational& re = tau.a();
    Rational n2 = tau.norm();
    if (re < Rational(-1, 2) || re >= Rational(1, 2)) return false;
    if (n2 < 1) return false;
    return n2 > 1 || re <= 0;
}

Reduction reduce_upper(const Quadratic& tau) {
    if (regime(tau) != Regime::upper) throw MathError("reduce_upper needs Im(tau) > 0; use cf_expand for real points");
    Reduction r{tau, Mat2::identity()};
    for (long step = 0;; ++step) {
        if (step > step_cap) throw ResourceError("reduction did not terminate");
        Integer n = floor_q(r.tau.a() + Rational(1, 2));
        if (n != 0) {
            r.tau = r.tau - num(n);
            r.g = Mat2{1, -n, 0, 1} * r.g;
        }
        if (r.tau.norm() >= 1) break;
        r.tau = Mat2::S().apply(r.tau);
        r.g = Mat2::S() * r.g;
    }
    if (r.tau.norm() == 1 && sgn(r.tau.a()) > 0) {
        r.tau = Mat2::S().apply(r.tau);
        r.g = Mat2::S() * r.g;
    }
    return r;
}

CFExpansion cf_expand(const Quadratic& tau) {
    require_real(tau);
    CFRun run = cf_run(tau, 0);
    CFExpansion out;
    out.preperiod.assign(run.a.begin(), run.a.begin() + static_cast<long>(run.pre));
    out.period.assign(run.a.begin() + static_cast<long>(run.pre), run.a.end());
    return out;
}

std::string to_string(const CFExpansion& cf) {
    std::ostringstream os;
    auto list = [&](const std::vector<Integer>& v) {
        os << "[";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
        os << "]";
    };
    os << "preperiod ";
    list(cf.preperiod);
    os << " period ";
    list(cf.period);
    return os.str();
}

Equivalence sl2_equivalent(const Quadratic& tau, const Quadratic& mu) {
    Regime rt = regime(tau), rm = regime(mu);
    if ((rt == Regime::real) != (rm == Regime::real)) throw MathError("mixed regimes: real and non-real points");
    Equivalence out;
    if (tau.d() != mu.d()) return out;
    if (rt != Regime::real) {
        // SL2(R) preserves each half plane; conjugation commutes with it.
        if (rt != rm) return out;
        Quadratic t = rt == Regime::lower ? tau.conj() : tau;
        Quadratic m = rm == Regime::lower ? mu.conj() : mu;
        Reduction a = reduce_upper(t), b = reduce_upper(m);
        if (!(a.tau == b.tau)) return out;
        out.equivalent = out.gl2_equivalent = true;
        out.witness = a.g.inverse() * b.g;
    } else {
        CFRun a = cf_run(tau, 0);
        CFRun b = cf_run(mu, 0);
        std::map<Quadratic, std::size_t> tail;
        for (std::size_t j = b.pre; j < b.pre + b.per; ++j) tail.emplace(b.x[j], j);
        std::optional<std::pair<std::size_t, std::size_t>> hit;
        for (std::size_t i = a.pre; i < a.pre + a.per && !hit; ++i) {
            auto it = tail.find(a.x[i]);
            if (it != tail.end()) hit = std::pair{i, it->second};
        }
        if (!hit) return out;
        out.gl2_equivalent = true;
        auto [i, j] = *hit;
        // tau = A w and mu = B w, det A B^-1 = (-1)^(i + j).
        Mat2 g = a.prefix[i] * b.prefix[j].inverse();
        if (g.det() != 1) {
            if (a.per % 2 == 0) return out;
            // One full period fixes w and flips the sign.
            CFRun longer = cf_run(tau, a.per + 1);
            g = longer.prefix[i + a.per] * b.prefix[j].inverse();
        }
        out.equivalent = true;
        out.witness = g;
    }
    if (!(out.witness->apply(mu) == tau) || out.witness->det() != 1)
        throw std::logic_error("equivalence witness failed verification");
    return out;
}

QuasiLattice make_lattice(const Quadratic& w1, const Quadratic& w2) {
    if (w1.is_zero() || w2.is_zero()) throw MathError("lattice generators must be nonzero");
    QuasiLattice l{w1, w2};
    regime(ratio(l));
    return l;
}

Quadratic ratio(const QuasiLattice& l) { return l.w2 / l.w1; }

bool is_discrete(const QuasiLattice& l) { return regime(ratio(l)) != Regime::real; }

std::optional<std::pair<Integer, Integer>> lattice_coords(const QuasiLattice& l, const Quadratic& x) {
    long d = l.w1.is_rational() ? l.w2.d() : l.w1.d();
    if (!x.is_rational() && x.d() != d) return std::nullopt;
    auto [p1, q1] = parts(l.w1);
    auto [p2, q2] = parts(l.w2);
    auto [p, q] = parts(x);
    Rational det = p1 * q2 - p2 * q1;
    Rational cx = (p * q2 - p2 * q) / det;
    Rational cy = (p1 * q - p * q1) / det;
    if (cx.get_den() != 1 || cy.get_den() != 1) return std::nullopt;
    return std::pair{cx.get_num(), cy.get_num()};
}

bool preserves(const QuasiLattice& l, const Quadratic& alpha) {
    auto u = lattice_coords(l, alpha * l.w1);
    auto v = lattice_coords(l, alpha * l.w2);
    if (!u || !v) return false;
    Integer det = u->first * v->second - u->second * v->first;
    return det == 1 || det == -1;
}

Similarity lattice_similar(const QuasiLattice& l, const QuasiLattice& m) {
    Quadratic t = ratio(l), u = ratio(m);
    Regime rt = regime(t), ru = regime(u);
    if ((rt == Regime::real) != (ru == Regime::real)) throw MathError("regime mismatch of lattice ratios");
    Similarity out;
    if (t.d() != u.d()) return out;
    // Swapping the basis (det -1) moves a lower-half ratio up.
    const Mat2 swap{0, 1, 1, 0};
    Mat2 pt = rt == Regime::lower ? swap : Mat2::identity();
    Mat2 pu = ru == Regime::lower ? swap : Mat2::identity();
    Equivalence e = sl2_equivalent(pt.apply(t), pu.apply(u));
    Mat2 g;
    if (e.equivalent) {
        g = pt.inverse() * *e.witness * pu;
    } else if (rt == Regime::real && e.gl2_equivalent) {
        // GL2 suffices for similarity: realize it through the continued fractions.
        CFRun a = cf_run(t, 0), b = cf_run(u, 0);
        for (std::size_t i = a.pre; i < a.pre + a.per; ++i)
            for (std::size_t j = b.pre; j < b.pre + b.per; ++j)
                if (a.x[i] == b.x[j]) {
                    g = a.prefix[i] * b.prefix[j].inverse();
                    i = a.pre + a.per;
                    break;
                }
    } else {
        return out;
    }
    out.similar = true;
    out.basis = g;
    out.alpha = l.w1 / (num(g.c) * m.w2 + num(g.d) * m.w1);
    if (!(l.w2 == out.alpha * (num(g.a) * m.w2 + num(g.b) * m.w1)))
        throw std::logic_error("similarity witness failed verification");
    return out;
}

StabilizerDescription stabilizer(const QuasiLattice& l) {
    Quadratic tau = ratio(l);
    Regime r = regime(tau);
    StabilizerDescription s;
    // tau^2 - 2 Re tau + N(tau) = 0, made primitive.
    Rational b1 = -2 * tau.a(), c1 = tau.norm();
    Integer den;
    mpz_lcm(den.get_mpz_t(), b1.get_den_mpz_t(), c1.get_den_mpz_t());
    Integer A = den, B = Rational(b1 * den).get_num(), C = Rational(c1 * den).get_num();
    Integer g;
    mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), C.get_mpz_t());
    s.a = A / g;
    s.b = B / g;
    s.c = C / g;
    s.discriminant = s.b * s.b - 4 * s.a * s.c;
    long d = tau.d();
    s.field_discriminant = ((d % 4) + 4) % 4 == 1 ? Integer(d) : Integer(4 * d);
    Integer f2 = s.discriminant / s.field_discriminant;
    mpz_sqrt(s.conductor.get_mpz_t(), f2.get_mpz_t());
    const Quadratic minus_one(-1);
    if (r != Regime::real) {
        if (s.discriminant == -4) {
            s.torsion_order = 4;
            s.generators = {Quadratic::sqrt_of(-1)};
        } else if (s.discriminant == -3) {
            s.torsion_order = 6;
            s.generators = {Quadratic(Rational(1, 2), Rational(1, 2), -3)};
        } else {
            s.generators = {minus_one};
        }
    } else {
        // The automorph of one period of the complete quotient w gives
        // M (w, 1) = (r w + s) (w, 1).
        CFRun run = cf_run(tau, 0);
        Mat2 per = Mat2::identity();
        for (std::size_t k = run.pre; k < run.pre + run.per; ++k) per = per * Mat2{run.a[k], 1, 1, 0};
        Quadratic eps = num(per.c) * run.x[run.pre] + num(per.d);
        s.fundamental_unit = eps;
        s.generators = {minus_one, eps};
    }
    for (const auto& x : s.generators)
        if (!preserves(l, x)) throw std::logic_error("stabilizer generator fails a L = L");
    return s;
}

std::string to_string(const StabilizerDescription& s) {
    std::ostringstream os;
    os << "discriminant " << s.discriminant.get_str() << ", conductor " << s.conductor.get_str() << ", torsion "
       << s.torsion_order << ", generators:";
    for (std::size_t i = 0; i < s.generators.size(); ++i) os << (i ? ", " : " ") << to_string(s.generators[i]);
    if (s.fundamental_unit) os << ", unit norm " << to_string(s.fundamental_unit->norm());
    return os.str();
}

IsomGroupDescription isom_group_description(const QuasiLattice& l) {
    return IsomGroupDescription{stabilizer(l), "C/L (symbolic)", "Pic(E_L): an extension of Z by C*/q^Z (symbolic)"};
}

std::string to_string(const IsomGroupDescription& d) {
    return "G_L: " + to_string(d.g_l) + "\ntranslations: " + d.translations + "\npicard: " + d.picard + "\n";
}

QuasiLattice parse_lattice(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
        throw ParseError("expected 'w1, w2', got '" + text + "'");
    Quadratic w1 = parse_scalar(text.substr(0, comma)), w2 = parse_scalar(text.substr(comma + 1));
    try {
        return make_lattice(w1, w2);
    } catch (const MathError& e) {
        throw ParseError(std::string(e.what()) + " in '" + text + "'");
    }
}

}  // namespace qdiff
