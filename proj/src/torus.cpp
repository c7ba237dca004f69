#include "qdiff/torus.hpp"

#include <algorithm>
#include <sstream>

#include "qdiff/errors.hpp"
#include "qdiff/text.hpp"

namespace qdiff {

namespace {

long unit_precision(const TorusForm& form) {
    long prec = 1;
    for (const auto& row : form.chi)
        for (const auto& c : row) prec = std::max(prec, c.precision());
    return prec;
}

void check_dim(const TorusForm& form, const Lattice& lambda) {
    if (static_cast<long>(lambda.size()) != form.d)
        throw MathError("lattice vector of length " + std::to_string(lambda.size()) + " in rank " +
                        std::to_string(form.d));
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

long to_long(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw ParseError(where(line) + "expected an integer, got '" + s + "'");
    return v;
}

}  // namespace

Padic TorusForm::character(const Lattice& lambda, const Lattice& mu) const {
    Padic out = Padic::from_integer(1, p, unit_precision(*this));
    for (long i = 0; i < d; ++i)
        for (long j = i + 1; j < d; ++j) {
            long e = lambda[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)] -
                     lambda[static_cast<std::size_t>(j)] * mu[static_cast<std::size_t>(i)];
            if (e != 0) out = out * chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].pow(e);
        }
    return out;
}

TorusForm make_form(long d, long p, const std::vector<Padic>& upper) {
    if (d <= 0) throw MathError("torus rank must be positive");
    if (!is_prime(p)) throw MathError("torus prime " + std::to_string(p) + " is not prime");
    if (static_cast<long>(upper.size()) != d * (d - 1) / 2)
        throw MathError("form needs d(d-1)/2 entries above the diagonal");
    long prec = 1;
    for (const auto& c : upper) prec = std::max(prec, c.precision());
    TorusForm f{d, p, {}};
    f.chi.assign(static_cast<std::size_t>(d), std::vector<Padic>(static_cast<std::size_t>(d)));
    std::size_t at = 0;
    for (long i = 0; i < d; ++i) {
        auto I = static_cast<std::size_t>(i);
        f.chi[I][I] = Padic::from_integer(1, p, prec);
        for (long j = i + 1; j < d; ++j) {
            auto J = static_cast<std::size_t>(j);
            f.chi[I][J] = upper[at++];
            if (f.chi[I][J].is_zero()) throw MathError("commutation scalar indistinguishable from zero");
            f.chi[J][I] = f.chi[I][J].inverse();
        }
    }
    validate(f);
    return f;
}

void validate(const TorusForm& form) {
    if (form.d <= 0 || static_cast<long>(form.chi.size()) != form.d) throw MathError("malformed torus form");
    const Padic one = Padic::from_integer(1, form.p, 1);
    for (long i = 0; i < form.d; ++i) {
        const auto& row = form.chi[static_cast<std::size_t>(i)];
        if (static_cast<long>(row.size()) != form.d) throw MathError("malformed torus form");
        for (long j = 0; j < form.d; ++j) {
            const Padic& c = row[static_cast<std::size_t>(j)];
            if (c.p() != form.p) throw MathError("commutation scalar over the wrong prime");
            if (c.is_zero() || c.valuation() != 0) throw MathError("commutation scalars must have |chi| = 1");
            if (i == j && !c.equals(one)) throw MathError("chi[i][i] must be 1");
            if (!(c * form.chi[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]).equals(one))
                throw MathError("chi[i][j] chi[j][i] must be 1");
        }
    }
}

bool same_form(const TorusForm& x, const TorusForm& y) {
    if (x.d != y.d || x.p != y.p) return false;
    for (std::size_t i = 0; i < x.chi.size(); ++i)
        for (std::size_t j = 0; j < x.chi.size(); ++j)
            if (!x.chi[i][j].equals(y.chi[i][j])) return false;
    return true;
}

TorusElement t_zero(const TorusForm& form) { return TorusElement{form, {}}; }

TorusElement t_unit(const TorusForm& form, long precision) {
    return t_monomial(form, Lattice(static_cast<std::size_t>(form.d), 0), Padic::from_integer(1, form.p, precision));
}

TorusElement t_monomial(const TorusForm& form, const Lattice& lambda, const Padic& c) {
    return t_make(form, {{lambda, c}});
}

TorusElement t_make(const TorusForm& form, const std::map<Lattice, Padic>& coeffs) {
    TorusElement out{form, {}};
    for (const auto& [l, c] : coeffs) {
        check_dim(form, l);
        if (c.p() != form.p) throw MathError("coefficient over the wrong prime");
        if (!c.is_zero()) out.coeffs.emplace(l, c);
    }
    return out;
}

TorusElement t_add(const TorusElement& f, const TorusElement& g) {
    if (!same_form(f.form, g.form)) throw MathError("torus elements over different forms");
    std::map<Lattice, Padic> sum = f.coeffs;
    for (const auto& [l, c] : g.coeffs) {
        auto it = sum.find(l);
        if (it == sum.end()) sum.emplace(l, c);
        else it->second = it->second + c;
    }
    return t_make(f.form, sum);
}

TorusElement t_neg(const TorusElement& f) {
    TorusElement out = f;
    for (auto& [l, c] : out.coeffs) c = -c;
    return out;
}

TorusElement t_mul(const TorusElement& f, const TorusElement& g, long floor) {
    if (!same_form(f.form, g.form)) throw MathError("torus elements over different forms");
    std::map<Lattice, Padic> acc;
    Lattice nu(static_cast<std::size_t>(f.form.d));
    for (const auto& [l, a] : f.coeffs)
        for (const auto& [m, b] : g.coeffs) {
            for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = l[i] + m[i];
            Padic term = a * b * f.form.character(l, m);
            auto it = acc.find(nu);
            if (it == acc.end()) acc.emplace(nu, term);
            else it->second = it->second + term;
        }
    TorusElement out = t_make(f.form, acc);
    for (const auto& [l, c] : out.coeffs) c.check_floor(floor);
    return out;
}

bool t_equal(const TorusElement& f, const TorusElement& g) {
    if (!same_form(f.form, g.form)) return false;
    auto agree = [](const TorusElement& x, const TorusElement& y) {
        for (const auto& [l, c] : x.coeffs) {
            auto it = y.coeffs.find(l);
            if (it == y.coeffs.end()) return false;
            if (!c.equals(it->second)) return false;
        }
        return true;
    };
    return agree(f, g) && agree(g, f);
}

void validate(const Radius& r, long d) {
    if (static_cast<long>(r.size()) != d) throw MathError("radius vector needs " + std::to_string(d) + " entries");
    for (const auto& x : r)
        if (sgn(x) <= 0) throw MathError("radius entries must be positive");
}

Rational term_norm(const Lattice& lambda, const Padic& c, const Radius& r) {
    Rational out = c.abs();
    for (std::size_t i = 0; i < lambda.size(); ++i) out *= rational_pow(r[i], lambda[i]);
    return out;
}

Rational t_norm(const TorusElement& f, const Radius& r) {
    validate(r, f.form.d);
    Rational best(0);
    for (const auto& [l, c] : f.coeffs) best = std::max(best, term_norm(l, c, r));
    return best;
}

Truncation t_truncate(const TorusElement& f, const Radius& r, const Rational& eps) {
    validate(r, f.form.d);
    if (sgn(eps) <= 0) throw MathError("truncation threshold must be positive");
    Truncation out{t_zero(f.form), Rational(0)};
    for (const auto& [l, c] : f.coeffs) {
        Rational n = term_norm(l, c, r);
        if (n < eps) out.tail_bound = std::max(out.tail_bound, n);
        else out.kept.coeffs.emplace(l, c);
    }
    return out;
}

std::vector<Rational> t_membership_report(const TorusElement& f, const Radius& r) {
    validate(r, f.form.d);
    std::vector<Rational> out;
    for (const auto& [l, c] : f.coeffs) out.push_back(term_norm(l, c, r));
    std::sort(out.rbegin(), out.rend());
    return out;
}

std::string write_torus(const TorusElement& f) {
    std::ostringstream os;
    os << "form " << f.form.d << " " << f.form.p << "\n";
    for (long i = 0; i < f.form.d; ++i)
        for (long j = i + 1; j < f.form.d; ++j)
            os << "chi " << i << " " << j << " : "
               << to_string(f.form.chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) << "\n";
    for (const auto& [l, c] : f.coeffs) {
        for (std::size_t i = 0; i < l.size(); ++i) os << (i ? " " : "") << l[i];
        os << " : " << to_string(c) << "\n";
    }
    return os.str();
}

TorusElement read_torus(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    long d = 0, p = 0;
    bool have_form = false;
    std::map<std::pair<long, long>, Padic> upper;
    std::map<Lattice, Padic> terms;
    std::vector<std::size_t> term_lines;
    for (; std::getline(in, raw);) {
        ++line;
        std::string s = strip_line(raw);
        if (s.empty()) continue;
        std::istringstream ws(s);
        std::string head;
        ws >> head;
        if (!have_form) {
            std::string sd, sp, extra;
            ws >> sd >> sp;
            if (head != "form" || (ws >> extra)) throw ParseError(where(line) + "expected 'form d p'");
            d = to_long(sd, line);
            p = to_long(sp, line);
            if (d <= 0) throw ParseError(where(line) + "torus rank must be positive");
            if (!is_prime(p)) throw ParseError(where(line) + "not a prime: " + sp);
            have_form = true;
            continue;
        }
        auto colon = s.find(':');
        if (colon == std::string::npos) throw ParseError(where(line) + "expected ':' before the coefficient");
        Padic c;
        try {
            c = parse_padic(s.substr(colon + 1));
        } catch (const ParseError& e) {
            throw ParseError(where(line) + e.detail());
        }
        if (c.p() != p) throw ParseError(where(line) + "coefficient over p = " + std::to_string(c.p()));
        std::istringstream ls(s.substr(0, colon));
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (!tok.empty() && tok[0] == "chi") {
            if (tok.size() != 3) throw ParseError(where(line) + "expected 'chi i j : <padic>'");
            long i = to_long(tok[1], line), j = to_long(tok[2], line);
            if (i < 0 || j <= i || j >= d) throw ParseError(where(line) + "chi indices need 0 <= i < j < d");
            if (!upper.emplace(std::pair{i, j}, c).second) throw ParseError(where(line) + "repeated chi entry");
            continue;
        }
        if (static_cast<long>(tok.size()) != d)
            throw ParseError(where(line) + "expected " + std::to_string(d) + " lattice coordinates");
        Lattice l;
        for (const auto& t : tok) l.push_back(to_long(t, line));
        if (terms.count(l)) throw ParseError(where(line) + "repeated lattice vector");
        terms.emplace(std::move(l), c);
    }
    if (!have_form) throw ParseError(where(line + 1) + "missing 'form d p' header");
    std::vector<Padic> up;
    for (long i = 0; i < d; ++i)
        for (long j = i + 1; j < d; ++j) {
            auto it = upper.find({i, j});
            if (it == upper.end())
                throw ParseError("missing chi " + std::to_string(i) + " " + std::to_string(j));
            up.push_back(it->second);
        }
    try {
        return t_make(make_form(d, p, up), terms);
    } catch (const MathError& e) {
        throw ParseError(e.what());
    }
}

Radius parse_radius(const std::string& text) {
    Radius out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        Quadratic x = parse_scalar(cur);
        if (!x.is_rational()) throw ParseError("radius entries must be rational: '" + cur + "'");
        if (sgn(x.a()) <= 0) throw ParseError("radius entries must be positive: '" + cur + "'");
        out.push_back(x.a());
    }
    if (out.empty()) throw ParseError("empty radius vector");
    return out;
}

}  // namespace qdiff
