#include "qdiff/text.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include "expr.hpp"

namespace qdiff {

namespace {

using detail::ascii_minus;
using detail::ExprParser;

// Operations the expression parser needs from a value type.
struct ScalarOps {
    using V = Quadratic;
    const ScalarVars* vars;
    V integer(const Integer& n) const { return Quadratic(Rational(n)); }
    V sqrt_of(long d) const {
        if (d == 1) return Quadratic(1);
        return Quadratic::sqrt_of(d);
    }
    bool variable(const std::string& name, V& out) const {
        if (name == "i") {
            out = Quadratic::sqrt_of(-1);
            return true;
        }
        auto it = vars->find(name);
        if (it == vars->end()) return false;
        out = it->second;
        return true;
    }
    V divide(const V& x, const V& y) const {
        if (y.is_zero()) throw ParseError("division by zero in expression");
        return x / y;
    }
    V power(const V& x, long e) const { return x.pow(e); }
    V literal(const std::string& text) const { throw ParseError("series literal where a scalar is expected: " + text); }
};

struct SeriesOps {
    using V = LaurentSeries;
    const ScalarVars* vars;
    long prec;
    V integer(const Integer& n) const { return LaurentSeries::constant(Quadratic(Rational(n)), prec); }
    V sqrt_of(long d) const {
        return LaurentSeries::constant(d == 1 ? Quadratic(1) : Quadratic::sqrt_of(d), prec);
    }
    bool variable(const std::string& name, V& out) const {
        if (name == "z") {
            out = LaurentSeries::monomial(Quadratic(1), 1, prec);
            return true;
        }
        if (name == "i") {
            out = LaurentSeries::constant(Quadratic::sqrt_of(-1), prec);
            return true;
        }
        auto it = vars->find(name);
        if (it == vars->end()) return false;
        out = LaurentSeries::constant(it->second, prec);
        return true;
    }
    V divide(const V& x, const V& y) const {
        if (y.is_zero()) throw ParseError("division by zero in expression");
        return (x * y.inverse()).truncated(prec);
    }
    V power(const V& x, long e) const {
        if (x.is_zero()) return x;
        // Monomials exponentiate exactly.
        if (x.hi() == x.lo() + 1) {
            Quadratic c = x.leading().pow(e);
            return LaurentSeries::monomial(c, x.lo() * e, prec, x.ram());
        }
        V base = e < 0 ? x.inverse() : x;
        long n = e < 0 ? -e : e;
        V r = LaurentSeries::constant(Quadratic(1), prec);
        for (long k = 0; k < n; ++k) r = (r * base).truncated(prec);
        return r;
    }
    V literal(const std::string& text) const { return parse_series_expr(text, prec, *vars); }
};

}  // namespace

Quadratic parse_scalar(const std::string& text, const ScalarVars& vars) {
    try {
        return ExprParser<ScalarOps>(text, ScalarOps{&vars}).parse();
    } catch (const MathError& e) {
        throw ParseError(e.what());
    }
}

LaurentSeries parse_series(const std::string& text) { return parse_series_expr(text, LaurentSeries::default_prec); }

LaurentSeries parse_series_expr(const std::string& raw, long prec, const ScalarVars& vars) {
    std::string text = ascii_minus(raw);
    std::size_t b = text.find_first_not_of(" \t");
    if (b != std::string::npos && text[b] == '{') {
        static const std::regex re(R"(^\s*\{\s*ram\s*=\s*([0-9]+)\s*;\s*prec\s*=\s*(-?[0-9]+)\s*;\s*terms\s*:(.*)\}\s*$)");
        std::smatch m;
        if (!std::regex_match(text, m, re)) throw ParseError("malformed series literal '" + raw + "'");
        int ram = std::stoi(m[1]);
        if (ram <= 0) throw ParseError("ramification must be positive in '" + raw + "'");
        long p = std::stol(m[2]);
        std::map<long, Quadratic> terms;
        std::string body = m[3];
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            auto colon = item.find(':');
            if (colon == std::string::npos) throw ParseError("term without ':' in '" + raw + "'");
            long idx;
            try {
                idx = std::stol(item.substr(0, colon));
            } catch (const std::exception&) {
                throw ParseError("bad term index in '" + raw + "'");
            }
            Quadratic c = parse_scalar(item.substr(colon + 1), vars);
            if (idx >= p) throw ParseError("term index " + std::to_string(idx) + " at or beyond prec in '" + raw + "'");
            if (!c.is_zero()) terms[idx] += c;
        }
        return LaurentSeries::from_terms(terms, p, ram);
    }
    try {
        return ExprParser<SeriesOps>(text, SeriesOps{&vars, prec}).parse().truncated(prec);
    } catch (const MathError& e) {
        throw ParseError(e.what());
    } catch (const PrecisionError& e) {
        throw ParseError(e.what());
    }
}

FieldSpec parse_field(const std::string& raw) {
    std::string text = raw;
    for (auto& c : text) {
        if (c == ':' || c == ',') c = ' ';
    }
    std::istringstream is(text);
    std::string kind;
    is >> kind;
    FieldSpec f;
    if (kind == "rational" || kind == "Q") {
        f.kind = FieldSpec::Kind::rational;
    } else if (kind == "quadratic") {
        f.kind = FieldSpec::Kind::quadratic;
        if (!(is >> f.d)) throw ParseError("quadratic field needs a radicand: '" + raw + "'");
        if (f.d == 0 || !is_squarefree(f.d)) throw ParseError("radicand must be squarefree and nonzero: '" + raw + "'");
        if (f.d == 1) f.kind = FieldSpec::Kind::rational;
    } else if (kind == "padic") {
        f.kind = FieldSpec::Kind::padic;
        if (!(is >> f.p >> f.precision)) throw ParseError("padic field needs p and N: '" + raw + "'");
        if (!is_prime(f.p) || f.precision <= 0) throw ParseError("bad p-adic field '" + raw + "'");
    } else {
        throw ParseError("unknown field '" + raw + "'");
    }
    std::string extra;
    if (is >> extra) throw ParseError("trailing text in field spec '" + raw + "'");
    return f;
}

std::string to_string(const FieldSpec& f) {
    switch (f.kind) {
        case FieldSpec::Kind::rational: return "rational";
        case FieldSpec::Kind::quadratic: return "quadratic " + std::to_string(f.d);
        case FieldSpec::Kind::padic: return "padic " + std::to_string(f.p) + " " + std::to_string(f.precision);
    }
    return "?";
}

std::string strip_line(const std::string& line) {
    std::string s = line.substr(0, line.find('#'));
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace qdiff
