#include "qdiff/skew.hpp"

#include <numeric>
#include <sstream>

#include "expr.hpp"

namespace qdiff {

Context make_context(QuadField field, const Quadratic& q, long prec, long root_check_bound, bool tolerant) {
    if (q.is_zero()) throw MathError("q must be nonzero");
    if (!q.is_rational() && q.d() != field.d)
        throw MathError("q = " + to_string(q) + " does not lie in Q(sqrt " + std::to_string(field.d) + ")");
    if (prec < 8) throw MathError("working precision must be at least 8");
    if (root_check_bound <= 0) throw MathError("root check bound must be positive");
    if (!tolerant) {
        auto r = is_root_of_unity(q, root_check_bound);
        if (r.root_of_unity)
            throw MathError("q = " + to_string(q) + " is a root of unity of order " + std::to_string(r.order));
    }
    auto ctx = std::make_shared<AlgebraContext>();
    ctx->field = field;
    ctx->q = q;
    ctx->prec = prec;
    ctx->root_check_bound = root_check_bound;
    ctx->root_of_unity_tolerant = tolerant;
    return ctx;
}

Context with_root(const Context& ctx, int n, const Quadratic& s) {
    if (n <= 0) throw MathError("root index must be positive");
    if (!(s.pow(n) == ctx->q)) throw MathError(to_string(s) + " is not a " + std::to_string(n) + "-th root of q");
    auto out = std::make_shared<AlgebraContext>(*ctx);
    out->roots[n] = s;
    return out;
}

Context power_context(const Context& ctx, long n) {
    if (n <= 0) throw MathError("power must be positive");
    auto out = std::make_shared<AlgebraContext>(*ctx);
    out->q = ctx->q.pow(n);
    out->roots.clear();
    for (const auto& [m, r] : ctx->roots) out->roots[m] = r.pow(n);
    if (n > 1) out->roots[static_cast<int>(n)] = ctx->q;
    return out;
}

Quadratic q_step(const AlgebraContext& ctx, int ram) {
    if (ram == 1) return ctx.q;
    auto it = ctx.roots.find(ram);
    if (it != ctx.roots.end()) return it->second;
    // A root of larger index can supply this one.
    for (const auto& [m, r] : ctx.roots) {
        if (m % ram == 0) return r.pow(m / ram);
    }
    throw FieldExtensionRequired("q^(1/" + std::to_string(ram) + ") for q = " + to_string(ctx.q));
}

LaurentSeries sigma(const AlgebraContext& ctx, const LaurentSeries& f, long i) {
    if (i == 0 || f.is_zero()) return f;
    return f.twisted(q_step(ctx, f.ram()).pow(i));
}

SkewPoly SkewPoly::monomial(Context ctx, const LaurentSeries& c, long degree) {
    SkewPoly p(std::move(ctx));
    p.set(degree, c);
    return p;
}

SkewPoly SkewPoly::xi(Context ctx, long degree) {
    long prec = ctx->prec;
    return monomial(std::move(ctx), LaurentSeries::constant(Quadratic(1), prec), degree);
}

long SkewPoly::top() const {
    if (is_zero()) throw MathError("degree of the zero skew polynomial");
    return coeffs_.rbegin()->first;
}

long SkewPoly::bottom() const {
    if (is_zero()) throw MathError("degree of the zero skew polynomial");
    return coeffs_.begin()->first;
}

LaurentSeries SkewPoly::coeff(long degree) const {
    auto it = coeffs_.find(degree);
    if (it == coeffs_.end()) return LaurentSeries::zero(ctx_->prec);
    return it->second;
}

const LaurentSeries& SkewPoly::lead() const {
    if (is_zero()) throw MathError("leading coefficient of the zero skew polynomial");
    return coeffs_.rbegin()->second;
}

void SkewPoly::set(long degree, const LaurentSeries& c) {
    if (c.is_zero()) {
        coeffs_.erase(degree);
    } else {
        coeffs_.insert_or_assign(degree, c);
    }
}

void SkewPoly::check(const SkewPoly& o) const {
    if (ctx_ != o.ctx_ && !ctx_->same_algebra(*o.ctx_)) throw MathError("skew polynomials over different algebras");
}

SkewPoly SkewPoly::operator-() const {
    SkewPoly r = *this;
    for (auto& [d, c] : r.coeffs_) c = -c;
    return r;
}

SkewPoly& SkewPoly::operator+=(const SkewPoly& o) {
    check(o);
    for (const auto& [d, c] : o.coeffs_) {
        auto it = coeffs_.find(d);
        if (it == coeffs_.end()) {
            coeffs_.emplace(d, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }
    return *this;
}

SkewPoly& SkewPoly::operator-=(const SkewPoly& o) { return *this += -o; }

SkewPoly operator*(const SkewPoly& x, const SkewPoly& y) {
    x.check(y);
    std::map<long, LaurentSeries> acc;
    for (const auto& [i, f] : x.coeffs_) {
        for (const auto& [j, g] : y.coeffs_) {
            LaurentSeries term = f * sigma(*x.ctx_, g, i);
            auto it = acc.find(i + j);
            if (it == acc.end()) {
                acc.emplace(i + j, std::move(term));
            } else {
                it->second += term;
            }
        }
    }
    SkewPoly r(x.ctx_);
    for (auto& [d, c] : acc) r.set(d, c);
    return r;
}

SkewPoly SkewPoly::left_mul(const LaurentSeries& f) const {
    SkewPoly r(ctx_);
    for (const auto& [d, c] : coeffs_) r.set(d, f * c);
    return r;
}

SkewPoly SkewPoly::truncated(long prec) const {
    SkewPoly r(ctx_);
    for (const auto& [d, c] : coeffs_) r.set(d, c.truncated(prec));
    return r;
}

long SkewPoly::prec() const {
    long p = ctx_->prec;
    bool first = true;
    for (const auto& [d, c] : coeffs_) {
        p = first ? c.prec() : std::min(p, c.prec());
        first = false;
    }
    return p;
}

Tri SkewPoly::compare(const SkewPoly& o) const {
    check(o);
    bool any = false;
    auto visit = [&](long d) {
        Tri t = coeff(d).compare(o.coeff(d));
        if (t == Tri::unequal) return false;
        if (t == Tri::equal) any = true;
        return true;
    };
    for (const auto& [d, c] : coeffs_) {
        if (!visit(d)) return Tri::unequal;
    }
    for (const auto& [d, c] : o.coeffs_) {
        if (!visit(d)) return Tri::unequal;
    }
    return any ? Tri::equal : Tri::undecidable;
}

SkewPoly sp_mul(const SkewPoly& x, const SkewPoly& y) { return x * y; }

long sp_span(const SkewPoly& x) {
    if (x.is_zero()) throw MathError("span of the zero skew polynomial");
    return x.top() - x.bottom();
}

Division sp_divide(const SkewPoly& x, const SkewPoly& y, Side side) {
    if (y.is_zero()) throw MathError("division by the zero skew polynomial");
    const AlgebraContext& ctx = *y.ctx();
    long s = y.top();
    long span_y = sp_span(y);
    LaurentSeries inv_lead = y.lead().inverse();
    SkewPoly quotient(y.ctx());
    SkewPoly rem = x;
    // Each pass removes the top term of the remainder; stop once the
    // remainder sits strictly below top(Y) with span less than span(Y).
    while (!rem.is_zero() && (rem.top() >= s || sp_span(rem) >= span_y)) {
        long t = rem.top();
        long shift = t - s;
        LaurentSeries f(rem.lead());
        SkewPoly term(y.ctx());
        if (side == Side::right) {
            // f' xi^shift * Y has top coefficient f' sigma^shift(lead).
            LaurentSeries c = f * sigma(ctx, inv_lead, shift);
            term = SkewPoly::monomial(y.ctx(), c, shift);
            rem -= term * y;
        } else {
            // Y * f' xi^shift has top coefficient lead sigma^s(f').
            LaurentSeries c = sigma(ctx, inv_lead * f, -s);
            term = SkewPoly::monomial(y.ctx(), c, shift);
            rem -= y * term;
        }
        quotient += term;
        // The top term cancels within the window; drop it if it survived
        // as a precision artefact.
        if (!rem.is_zero() && rem.top() == t) rem.set(t, LaurentSeries::zero(rem.lead().prec(), rem.lead().ram()));
    }
    return {quotient, rem};
}

std::vector<Slope> sp_newton_polygon(const SkewPoly& x) {
    if (x.is_zero()) throw MathError("Newton polygon of the zero skew polynomial");
    std::vector<std::pair<long, Rational>> pts;
    for (const auto& [d, c] : x.coeffs()) pts.emplace_back(d, c.valuation());
    // Lower hull by the monotone chain.
    std::vector<std::pair<long, Rational>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // Remove b when it lies on or above segment a-p.
            Rational cross = Rational(b.first - a.first) * (p.second - a.second) - Rational(p.first - a.first) * (b.second - a.second);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    std::vector<Slope> out;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long len = hull[i].first - hull[i - 1].first;
        Rational slope = -(hull[i].second - hull[i - 1].second) / Rational(len);
        slope.canonicalize();
        if (!out.empty() && out.back().slope == slope) {
            out.back().length += len;
        } else {
            out.push_back({slope, len});
        }
    }
    return out;
}

SkewPoly sp_monic(const SkewPoly& x) { return x.left_mul(x.lead().inverse()); }

SlopeNormal sp_slope_normalize(const SkewPoly& x) {
    auto np = sp_newton_polygon(x);
    if (np.size() > 1) throw MathError("slope normalization needs a single Newton slope");
    if (np.empty()) return {1, 0, x};
    const Rational& lambda = np.front().slope;
    long n = lambda.get_den().get_si();
    long k = lambda.get_num().get_si();
    if (k == 0) return {1, 0, x};
    const Context& ctx = x.ctx();
    Quadratic s = q_step(*ctx, static_cast<int>(n));
    long t = x.top();
    // xi = z^(k/n) eta and (z^(k/n) eta)^i = s^(k i (i-1)/2) z^(ik/n) eta^i;
    // the common factor z^(tk/n) is divided out on the left.
    SkewPoly out(ctx);
    for (const auto& [i, c] : x.coeffs()) {
        int ram = static_cast<int>(std::lcm(static_cast<long>(c.ram()), n));
        LaurentSeries r = c.with_ram(ram);
        long unit = ram / n;
        Quadratic factor = s.pow(k * (i * (i - 1) / 2));
        out.set(i, r.scaled(factor).shifted(unit * k * (i - t)));
    }
    return {n, k, sp_monic(out)};
}

std::string to_string(const SkewPoly& x) {
    if (x.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = x.coeffs().rbegin(); it != x.coeffs().rend(); ++it) {
        if (!first) os << " + ";
        os << to_string(it->second) << "*xi^" << it->first;
        first = false;
    }
    return os.str();
}

namespace {

struct SkewOps {
    using V = SkewPoly;
    Context ctx;
    const ScalarVars* vars;
    V constant(const Quadratic& c) const { return SkewPoly::scalar(ctx, LaurentSeries::constant(c, ctx->prec)); }
    V integer(const Integer& n) const { return constant(Quadratic(Rational(n))); }
    V sqrt_of(long d) const { return constant(d == 1 ? Quadratic(1) : Quadratic::sqrt_of(d)); }
    bool variable(const std::string& name, V& out) const {
        if (name == "xi") {
            out = SkewPoly::xi(ctx);
            return true;
        }
        if (name == "z") {
            out = SkewPoly::scalar(ctx, LaurentSeries::monomial(Quadratic(1), 1, ctx->prec));
            return true;
        }
        if (name == "i") {
            out = constant(Quadratic::sqrt_of(-1));
            return true;
        }
        if (name == "q") {
            auto it = vars->find(name);
            out = constant(it == vars->end() ? ctx->q : it->second);
            return true;
        }
        auto it = vars->find(name);
        if (it == vars->end()) return false;
        out = constant(it->second);
        return true;
    }
    static bool single_term(const V& x) { return !x.is_zero() && x.top() == x.bottom(); }
    V invert(const V& x) const {
        if (!single_term(x)) throw ParseError("only single-term skew polynomials are invertible");
        long j = x.top();
        // (f xi^j)^-1 = sigma^-j(f^-1) xi^-j
        return SkewPoly::monomial(ctx, sigma(*ctx, x.lead().inverse(), -j), -j);
    }
    V divide(const V& x, const V& y) const {
        if (y.is_zero()) throw ParseError("division by zero in expression");
        return x * invert(y);
    }
    V power(const V& x, long e) const {
        V base = e < 0 ? invert(x) : x;
        long n = e < 0 ? -e : e;
        V r = SkewPoly::xi(ctx, 0);
        for (long k = 0; k < n; ++k) r = (r * base).truncated(ctx->prec);
        return r;
    }
    V literal(const std::string& text) const { return SkewPoly::scalar(ctx, parse_series_expr(text, ctx->prec, *vars)); }
};

}  // namespace

SkewPoly parse_skew(const std::string& text, const Context& ctx, const ScalarVars& vars) {
    try {
        return detail::ExprParser<SkewOps>(text, SkewOps{ctx, &vars}).parse();
    } catch (const MathError& e) {
        throw ParseError(e.what());
    } catch (const PrecisionError& e) {
        throw ParseError(e.what());
    }
}

}  // namespace qdiff
