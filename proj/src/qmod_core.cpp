#include <algorithm>
#include <numeric>

#include "qmod_internal.hpp"

namespace qdiff {

namespace detail {

SMatrix s_sigma(const AlgebraContext& ctx, const SMatrix& m, long i) {
    SMatrix out = m;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = sigma(ctx, m(r, c), i);
    return out;
}

SMatrix block_diag(const std::vector<SMatrix>& parts, long prec) {
    std::size_t n = 0;
    for (const auto& p : parts) n += p.rows();
    SMatrix out = s_zero(n, n, prec);
    std::size_t at = 0;
    for (const auto& p : parts) {
        out.set_block(at, at, p);
        at += p.rows();
    }
    return out;
}

SMatrix principal(const SMatrix& m, const std::vector<std::size_t>& idx) {
    SMatrix out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
}

}  // namespace detail

using detail::s_sigma;

QDiffModule make_module(Context ctx, SMatrix phi) {
    if (phi.rows() == 0 || phi.rows() != phi.cols()) throw MathError("module matrix must be square and nonempty");
    if (s_det(phi).is_zero()) throw PrecisionError("det(Phi) is indistinguishable from zero; xi is not invertible");
    return QDiffModule{std::move(ctx), std::move(phi)};
}

QDiffModule direct_sum(const std::vector<QDiffModule>& parts) {
    if (parts.empty()) throw MathError("direct sum of no modules");
    std::vector<SMatrix> blocks;
    long prec = parts.front().ctx->prec;
    for (const auto& p : parts) {
        if (!p.ctx->same_algebra(*parts.front().ctx)) throw MathError("direct sum over different algebras");
        blocks.push_back(p.phi);
    }
    return QDiffModule{parts.front().ctx, detail::block_diag(blocks, prec)};
}

QDiffModule gauge(const QDiffModule& m, const SMatrix& t) {
    return QDiffModule{m.ctx, s_inverse(t) * m.phi * s_sigma(*m.ctx, t)};
}

void validate(const IndecompLabel& label) {
    if (label.n <= 0) throw MathError("label n must be positive");
    if (label.l <= 0) throw MathError("label l must be positive");
    if (label.a.is_zero()) throw MathError("label a must be nonzero");
    if (label.orbit_bound <= 0) throw MathError("orbit bound must be positive");
    if (label.n > 1 && (label.k == 0 || std::gcd(label.n, label.k) != 1))
        throw MathError("label needs gcd(n, k) = 1 and k != 0 when n > 1");
}

std::string to_string(const IndecompLabel& label) {
    return std::to_string(label.n) + " " + std::to_string(label.k) + " " + std::to_string(label.l) + " " + to_string(label.a);
}

bool orbit_eq(const Quadratic& a, const Quadratic& b, const Quadratic& q, long bound) {
    Quadratic r = b / a;
    if (r.is_one()) return true;
    Quadratic p(1);
    for (long m = 1; m <= bound; ++m) {
        p *= q;
        if (r == p || (r * p).is_one()) return true;
    }
    return false;
}

Quadratic orbit_canonical(const Quadratic& a, const Quadratic& q, long bound) {
    Quadratic best = a;
    std::size_t best_h = a.height();
    Quadratic up = a, down = a;
    Quadratic qi = q.inverse();
    auto consider = [&](const Quadratic& c) {
        std::size_t h = c.height();
        if (h < best_h || (h == best_h && c < best)) {
            best = c;
            best_h = h;
        }
    };
    for (long m = 1; m <= bound; ++m) {
        up *= q;
        down *= qi;
        consider(up);
        consider(down);
    }
    return best;
}

bool label_eq(const IndecompLabel& x, const IndecompLabel& y, const Quadratic& q) {
    return x.n == y.n && x.k == y.k && x.l == y.l && orbit_eq(x.a, y.a, q, std::min(x.orbit_bound, y.orbit_bound));
}

bool label_multiset_eq(std::vector<IndecompLabel> x, std::vector<IndecompLabel> y, const Quadratic& q) {
    if (x.size() != y.size()) return false;
    std::vector<bool> used(y.size(), false);
    for (const auto& a : x) {
        bool hit = false;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (!used[j] && label_eq(a, y[j], q)) {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

void sort_labels(std::vector<IndecompLabel>& labels) {
    std::stable_sort(labels.begin(), labels.end(), [](const IndecompLabel& x, const IndecompLabel& y) {
        if (x.n != y.n) return x.n < y.n;
        if (x.k != y.k) return x.k < y.k;
        if (x.l != y.l) return x.l < y.l;
        return x.a < y.a;
    });
}

SkewPoly normalize_cyclic(const SkewPoly& x) {
    if (x.is_zero() || sp_span(x) == 0) throw MathError("cyclic module needs a skew polynomial of positive span");
    // A/(u X v) = A/(X) for units u, v: shift to degrees 0..span, then monic.
    SkewPoly shifted(x.ctx());
    long b = x.bottom();
    for (const auto& [d, c] : x.coeffs()) shifted.set(d - b, c);
    const LaurentSeries& lead = shifted.lead();
    if (lead.lo() == 0 && lead.hi() == 1 && lead.raw(0).is_one()) return shifted;
    return sp_monic(shifted);
}

QDiffModule from_cyclic(const SkewPoly& x0) {
    SkewPoly x = normalize_cyclic(x0);
    long d = x.top();
    long prec = x.prec();
    SMatrix phi = s_zero(static_cast<std::size_t>(d), static_cast<std::size_t>(d), prec);
    for (long i = 0; i + 1 < d; ++i)
        phi(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(i)) = LaurentSeries::constant(Quadratic(1), prec);
    for (long i = 0; i < d; ++i) phi(static_cast<std::size_t>(i), static_cast<std::size_t>(d - 1)) = -x.coeff(i);
    return make_module(x.ctx(), std::move(phi));
}

SkewPoly label_poly(const Context& ctx, const IndecompLabel& label) {
    validate(label);
    // z^-k xi^n - a; its powers stay indecomposable, unlike those of xi^n - a z^k.
    // Guard digits cover the shift in normalize_cyclic, so the result is
    // known to the full working precision.
    long guard = ctx->prec + 2 * label.l * std::abs(label.k) + 2;
    SkewPoly base(ctx);
    base.set(label.n, LaurentSeries::monomial(Quadratic(1), -label.k, guard));
    base.set(0, LaurentSeries::constant(-label.a, guard));
    SkewPoly out = base;
    for (long i = 1; i < label.l; ++i) out = out * base;
    return normalize_cyclic(out).truncated(ctx->prec);
}

QDiffModule build(const Context& ctx, const std::vector<IndecompLabel>& labels) {
    std::vector<QDiffModule> parts;
    for (const auto& l : labels) parts.push_back(from_cyclic(label_poly(ctx, l)));
    return direct_sum(parts);
}

QDiffModule twist(const QDiffModule& v, long k) {
    return QDiffModule{v.ctx, s_shifted(v.phi, k)};
}

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void check_root(const Context& s, const Context& q, long n) {
    if (!(s->q.pow(n) == q->q)) throw MathError("root relation fails: s^" + std::to_string(n) + " != q");
    if (!(s->field == q->field)) throw MathError("functor between different coefficient fields");
}

}  // namespace

QDiffModule pushforward_f(const QDiffModule& v, long n, const Context& target) {
    if (n <= 0) throw MathError("functor degree must be positive");
    if (n == 1) return v;
    Context q = target ? target : power_context(v.ctx, n);
    check_root(v.ctx, q, n);
    std::size_t d = v.dim();
    std::size_t nd = d * static_cast<std::size_t>(n);
    Quadratic s = v.ctx->q;
    SMatrix out(nd, nd);
    // Column (i, j) is xi (w^i e_j) = s^i w^i Phi(w) e_j, regrouped by w^p z^u.
    for (long i = 0; i < n; ++i) {
        Quadratic si = s.pow(i);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t r = 0; r < d; ++r) {
                const LaurentSeries& f = v.phi(r, j);
                if (f.ram() != 1) throw MathError("pushforward of a ramified matrix");
                for (long p = 0; p < n; ++p) {
                    // Coefficient at z^u is f_{nu + p - i}; known while nu + p - i < prec.
                    long uprec = floor_div(f.prec() - p + i - 1, n) + 1;
                    std::map<long, Quadratic> terms;
                    for (long t = f.lo(); t < f.hi(); ++t) {
                        if (f.raw(t).is_zero()) continue;
                        long e = t + i - p;
                        if (e % n != 0) continue;
                        terms.emplace(e / n, f.raw(t) * si);
                    }
                    out(static_cast<std::size_t>(p) * d + r, static_cast<std::size_t>(i) * d + j) =
                        LaurentSeries::from_terms(terms, uprec);
                }
            }
        }
    }
    return QDiffModule{q, std::move(out)};
}

QDiffModule pullback_f(const QDiffModule& v, long n, const Context& target) {
    if (n <= 0) throw MathError("functor degree must be positive");
    if (!target) throw MathError("pullback_f needs the context of the root s");
    check_root(target, v.ctx, n);
    SMatrix out = v.phi;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = ls_substitute_power(v.phi(i, j), static_cast<int>(n));
    return QDiffModule{target, std::move(out)};
}

QDiffModule pullback_g(const QDiffModule& v, long n, const Context& target) {
    if (n <= 0) throw MathError("functor degree must be positive");
    if (n == 1) return v;
    Context q = target ? target : power_context(v.ctx, n);
    check_root(v.ctx, q, n);
    SMatrix acc = v.phi;
    for (long i = 1; i < n; ++i) acc = acc * s_sigma(*v.ctx, v.phi, i);
    return QDiffModule{q, std::move(acc)};
}

QDiffModule pushforward_g(const QDiffModule& v, long n, const Context& target) {
    if (n <= 0) throw MathError("functor degree must be positive");
    if (!target) throw MathError("pushforward_g needs the context of the root s");
    check_root(target, v.ctx, n);
    if (n == 1) return QDiffModule{target, v.phi};
    std::size_t d = v.dim();
    std::size_t nd = d * static_cast<std::size_t>(n);
    long prec = s_min_prec(v.phi);
    SMatrix out = s_zero(nd, nd, prec);
    // Basis xi^i (x) e_j: xi moves block i to i+1 and xi^n acts by Phi.
    for (long i = 0; i + 1 < n; ++i)
        out.set_block(static_cast<std::size_t>(i + 1) * d, static_cast<std::size_t>(i) * d, s_identity(d, prec));
    out.set_block(0, static_cast<std::size_t>(n - 1) * d, v.phi);
    return QDiffModule{target, std::move(out)};
}

}  // namespace qdiff
