#include <random>

#include "qmod_internal.hpp"

namespace qdiff {

using detail::s_sigma;

namespace {

SVector sigma_vec(const AlgebraContext& ctx, const SVector& v) {
    SVector out;
    for (const auto& f : v) out.push_back(sigma(ctx, f));
    return out;
}

SMatrix columns(const std::vector<SVector>& w, std::size_t upto) {
    SMatrix a(w.front().size(), upto);
    for (std::size_t j = 0; j < upto; ++j)
        for (std::size_t i = 0; i < w.front().size(); ++i) a(i, j) = w[j][i];
    return a;
}

SkewPoly annihilator(const Context& ctx, const SVector& c, std::size_t m) {
    SkewPoly x = SkewPoly::xi(ctx, static_cast<long>(m));
    for (std::size_t i = 0; i < m; ++i) x.set(static_cast<long>(i), -c[i]);
    return x;
}

// Krylov vectors v, xi v, ..., xi^count v.
std::vector<SVector> krylov(const QDiffModule& m, const SVector& v, std::size_t count) {
    std::vector<SVector> w{v};
    for (std::size_t i = 0; i < count; ++i) w.push_back(m.phi * sigma_vec(*m.ctx, w.back()));
    return w;
}

// The annihilator of v when v is cyclic, otherwise nothing.
std::optional<SkewPoly> cyclic_annihilator(const QDiffModule& m, const SVector& v) {
    std::size_t d = m.dim();
    auto w = krylov(m, v, d);
    if (s_echelon(columns(w, d)).rank < d) return std::nullopt;
    SVector c;
    if (!s_solve_full_column(columns(w, d), w[d], c))
        throw PrecisionError("Krylov relation not found in the window");
    if (c.front().is_zero()) throw PrecisionError("annihilator constant term vanishes in the window");
    return annihilator(m.ctx, c, d);
}

QDiffModule sub_module(const QDiffModule& m, const std::vector<std::size_t>& idx) {
    return QDiffModule{m.ctx, detail::principal(m.phi, idx)};
}

}  // namespace

SkewPoly minimal_skew_poly(const QDiffModule& m, const SVector& v) {
    std::size_t d = m.dim();
    if (v.size() != d) throw MathError("vector length does not match the module dimension");
    bool nonzero = false;
    for (const auto& f : v) nonzero = nonzero || !f.is_zero();
    if (!nonzero) throw MathError("minimal polynomial of the zero vector");
    std::vector<SVector> w{v};
    for (std::size_t k = 1; k <= d; ++k) {
        w.push_back(m.phi * sigma_vec(*m.ctx, w.back()));
        SVector c;
        if (s_solve_full_column(columns(w, k), w[k], c)) return annihilator(m.ctx, c, k);
    }
    throw PrecisionError("Krylov relation not found in the window");
}

std::vector<std::vector<std::size_t>> block_components(const SMatrix& phi) {
    std::size_t n = phi.rows();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !phi(i, j).is_zero()) parent[find(i)] = find(j);
    std::vector<std::vector<std::size_t>> out;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return out;
}

std::vector<SkewPoly> cyclic_decompose(const QDiffModule& m, std::uint64_t seed) {
    constexpr int retries = 32;
    constexpr long box = 3;
    std::mt19937_64 rng(seed);
    std::vector<SkewPoly> out;
    for (const auto& idx : block_components(m.phi)) {
        QDiffModule b = sub_module(m, idx);
        std::size_t d = b.dim();
        long prec = b.ctx->prec;
        if (d == 1) {
            SkewPoly x = SkewPoly::xi(b.ctx) - SkewPoly::scalar(b.ctx, b.phi(0, 0));
            out.push_back(x);
            continue;
        }
        // e_0 first: on a companion block its Krylov basis is the standard one.
        SVector e0(d, LaurentSeries::zero(prec));
        e0[0] = LaurentSeries::constant(Quadratic(1), prec);
        std::optional<SkewPoly> found = cyclic_annihilator(b, e0);
        // Random polynomial vectors with coefficients in [-box, box].
        for (int attempt = 0; attempt < retries && !found; ++attempt) {
            SVector v;
            for (std::size_t i = 0; i < d; ++i) {
                std::map<long, Quadratic> terms;
                for (long e = 0; e <= static_cast<long>(d); ++e) {
                    long c = std::uniform_int_distribution<long>(-box, box)(rng);
                    if (c != 0) terms[e] = Quadratic(c);
                }
                v.push_back(LaurentSeries::from_terms(terms, prec));
            }
            found = cyclic_annihilator(b, v);
        }
        // Deterministic fallback: sums of standard basis vectors, then
        // vectors of monomials z^e_i.
        for (std::size_t mask = 1; mask < (std::size_t{1} << d) && !found; ++mask) {
            SVector v(d, LaurentSeries::zero(prec));
            for (std::size_t i = 0; i < d; ++i)
                if (mask >> i & 1) v[i] = LaurentSeries::constant(Quadratic(1), prec);
            found = cyclic_annihilator(b, v);
        }
        std::size_t combos = 1;
        for (std::size_t i = 0; i < d && combos < 4096; ++i) combos *= d + 1;
        for (std::size_t code = 0; code < combos && !found; ++code) {
            SVector v;
            std::size_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                v.push_back(LaurentSeries::monomial(Quadratic(1), static_cast<long>(c % (d + 1)), prec));
                c /= d + 1;
            }
            found = cyclic_annihilator(b, v);
        }
        if (!found)
            throw ResourceError("no cyclic vector found after " + std::to_string(retries) +
                                " random trials and the fallback (seed " + std::to_string(seed) + ")");
        out.push_back(*found);
    }
    return out;
}

std::vector<SkewPoly> slope_factors(const SkewPoly& x0) {
    SkewPoly x = normalize_cyclic(x0);
    auto np = sp_newton_polygon(x);
    if (np.size() <= 1) return {x};
    // Right factor for the leftmost segment (largest slope), degrees 0..r.
    long r = np.front().length;
    long prec = x.prec();
    SkewPoly z(x.ctx());
    LaurentSeries inv = x.coeff(r).inverse();
    for (long i = 0; i <= r; ++i) z.set(i, inv * x.coeff(i));
    SkewPoly y(x.ctx());
    // Fixed point Z <- Z + y0^-1 R with X = Y Z + R; y0 dominates Y in the
    // weight of Z's slope, so R gains valuation every round.
    const long cap = 64 * (prec + 8);
    long rounds = 0;
    for (;; ++rounds) {
        if (rounds > cap) throw ResourceError("slope factorization did not converge");
        auto div = sp_divide(x, z, Side::right);
        y = div.quotient;
        if (div.remainder.is_zero()) break;
        LaurentSeries y0inv = y.coeff(0).inverse();
        z += div.remainder.left_mul(y0inv);
        z = z.truncated(prec);
        z.set(r, LaurentSeries::constant(Quadratic(1), prec));
    }
    if (z.prec() < 8) throw PrecisionError("slope factorization lost the window");
    std::vector<SkewPoly> out = slope_factors(y);
    out.push_back(z);
    return out;
}

}  // namespace qdiff
