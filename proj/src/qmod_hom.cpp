#include <random>

#include "qmod_internal.hpp"

namespace qdiff {

namespace {

struct HomSystem {
    std::size_t rows = 0;  // dim W
    std::size_t cols = 0;  // dim V
    long window = 0;
    std::vector<KVector> kernel;
};

void check_pair(const QDiffModule& v, const QDiffModule& w) {
    if (!v.ctx->same_algebra(*w.ctx)) throw MathError("hom between modules over different algebras");
    for (const auto* m : {&v, &w})
        for (std::size_t i = 0; i < m->dim(); ++i)
            for (std::size_t j = 0; j < m->dim(); ++j)
                if (m->phi(i, j).ram() != 1) throw MathError("hom oracle needs unramified matrices");
}

// Solutions of T Phi_V = Phi_W T(qz) with T supported in [-D, D'], D' > D,
// projected to the coefficients in [-D, D]. Exponent m is kept while every
// coefficient it touches is known and every contributing T coefficient lies
// inside the support, so truncations of true homomorphisms are solutions; the
// slack D' - D absorbs the unconstrained top coefficients.
HomSystem solve_hom(const QDiffModule& v, const QDiffModule& w, long window) {
    if (window < 0) throw MathError("window must be nonnegative");
    HomSystem hs{w.dim(), v.dim(), window, {}};
    const long lo = std::min(s_min_lo(v.phi), s_min_lo(w.phi));
    const long prec = std::min(s_min_prec(v.phi), s_min_prec(w.phi));
    const long m0 = -window + lo;
    const long m1 = prec - window - 1;
    const long top = std::min(3 * window + 4, m1 - lo);
    if (m1 < m0 || top < window) throw PrecisionError("hom window exceeds the working precision");
    const std::size_t width = static_cast<std::size_t>(window + top + 1);
    const std::size_t cells = hs.rows * hs.cols;
    const std::size_t unknowns = cells * width;
    // Coefficient order: exponent major, so the projection is a prefix.
    auto idx = [&](std::size_t a, std::size_t c, long e) {
        return static_cast<std::size_t>(e + window) * cells + a * hs.cols + c;
    };
    std::vector<KMatrix> cv, cw;
    for (long j = lo; j < prec; ++j) {
        cv.push_back(s_coeff(v.phi, j));
        cw.push_back(s_coeff(w.phi, j));
    }
    auto at = [&](const std::vector<KMatrix>& c, long j) -> const KMatrix* {
        if (j < lo || j >= prec) return nullptr;
        return &c[static_cast<std::size_t>(j - lo)];
    };
    std::vector<Quadratic> qpow;
    for (long e = -window; e <= top; ++e) qpow.push_back(v.ctx->q.pow(e));

    const long mt = std::min(m1, top + lo);
    std::size_t eqs = cells * static_cast<std::size_t>(mt - m0 + 1);
    KMatrix sys(eqs, unknowns, Quadratic(0));
    std::size_t row = 0;
    for (long m = m0; m <= mt; ++m)
        for (std::size_t a = 0; a < hs.rows; ++a)
            for (std::size_t b = 0; b < hs.cols; ++b, ++row)
                for (long e = -window; e <= top; ++e) {
                    const KMatrix* pv = at(cv, m - e);
                    const KMatrix* pw = at(cw, m - e);
                    const Quadratic& qe = qpow[static_cast<std::size_t>(e + window)];
                    if (pv)
                        for (std::size_t c = 0; c < hs.cols; ++c)
                            if (!(*pv)(c, b).is_zero()) sys(row, idx(a, c, e)) += (*pv)(c, b);
                    if (pw)
                        for (std::size_t c = 0; c < hs.rows; ++c)
                            if (!(*pw)(a, c).is_zero()) sys(row, idx(c, b, e)) -= (*pw)(a, c) * qe;
                }
    auto kernel = k_nullspace(std::move(sys));
    // Independent projections to [-D, D].
    const std::size_t keep = cells * static_cast<std::size_t>(2 * window + 1);
    for (auto& x : kernel) {
        x.resize(keep);
        std::vector<KVector> trial = hs.kernel;
        trial.push_back(x);
        if (k_rank(k_from_columns(trial, keep)) == trial.size()) hs.kernel.push_back(std::move(x));
    }
    return hs;
}

SMatrix assemble(const HomSystem& hs, const KVector& x) {
    const std::size_t width = static_cast<std::size_t>(2 * hs.window + 1);
    SMatrix t(hs.rows, hs.cols);
    for (std::size_t a = 0; a < hs.rows; ++a)
        for (std::size_t c = 0; c < hs.cols; ++c) {
            std::map<long, Quadratic> terms;
            for (std::size_t k = 0; k < width; ++k) {
                const auto& y = x[k * hs.rows * hs.cols + a * hs.cols + c];
                if (!y.is_zero()) terms[static_cast<long>(k) - hs.window] = y;
            }
            t(a, c) = LaurentSeries::from_terms(terms, hs.window + 1);
        }
    return t;
}

}  // namespace

IsoResult iso_oracle(const QDiffModule& v, const QDiffModule& w, long window, std::uint64_t seed) {
    check_pair(v, w);
    IsoResult out;
    if (v.dim() != w.dim()) {
        out.status = IsoResult::Status::not_isomorphic;
        out.stabilized = true;
        return out;
    }
    HomSystem hs = solve_hom(v, w, window);
    out.nullity = hs.kernel.size();
    auto try_witness = [&](const KVector& x) {
        SMatrix t = assemble(hs, x);
        if (s_det(t).is_zero()) return false;
        out.status = IsoResult::Status::isomorphic;
        out.witness = std::move(t);
        return true;
    };
    for (const auto& b : hs.kernel)
        if (try_witness(b)) return out;
    if (hs.kernel.size() > 1) {
        std::mt19937_64 rng(seed);
        for (int attempt = 0; attempt < 24; ++attempt) {
            KVector x(hs.kernel.front().size(), Quadratic(0));
            for (const auto& b : hs.kernel) {
                Quadratic c(std::uniform_int_distribution<long>(-3, 3)(rng));
                if (c.is_zero()) continue;
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (!b[i].is_zero()) x[i] += c * b[i];
            }
            if (try_witness(x)) return out;
        }
    }
    HomSystem wider = solve_hom(v, w, window + 2);
    out.stabilized = wider.kernel.size() == hs.kernel.size();
    out.status = out.stabilized ? IsoResult::Status::not_isomorphic : IsoResult::Status::inconclusive;
    return out;
}

HomDim hom_dim(const QDiffModule& v, const QDiffModule& w, long window) {
    check_pair(v, w);
    std::size_t a = solve_hom(v, w, window).kernel.size();
    std::size_t b = solve_hom(v, w, window + 2).kernel.size();
    return HomDim{a, a == b};
}

std::vector<SMatrix> hom_basis(const QDiffModule& v, const QDiffModule& w, long window) {
    check_pair(v, w);
    HomSystem hs = solve_hom(v, w, window);
    std::vector<SMatrix> out;
    for (const auto& b : hs.kernel) out.push_back(assemble(hs, b));
    return out;
}

}  // namespace qdiff
