#include <algorithm>

#include "qmod_internal.hpp"

namespace qdiff {

namespace {

struct PureFactor {
    long n;
    long k;
    SkewPoly poly;
};

// Classes of q'-eigenvalues carried through for one slope k/n.
struct SlopeGroup {
    long n;
    long k;
    std::vector<IntegralInvariant::Class> classes;
};

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Invariant frame for a pure slope k/n factor Z: the n-th iterate in the
// basis z^-floor(ik/n) xi^i, twisted by z^-k. Weighted valuations put every
// entry in R and the determinant has valuation 0.
LatticeFrame balanced_frame(const PureFactor& p) {
    QDiffModule v = from_cyclic(p.poly);
    QDiffModule w = pullback_g(v, p.n);
    long prec = s_min_prec(w.phi);
    SMatrix d = s_identity(w.dim(), prec);
    for (std::size_t i = 0; i < w.dim(); ++i)
        d(i, i) = LaurentSeries::monomial(Quadratic(1), -floor_div(static_cast<long>(i) * p.k, p.n), prec);
    QDiffModule u = twist(gauge(w, d), -p.k);
    if (!s_in_R(u.phi) || k_det(s_residue(u.phi)).is_zero())
        throw PrecisionError("balanced lattice is not invariant in the window");
    return identity_frame(u);
}

}  // namespace

std::vector<IndecompLabel> classify(const QDiffModule& m, const ClassifyOptions& opt) {
    const long bound = opt.orbit_bound;
    std::vector<PureFactor> pure;
    for (const auto& x : cyclic_decompose(m, opt.seed)) {
        for (const auto& z : slope_factors(x)) {
            auto np = sp_newton_polygon(z);
            if (np.size() != 1) throw MathError("slope factor is not pure");
            Rational mu = np.front().slope;
            long n = mu.get_den().get_si();
            long k = mu.get_num().get_si();
            if (np.front().length % n != 0) throw MathError("slope segment length is not a multiple of the denominator");
            pure.push_back({n, k, z});
        }
    }
    std::vector<SlopeGroup> groups;
    for (const auto& p : pure) {
        LatticeFrame frame = balanced_frame(p);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const SlopeGroup& g) { return g.n == p.n && g.k == p.k; });
        if (it == groups.end()) {
            groups.push_back({p.n, p.k, {}});
            it = groups.end() - 1;
        }
        detail::accumulate_invariant(frame, bound, it->classes);
    }
    const Quadratic& q = m.ctx->q;
    std::vector<IndecompLabel> out;
    for (auto& g : groups) {
        // The q'-classes of one slope fall into q-orbits of exactly n classes.
        long wide = bound * g.n + g.n * std::abs(g.k);
        std::vector<bool> used(g.classes.size(), false);
        for (std::size_t i = 0; i < g.classes.size(); ++i) {
            if (used[i]) continue;
            std::vector<std::size_t> orbit{i};
            used[i] = true;
            for (std::size_t j = i + 1; j < g.classes.size(); ++j) {
                if (!used[j] && orbit_eq(g.classes[i].a, g.classes[j].a, q, wide)) {
                    orbit.push_back(j);
                    used[j] = true;
                }
            }
            if (static_cast<long>(orbit.size()) != g.n) throw MathError("undecidable orbit identification");
            for (auto j : orbit)
                if (g.classes[j].blocks != g.classes[i].blocks) throw MathError("undecidable orbit identification");
            Quadratic a = orbit_canonical(g.classes[i].a, q, wide);
            for (long l : g.classes[i].blocks) out.push_back({g.n, g.k, l, a, bound});
        }
    }
    sort_labels(out);
    return out;
}

std::vector<IndecompLabel> classify_with_retry(const std::function<QDiffModule(long)>& make, long prec,
                                               const ClassifyOptions& opt) {
    try {
        return classify(make(prec), opt);
    } catch (const PrecisionError&) {
        return classify(make(2 * prec), opt);
    }
}

}  // namespace qdiff
