#include <algorithm>

#include "qmod_internal.hpp"

namespace qdiff {

using detail::s_sigma;

namespace detail {

std::optional<long> orbit_exponent(const Quadratic& a, const Quadratic& b, const Quadratic& q, long bound) {
    Quadratic r = b / a;
    if (r.is_one()) return 0;
    Quadratic p(1);
    for (long m = 1; m <= bound; ++m) {
        p *= q;
        if (r == p) return m;
        if ((r * p).is_one()) return -m;
    }
    return std::nullopt;
}

std::vector<Eigenvalue> residue_eigenvalues(const KMatrix& a, QuadField field) {
    return kp_roots(k_charpoly(a), field, "residue characteristic polynomial");
}

std::vector<KVector> generalized_eigenspace(const KMatrix& a, const Quadratic& lambda, long mult) {
    return k_nullspace(k_pow(a - k_scaled(k_identity(a.rows()), lambda), mult));
}

}  // namespace detail

namespace {

void require_invariant(const LatticeFrame& f) {
    if (!f.invariant()) throw MathError("lattice is not invariant: Phi has a pole");
    if (k_det(s_residue(f.phi)).is_zero()) throw MathError("residue is singular: Phi is not in GL(R)");
}

// Constant change of basis: generalized eigenspaces of `first`, then the rest.
KMatrix eigen_basis(const KMatrix& a, const std::vector<Eigenvalue>& ev, const std::vector<Quadratic>& first,
                    std::size_t& split) {
    auto in_first = [&](const Quadratic& x) { return std::find(first.begin(), first.end(), x) != first.end(); };
    std::vector<KVector> lead, rest;
    for (const auto& e : ev) {
        auto& dst = in_first(e.value) ? lead : rest;
        for (auto& v : detail::generalized_eigenspace(a, e.value, e.multiplicity)) dst.push_back(std::move(v));
    }
    split = lead.size();
    lead.insert(lead.end(), rest.begin(), rest.end());
    return k_from_columns(lead, a.rows());
}

// Solves a1 u c - u a2 = r for u.
KMatrix sylvester(const KMatrix& a1, const KMatrix& a2, const Quadratic& c, const KMatrix& r) {
    std::size_t s = a1.rows(), t = a2.rows();
    std::size_t n = s * t;
    KMatrix sys(n, n, Quadratic(0));
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < t; ++b) {
            std::size_t row = a * t + b;
            for (std::size_t e = 0; e < s; ++e) sys(row, e * t + b) += a1(a, e) * c;
            for (std::size_t e = 0; e < t; ++e) sys(row, a * t + e) -= a2(e, b);
        }
    if (k_det(sys).is_zero()) throw MathError("resonance detected");
    KVector rhs(n);
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < t; ++b) rhs[a * t + b] = r(a, b);
    KVector x = k_inverse(sys) * rhs;
    KMatrix u(s, t, Quadratic(0));
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < t; ++b) u(a, b) = x[a * t + b];
    return u;
}

}  // namespace

LatticeFrame identity_frame(const QDiffModule& m) {
    return LatticeFrame{m, s_identity(m.dim(), m.ctx->prec), m.phi};
}

LatticeFrame refine(const LatticeFrame& f, const SMatrix& t) {
    const auto& ctx = *f.base.ctx;
    return LatticeFrame{f.base, f.t * t, s_inverse(t) * f.phi * s_sigma(ctx, t)};
}

std::vector<Resonance> find_resonances(const LatticeFrame& f, long bound) {
    require_invariant(f);
    auto ev = detail::residue_eigenvalues(s_residue(f.phi), f.base.ctx->field);
    const Quadratic& q = f.base.ctx->q;
    std::vector<Resonance> out;
    for (const auto& x : ev)
        for (const auto& y : ev) {
            auto m = detail::orbit_exponent(x.value, y.value, q, bound);
            if (m && *m >= 1) out.push_back({x.value, y.value, *m});
        }
    return out;
}

LatticeFrame improve_lattice_step(const LatticeFrame& f, long bound) {
    require_invariant(f);
    KMatrix a = s_residue(f.phi);
    auto ev = detail::residue_eigenvalues(a, f.base.ctx->field);
    const Quadratic& q = f.base.ctx->q;
    // Orbits of eigenvalues with exponents relative to their first member.
    std::vector<std::vector<std::pair<Quadratic, long>>> orbits;
    for (const auto& e : ev) {
        bool placed = false;
        for (auto& o : orbits) {
            if (auto m = detail::orbit_exponent(o.front().first, e.value, q, bound)) {
                o.emplace_back(e.value, *m);
                placed = true;
                break;
            }
        }
        if (!placed) orbits.push_back({{e.value, 0}});
    }
    std::vector<Quadratic> top;
    for (const auto& o : orbits) {
        if (o.size() < 2) continue;
        long hi = o.front().second;
        for (const auto& [v, m] : o) hi = std::max(hi, m);
        for (const auto& [v, m] : o)
            if (m == hi) top.push_back(v);
    }
    if (top.empty()) return f;
    // Basis with the top eigenspaces last, then scale those by z^-1.
    std::vector<Quadratic> rest;
    for (const auto& e : ev)
        if (std::find(top.begin(), top.end(), e.value) == top.end()) rest.push_back(e.value);
    std::size_t split = 0;
    KMatrix p = eigen_basis(a, ev, rest, split);
    long prec = s_min_prec(f.phi);
    SMatrix t = s_constant(p, prec);
    SMatrix scale = s_identity(a.rows(), prec);
    for (std::size_t i = split; i < a.rows(); ++i) scale(i, i) = LaurentSeries::monomial(Quadratic(1), -1, prec);
    return refine(f, t * scale);
}

LatticeFrame improve_lattice(const LatticeFrame& f, long bound) {
    LatticeFrame cur = f;
    const long cap = static_cast<long>(f.base.dim()) * bound + 1;
    for (long step = 0; step <= cap; ++step) {
        if (find_resonances(cur, bound).empty()) return cur;
        cur = improve_lattice_step(cur, bound);
        if (s_min_prec(cur.phi) <= 1) throw PrecisionError("lattice improvement exhausted the window");
    }
    throw ResourceError("lattice improvement did not terminate within dim * bound steps");
}

LatticeFrame split_residue(const LatticeFrame& f, const std::vector<Quadratic>& first, std::size_t& split) {
    require_invariant(f);
    KMatrix a = s_residue(f.phi);
    auto ev = detail::residue_eigenvalues(a, f.base.ctx->field);
    KMatrix p = eigen_basis(a, ev, first, split);
    return refine(f, s_constant(p, s_min_prec(f.phi)));
}

LatticeFrame lift_splitting(const LatticeFrame& f, std::size_t split, long bound) {
    require_invariant(f);
    std::size_t d = f.base.dim();
    if (split == 0 || split >= d) return f;
    std::size_t s = split, r = d - split;
    KMatrix a = s_residue(f.phi);
    KMatrix a1 = a.block(0, 0, s, s), a2 = a.block(s, s, r, r);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (!a(i, s + j).is_zero() || !a(s + j, i).is_zero())
                throw MathError("residue is not block diagonal at the split");
    const Quadratic& q = f.base.ctx->q;
    long prec = s_min_prec(f.phi);
    long top = std::max(prec, bound);
    std::vector<KMatrix> phi(static_cast<std::size_t>(top)), t(static_cast<std::size_t>(top)),
        psi(static_cast<std::size_t>(top));
    for (long j = 0; j < prec; ++j) phi[static_cast<std::size_t>(j)] = s_coeff(f.phi, j);
    t[0] = k_identity(d);
    psi[0] = a;
    KMatrix zero(d, d, Quadratic(0));
    // Degree j: a T_j q^j - T_j a = Psi_j - N_j.
    for (long j = 1; j < prec; ++j) {
        auto J = static_cast<std::size_t>(j);
        KMatrix nj = phi[J];
        for (long i = 1; i < j; ++i) {
            auto I = static_cast<std::size_t>(i), R = static_cast<std::size_t>(j - i);
            nj = nj + k_scaled(phi[I] * t[R], q.pow(j - i)) - t[R] * psi[I];
        }
        Quadratic c = q.pow(j);
        KMatrix u = sylvester(a1, a2, c, k_scaled(nj.block(0, s, s, r), Quadratic(-1)));
        KMatrix v = sylvester(a2, a1, c, k_scaled(nj.block(s, 0, r, s), Quadratic(-1)));
        KMatrix tj = zero, pj = zero;
        tj.set_block(0, s, u);
        tj.set_block(s, 0, v);
        pj.set_block(0, 0, nj.block(0, 0, s, s));
        pj.set_block(s, s, nj.block(s, s, r, r));
        t[J] = tj;
        psi[J] = pj;
    }
    SMatrix tt = s_zero(d, d, prec);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            std::map<long, Quadratic> terms;
            for (long j = 0; j < prec; ++j) {
                const auto& x = t[static_cast<std::size_t>(j)](i, k);
                if (!x.is_zero()) terms[j] = x;
            }
            tt(i, k) = LaurentSeries::from_terms(terms, prec);
        }
    return refine(f, tt);
}

namespace detail {

void accumulate_invariant(const LatticeFrame& frame, long bound, std::vector<IntegralInvariant::Class>& classes) {
    const Quadratic& q = frame.base.ctx->q;
    LatticeFrame f = improve_lattice(frame, bound);
    // Without resonance Phi is gauge equivalent to its residue.
    KMatrix a = s_residue(f.phi);
    for (const auto& e : residue_eigenvalues(a, frame.base.ctx->field)) {
        auto blocks = k_jordan_blocks(a, e.value, e.multiplicity);
        bool merged = false;
        for (auto& c : classes) {
            if (orbit_eq(c.a, e.value, q, bound)) {
                c.blocks.insert(c.blocks.end(), blocks.begin(), blocks.end());
                merged = true;
                break;
            }
        }
        if (!merged) classes.push_back({orbit_canonical(e.value, q, bound), bound, blocks});
    }
    for (auto& c : classes) std::sort(c.blocks.rbegin(), c.blocks.rend());
}

}  // namespace detail

IntegralInvariant integral_invariant(const QDiffModule& m, long bound, std::uint64_t seed) {
    IntegralInvariant out;
    for (const auto& x0 : cyclic_decompose(m, seed)) {
        SkewPoly x = normalize_cyclic(x0);
        auto np = sp_newton_polygon(x);
        if (np.size() != 1 || sgn(np.front().slope) != 0)
            throw MathError("integral invariant needs a module pure of slope 0");
        detail::accumulate_invariant(identity_frame(from_cyclic(x)), bound, out.classes);
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const IntegralInvariant::Class& x, const IntegralInvariant::Class& y) { return x.a < y.a; });
    return out;
}

}  // namespace qdiff
