#pragma once

// Finite-dimensional q-difference modules: a series matrix Phi acting by
// xi v(z) = Phi(z) v(qz). Normal forms, functors, homomorphism spaces.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdiff/linalg.hpp"
#include "qdiff/skew.hpp"

namespace qdiff {

struct QDiffModule {
    Context ctx;
    SMatrix phi;

    std::size_t dim() const { return phi.rows(); }
};

// Checks shape and that det(phi) is nonzero in its window.
QDiffModule make_module(Context ctx, SMatrix phi);
QDiffModule direct_sum(const std::vector<QDiffModule>& parts);
// Base change v = T w: Phi' = T(z)^-1 Phi(z) T(qz).
QDiffModule gauge(const QDiffModule& m, const SMatrix& t);

// The normal-form tag for A/(xi^n - a z^k)^l; a matters modulo q^Z.
struct IndecompLabel {
    long n = 1;
    long k = 0;
    long l = 1;
    Quadratic a{1};
    long orbit_bound = 24;
};

void validate(const IndecompLabel& label);
std::string to_string(const IndecompLabel& label);

// a' = q^m a for some |m| <= bound.
bool orbit_eq(const Quadratic& a, const Quadratic& b, const Quadratic& q, long bound);
// Smallest-height element of {q^m a : |m| <= bound}.
Quadratic orbit_canonical(const Quadratic& a, const Quadratic& q, long bound);
bool label_eq(const IndecompLabel& x, const IndecompLabel& y, const Quadratic& q);
// Multiset equality under orbit-normalized comparison.
bool label_multiset_eq(std::vector<IndecompLabel> x, std::vector<IndecompLabel> y, const Quadratic& q);
// Deterministic order: (n, k, l, a).
void sort_labels(std::vector<IndecompLabel>& labels);

// Companion module of A/(X), basis 1, xi, ..., xi^(span-1).
QDiffModule from_cyclic(const SkewPoly& x);
// Unit normalization: monic, degrees 0..span.
SkewPoly normalize_cyclic(const SkewPoly& x);
// (z^-k xi^n - a)^l expanded and unit-normalized; for l = 1 this is
// z^-k (xi^n - a z^k).
SkewPoly label_poly(const Context& ctx, const IndecompLabel& label);
QDiffModule build(const Context& ctx, const std::vector<IndecompLabel>& labels);

// Least monic X with X v = 0, by semilinear Krylov iteration.
SkewPoly minimal_skew_poly(const QDiffModule& m, const SVector& v);
// Annihilators X_i with the direct sum of A/(X_i) isomorphic to m.
std::vector<SkewPoly> cyclic_decompose(const QDiffModule& m, std::uint64_t seed = 1);
// Connected components of the nonzero pattern of phi.
std::vector<std::vector<std::size_t>> block_components(const SMatrix& phi);

// Factors a monic X of nonzero constant coefficient into pure-slope pieces
// whose cyclic modules sum to A/(X).
std::vector<SkewPoly> slope_factors(const SkewPoly& x);

struct LatticeFrame {
    QDiffModule base;
    SMatrix t;    // lattice L = T R^dim
    SMatrix phi;  // T^-1 Phi T(qz)
    bool invariant() const { return s_in_R(phi); }
};

LatticeFrame identity_frame(const QDiffModule& m);
// Refines the frame by a further base change.
LatticeFrame refine(const LatticeFrame& f, const SMatrix& t);

struct Resonance {
    Quadratic alpha;
    Quadratic beta;  // q^m alpha
    long m = 0;
};

// Resonant residue eigenvalue pairs with 1 <= m <= bound.
std::vector<Resonance> find_resonances(const LatticeFrame& f, long bound);
// One rescaling step per resonant orbit, repeated until resonance-free.
LatticeFrame improve_lattice(const LatticeFrame& f, long bound);
// A single rescaling: the highest eigenvalue of each resonant orbit drops by q.
LatticeFrame improve_lattice_step(const LatticeFrame& f, long bound);

// Given an invariant frame whose residue is block diagonal with blocks of
// sizes (split, dim - split), returns a frame in which phi itself is block
// diagonal. MathError "resonance detected" when the hypothesis fails.
LatticeFrame lift_splitting(const LatticeFrame& f, std::size_t split, long bound);
// Constant base change bringing the residue of f into block form, the
// generalized eigenspace of `first` (a set of eigenvalues) first.
LatticeFrame split_residue(const LatticeFrame& f, const std::vector<Quadratic>& first, std::size_t& split);

struct IntegralInvariant {
    struct Class {
        Quadratic a;
        long orbit_bound = 24;
        std::vector<long> blocks;
    };
    std::vector<Class> classes;
};

IntegralInvariant integral_invariant(const QDiffModule& m, long bound = 24, std::uint64_t seed = 1);

struct ClassifyOptions {
    long orbit_bound = 24;
    std::uint64_t seed = 1;
};

std::vector<IndecompLabel> classify(const QDiffModule& m, const ClassifyOptions& opt = {});
// Runs make(prec) and classify; on PrecisionError once more at 2*prec.
std::vector<IndecompLabel> classify_with_retry(const std::function<QDiffModule(long)>& make, long prec,
                                               const ClassifyOptions& opt = {});

struct IsoResult {
    enum class Status { isomorphic, not_isomorphic, inconclusive } status = Status::inconclusive;
    std::optional<SMatrix> witness;
    std::size_t nullity = 0;
    bool stabilized = false;
};

// Solves T(z) Phi_V(z) = Phi_W(z) T(qz), T supported in [-D, D].
IsoResult iso_oracle(const QDiffModule& v, const QDiffModule& w, long window, std::uint64_t seed = 1);

struct HomDim {
    std::size_t dimension = 0;
    bool stabilized = false;
};

HomDim hom_dim(const QDiffModule& v, const QDiffModule& w, long window);
// Basis of the homomorphism space with support in [-D, D].
std::vector<SMatrix> hom_basis(const QDiffModule& v, const QDiffModule& w, long window);

// Functors along f(z) -> f(z^n), xi -> xi (q = s^n).
// pushforward_f: module over s to module over q; target checked when given.
QDiffModule pushforward_f(const QDiffModule& v, long n, const Context& target = nullptr);
// pullback_f: module over q to module over s.
QDiffModule pullback_f(const QDiffModule& v, long n, const Context& target);
// Functors along xi -> xi^n (q = s^n).
// pullback_g: module over s to module over q, action the n-th iterate.
QDiffModule pullback_g(const QDiffModule& v, long n, const Context& target = nullptr);
// pushforward_g: module over q to module over s, induction.
QDiffModule pushforward_g(const QDiffModule& v, long n, const Context& target);
// Rank-one twist: Phi -> z^k Phi.
QDiffModule twist(const QDiffModule& v, long k);

// Text: "dim N" then N rows of N series separated by '|'.
std::string write_module(const QDiffModule& m);
QDiffModule read_module(const std::string& text, const Context& ctx, const ScalarVars& vars = {});
// Lines "n k l a [M]".
std::string write_labels(const std::vector<IndecompLabel>& labels);
std::vector<IndecompLabel> read_labels(const std::string& text, const ScalarVars& vars = {}, long default_bound = 24);

}  // namespace qdiff
