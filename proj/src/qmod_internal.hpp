#pragma once

#include "qdiff/qmod.hpp"

namespace qdiff::detail {

// M(q^i z) entrywise.
SMatrix s_sigma(const AlgebraContext& ctx, const SMatrix& m, long i = 1);
SMatrix block_diag(const std::vector<SMatrix>& parts, long prec);
// Submatrix on the given index set (rows and columns).
SMatrix principal(const SMatrix& m, const std::vector<std::size_t>& idx);

}  // namespace qdiff::detail

namespace qdiff::detail {

// m with b = q^m a and |m| <= bound.
std::optional<long> orbit_exponent(const Quadratic& a, const Quadratic& b, const Quadratic& q, long bound);
std::vector<Eigenvalue> residue_eigenvalues(const KMatrix& a, QuadField field);
// Basis of ker (a - lambda)^mult.
std::vector<KVector> generalized_eigenspace(const KMatrix& a, const Quadratic& lambda, long mult);
// Jordan data of an invariant frame after resonance removal, merged into
// classes by q-orbit.
void accumulate_invariant(const LatticeFrame& frame, long bound, std::vector<IntegralInvariant::Class>& classes);

}  // namespace qdiff::detail
