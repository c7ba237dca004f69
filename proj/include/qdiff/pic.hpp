#pragma once

// Rank-one objects: the additive cocycle equation a(qz) - a(z) = g, units in
// factored form c z^k exp(g), their Picard classes (degree, point mod q^Z),
// and the small-divisor table |q^n - 1|.

#include <optional>
#include <string>
#include <vector>

#include "qdiff/laurent.hpp"
#include "qdiff/scalars.hpp"
#include "qdiff/skew.hpp"

namespace qdiff {

constexpr std::size_t default_height_cap = std::size_t{1} << 20;
constexpr long default_pic_orbit_bound = 24;

// c z^k exp(g) with g_0 = 0.
struct UnitCocycle {
    Quadratic c{1};
    long k = 0;
    LaurentSeries g;
};

UnitCocycle make_unit(const Quadratic& c, long k, const LaurentSeries& g);
// u = c z^k (1 + h) with val(h) >= 1 becomes (c, k, log(1 + h)).
UnitCocycle unit_from_series(const LaurentSeries& u);
// Needs g of positive valuation (exp of a polar part is not a Laurent series).
LaurentSeries unit_to_series(const UnitCocycle& u);
UnitCocycle unit_mul(const UnitCocycle& x, const UnitCocycle& y);
UnitCocycle unit_inv(const UnitCocycle& x);
// e(qz)/e(z) for e = c z^k exp(h): the unit q^k exp(h(qz) - h(z)).
UnitCocycle coboundary(const AlgebraContext& ctx, long k, const LaurentSeries& h);
std::string to_string(const UnitCocycle& u);

struct AdditiveSolution {
    LaurentSeries a;
    Quadratic obstruction;
};

// a_0 = 0, a_n = g_n / (q^n - 1). MathError when q^n = 1 for a needed n,
// ResourceError when a coefficient exceeds height_cap bits.
AdditiveSolution solve_additive(const AlgebraContext& ctx, const LaurentSeries& g,
                                std::size_t height_cap = default_height_cap);

long degree(const UnitCocycle& u);

struct PicardClass {
    long deg = 0;
    Quadratic point{1};
    long orbit_bound = default_pic_orbit_bound;
};

PicardClass picard_class(const AlgebraContext& ctx, const UnitCocycle& u,
                         long orbit_bound = default_pic_orbit_bound);
PicardClass class_mul(const PicardClass& x, const PicardClass& y);
PicardClass class_inv(const PicardClass& x);

enum class ClassEq { equal, unequal, undecided };

// Equal when the points agree up to q^m with |m| <= M. Unequal when the
// degrees differ or the norms rule out every m; undecided otherwise.
ClassEq class_eq(const PicardClass& x, const PicardClass& y, const Quadratic& q);
std::string to_string(const PicardClass& x);
std::string to_string(ClassEq e);

struct DivisorEntry {
    long n = 0;
    AbsValue value;  // |q^n - 1|, squared for imaginary fields
    double log10 = 0;
};

struct DivisorDiagnostics {
    bool squared = false;
    std::vector<DivisorEntry> entries;
    // Least-squares fit of log|q^n - 1| = log C - L log n (needs N >= 2).
    std::optional<double> fit_l;
    std::optional<double> fit_c;
};

DivisorDiagnostics divisor_diagnostics(const Quadratic& q, QuadField field, long n_max);
DivisorDiagnostics divisor_diagnostics(const Padic& q, long n_max);
// "n,abs_qn_minus_1_exact,log10_float" rows.
std::string diagnostics_csv(const DivisorDiagnostics& d);

}  // namespace qdiff
