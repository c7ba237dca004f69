#pragma once

// Moduli of (quasi-)lattices L = Z w1 + Z w2 with tau = w2 / w1 quadratic:
// SL2(Z) reduction and equivalence, continued fractions of real points,
// similarity of lattices and the unit group G_L = {a : a L = L}.

#include <optional>
#include <string>
#include <vector>

#include "qdiff/scalars.hpp"

namespace qdiff {

// [[a, b], [c, d]] acting by tau -> (a tau + b) / (c tau + d).
struct Mat2 {
    Integer a{1}, b{0}, c{0}, d{1};

    static Mat2 identity() { return {}; }
    static Mat2 S() { return {0, -1, 1, 0}; }
    static Mat2 T(long n = 1) { return {1, n, 0, 1}; }

    Integer det() const { return a * d - b * c; }
    // Inverse of a unimodular matrix.
    Mat2 inverse() const;
    Quadratic apply(const Quadratic& tau) const;
    friend Mat2 operator*(const Mat2& x, const Mat2& y);
    friend bool operator==(const Mat2& x, const Mat2& y) = default;
};

std::string to_string(const Mat2& m);

enum class Regime { upper, lower, real };

// MathError unless tau is an irrational quadratic number.
Regime regime(const Quadratic& tau);
std::string to_string(Regime r);

// |Re| <= 1/2, |tau| >= 1, with Re = 1/2 and the right half of the arc
// excluded.
bool in_fundamental_domain(const Quadratic& tau);

struct Reduction {
    Quadratic tau;
    Mat2 g;  // tau = g . input, det 1
};

Reduction reduce_upper(const Quadratic& tau);

struct CFExpansion {
    std::vector<Integer> preperiod;
    std::vector<Integer> period;
};

CFExpansion cf_expand(const Quadratic& tau);
std::string to_string(const CFExpansion& cf);

struct Equivalence {
    bool equivalent = false;
    // tau = witness . mu with det 1.
    std::optional<Mat2> witness;
    // Real points only: equivalence under GL2(Z).
    bool gl2_equivalent = false;
};

Equivalence sl2_equivalent(const Quadratic& tau, const Quadratic& mu);

struct QuasiLattice {
    Quadratic w1, w2;
};

QuasiLattice make_lattice(const Quadratic& w1, const Quadratic& w2);
// tau = w2 / w1.
Quadratic ratio(const QuasiLattice& l);
// Discrete in C (tau not real).
bool is_discrete(const QuasiLattice& l);
// Integer coordinates of x in the basis (w1, w2), if any.
std::optional<std::pair<Integer, Integer>> lattice_coords(const QuasiLattice& l, const Quadratic& x);
// a L = L, checked through integer coordinates and determinant +-1.
bool preserves(const QuasiLattice& l, const Quadratic& alpha);

struct Similarity {
    bool similar = false;
    // [w2, w1]^T = alpha * basis * [w2', w1']^T with det(basis) = +-1.
    Quadratic alpha{1};
    Mat2 basis;
};

Similarity lattice_similar(const QuasiLattice& l, const QuasiLattice& m);

struct StabilizerDescription {
    // Primitive A tau^2 + B tau + C = 0, A > 0; discriminant B^2 - 4AC.
    Integer a, b, c;
    Integer discriminant;
    Integer field_discriminant;
    Integer conductor;
    std::vector<Quadratic> generators;
    long torsion_order = 2;
    // Real points: the fundamental unit (> 1) of the multiplier order.
    std::optional<Quadratic> fundamental_unit;
};

StabilizerDescription stabilizer(const QuasiLattice& l);
std::string to_string(const StabilizerDescription& s);

struct IsomGroupDescription {
    StabilizerDescription g_l;
    std::string translations;
    std::string picard;
};

IsomGroupDescription isom_group_description(const QuasiLattice& l);
std::string to_string(const IsomGroupDescription& d);

// "w1, w2" with scalar expressions.
QuasiLattice parse_lattice(const std::string& text);

}  // namespace qdiff
