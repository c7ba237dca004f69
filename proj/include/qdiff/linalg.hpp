#pragma once

// Dense matrices over the scalar field K and over truncated Laurent series,
// plus univariate polynomials over K with exact root extraction.

#include <string>
#include <utility>
#include <vector>

#include "qdiff/laurent.hpp"
#include "qdiff/scalars.hpp"

namespace qdiff {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix out(nr, nc, data_.empty() ? T() : data_[0]);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using KMatrix = Matrix<Quadratic>;
using KVector = std::vector<Quadratic>;
using SMatrix = Matrix<LaurentSeries>;
using SVector = std::vector<LaurentSeries>;

// ---- over K

KMatrix k_identity(std::size_t n);
KMatrix operator*(const KMatrix& a, const KMatrix& b);
KMatrix operator+(const KMatrix& a, const KMatrix& b);
KMatrix operator-(const KMatrix& a, const KMatrix& b);
KMatrix k_scaled(const KMatrix& a, const Quadratic& c);
bool operator==(const KMatrix& a, const KMatrix& b);
KVector operator*(const KMatrix& a, const KVector& v);

std::size_t k_rank(KMatrix a);
// Basis of {x : a x = 0}.
std::vector<KVector> k_nullspace(KMatrix a);
Quadratic k_det(KMatrix a);
// MathError when singular.
KMatrix k_inverse(const KMatrix& a);
KMatrix k_pow(const KMatrix& a, long e);
// Matrix whose columns are the given vectors.
KMatrix k_from_columns(const std::vector<KVector>& cols, std::size_t rows);

// ---- polynomials over K, coefficient i at index i

using KPoly = std::vector<Quadratic>;

void kp_trim(KPoly& p);
long kp_degree(const KPoly& p);
Quadratic kp_eval(const KPoly& p, const Quadratic& x);
KPoly kp_mul(const KPoly& a, const KPoly& b);
std::pair<KPoly, KPoly> kp_divmod(const KPoly& a, const KPoly& b);
KPoly kp_gcd(KPoly a, KPoly b);
KPoly kp_derivative(const KPoly& p);
KPoly kp_monic(const KPoly& p);
std::string kp_to_string(const KPoly& p);

// det(x I - a), monic.
KPoly k_charpoly(const KMatrix& a);

struct Eigenvalue {
    Quadratic value;
    long multiplicity = 0;
};

// All roots of p in K with multiplicity, in a deterministic order;
// FieldExtensionRequired (quoting `what` and p) when p does not split.
std::vector<Eigenvalue> kp_roots(const KPoly& p, QuadField field, const std::string& what = "polynomial");

// Sizes of the Jordan blocks of a at eigenvalue lambda, descending.
std::vector<long> k_jordan_blocks(const KMatrix& a, const Quadratic& lambda, long multiplicity);

// ---- over truncated series

SMatrix s_identity(std::size_t n, long prec);
SMatrix s_zero(std::size_t rows, std::size_t cols, long prec);
SMatrix s_constant(const KMatrix& a, long prec);
SMatrix operator*(const SMatrix& a, const SMatrix& b);
SMatrix operator+(const SMatrix& a, const SMatrix& b);
SMatrix operator-(const SMatrix& a, const SMatrix& b);
SVector operator*(const SMatrix& a, const SVector& v);
SMatrix s_scaled(const SMatrix& a, const LaurentSeries& f);
SMatrix s_truncated(const SMatrix& a, long prec);
// Entrywise f(c z) with c = step^ram handled by the caller through twisted().
SMatrix s_twisted(const SMatrix& a, const Quadratic& step);
SMatrix s_shifted(const SMatrix& a, long index);
// Three-valued entrywise comparison.
Tri s_compare(const SMatrix& a, const SMatrix& b);
// Smallest stored exponent index over nonzero entries (prec when zero).
long s_min_lo(const SMatrix& a);
long s_min_prec(const SMatrix& a);
bool s_in_R(const SMatrix& a);
// Constant terms; entries must lie in R.
KMatrix s_residue(const SMatrix& a);
// Coefficient matrix at an exponent index.
KMatrix s_coeff(const SMatrix& a, long index);

LaurentSeries s_det(const SMatrix& a);
// PrecisionError when a pivot is indistinguishable from zero.
SMatrix s_inverse(const SMatrix& a);

// Row echelon elimination with lowest-valuation pivots. Returns the rank at
// the working precision and, for each column, whether it is a pivot.
struct SeriesEchelon {
    std::size_t rank = 0;
    std::vector<bool> pivot;
};
SeriesEchelon s_echelon(SMatrix a);

// Solves a x = b for a with full column rank. Returns false when b is not
// in the column span within the window.
bool s_solve_full_column(const SMatrix& a, const SVector& b, SVector& x);

std::string to_string(const KMatrix& a);

}  // namespace qdiff
