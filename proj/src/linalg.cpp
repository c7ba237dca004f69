#include "qdiff/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace qdiff {

// ---------------------------------------------------------------------------
// K

KMatrix k_identity(std::size_t n) {
    KMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Quadratic(1);
    return m;
}

KMatrix operator*(const KMatrix& a, const KMatrix& b) {
    if (a.cols() != b.rows()) throw MathError("matrix shape mismatch");
    KMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
            }
        }
    return c;
}

KMatrix operator+(const KMatrix& a, const KMatrix& b) {
    KMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

KMatrix operator-(const KMatrix& a, const KMatrix& b) {
    KMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

KMatrix k_scaled(const KMatrix& a, const Quadratic& s) {
    KMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
    return c;
}

bool operator==(const KMatrix& a, const KMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) return false;
    return true;
}

KVector operator*(const KMatrix& a, const KVector& v) {
    KVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero() && !v[j].is_zero()) out[i] += a(i, j) * v[j];
    return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(KMatrix& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        while (p < a.rows() && a(p, col).is_zero()) ++p;
        if (p == a.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
        Quadratic inv = a(row, col).inverse();
        for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col).is_zero()) continue;
            Quadratic f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j)
                if (!a(row, j).is_zero()) a(i, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t k_rank(KMatrix a) { return rref(a).size(); }

std::vector<KVector> k_nullspace(KMatrix a) {
    auto piv = rref(a);
    std::vector<bool> is_piv(a.cols(), false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<KVector> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_piv[free]) continue;
        KVector v(a.cols());
        v[free] = Quadratic(1);
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

Quadratic k_det(KMatrix a) {
    if (a.rows() != a.cols()) throw MathError("determinant of a non-square matrix");
    std::size_t n = a.rows();
    Quadratic det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c).is_zero()) ++p;
        if (p == n) return Quadratic(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        Quadratic inv = a(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero()) continue;
            Quadratic f = a(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

KMatrix k_inverse(const KMatrix& a) {
    std::size_t n = a.rows();
    if (n != a.cols()) throw MathError("inverse of a non-square matrix");
    KMatrix aug(n, 2 * n);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, k_identity(n));
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw MathError("singular matrix");
    return aug.block(0, n, n, n);
}

KMatrix k_pow(const KMatrix& a, long e) {
    if (e < 0) return k_pow(k_inverse(a), -e);
    KMatrix r = k_identity(a.rows());
    KMatrix b = a;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

KMatrix k_from_columns(const std::vector<KVector>& cols, std::size_t rows) {
    KMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
}

// ---------------------------------------------------------------------------
// polynomials

void kp_trim(KPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

long kp_degree(const KPoly& p) {
    KPoly t = p;
    kp_trim(t);
    return static_cast<long>(t.size()) - 1;
}

Quadratic kp_eval(const KPoly& p, const Quadratic& x) {
    Quadratic acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

KPoly kp_mul(const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return {};
    KPoly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    kp_trim(c);
    return c;
}

std::pair<KPoly, KPoly> kp_divmod(const KPoly& a, const KPoly& b0) {
    KPoly b = b0;
    kp_trim(b);
    if (b.empty()) throw MathError("polynomial division by zero");
    KPoly r = a;
    kp_trim(r);
    if (r.size() < b.size()) return {{}, r};
    KPoly q(r.size() - b.size() + 1);
    Quadratic inv = b.back().inverse();
    for (std::size_t k = r.size(); k-- >= b.size();) {
        Quadratic c = r[k] * inv;
        std::size_t shift = k - (b.size() - 1);
        q[shift] = c;
        if (!c.is_zero())
            for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
        if (k == 0) break;
    }
    kp_trim(q);
    kp_trim(r);
    return {q, r};
}

KPoly kp_monic(const KPoly& p0) {
    KPoly p = p0;
    kp_trim(p);
    if (p.empty()) return p;
    Quadratic inv = p.back().inverse();
    for (auto& c : p) c *= inv;
    return p;
}

KPoly kp_gcd(KPoly a, KPoly b) {
    kp_trim(a);
    kp_trim(b);
    while (!b.empty()) {
        KPoly r = kp_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return kp_monic(a);
}

KPoly kp_derivative(const KPoly& p) {
    if (p.size() <= 1) return {};
    KPoly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Quadratic(static_cast<long>(i));
    kp_trim(d);
    return d;
}

std::string kp_to_string(const KPoly& p0) {
    KPoly p = p0;
    kp_trim(p);
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = p.size(); k-- > 0;) {
        if (p[k].is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << to_string(p[k]) << ")";
        if (k > 0) os << "*x^" << k;
        first = false;
    }
    return os.str();
}

KPoly k_charpoly(const KMatrix& a) {
    // Faddeev-LeVerrier.
    std::size_t n = a.rows();
    KPoly c(n + 1);
    c[n] = Quadratic(1);
    KMatrix m(n, n);
    KMatrix id = k_identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m + k_scaled(id, c[n - k + 1]);
        KMatrix am = a * m;
        Quadratic tr;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / Quadratic(static_cast<long>(k));
    }
    return c;
}

std::vector<long> k_jordan_blocks(const KMatrix& a, const Quadratic& lambda, long multiplicity) {
    std::size_t n = a.rows();
    KMatrix b = a - k_scaled(k_identity(n), lambda);
    std::vector<long> ranks{static_cast<long>(n)};
    KMatrix power = k_identity(n);
    long target = static_cast<long>(n) - multiplicity;
    while (ranks.back() > target) {
        power = power * b;
        long r = static_cast<long>(k_rank(power));
        if (r == ranks.back()) throw MathError("Jordan structure inconsistent with the multiplicity");
        ranks.push_back(r);
    }
    // ranks[j-1] - ranks[j] blocks have size >= j.
    std::vector<long> at_least;
    for (std::size_t j = 1; j < ranks.size(); ++j) at_least.push_back(ranks[j - 1] - ranks[j]);
    at_least.push_back(0);
    std::vector<long> sizes;
    for (std::size_t j = 0; j + 1 < at_least.size(); ++j) {
        long exact = at_least[j] - at_least[j + 1];
        for (long t = 0; t < exact; ++t) sizes.push_back(static_cast<long>(j + 1));
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

std::string to_string(const KMatrix& a) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << to_string(a(i, j));
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// series

SMatrix s_zero(std::size_t rows, std::size_t cols, long prec) { return SMatrix(rows, cols, LaurentSeries::zero(prec)); }

SMatrix s_identity(std::size_t n, long prec) {
    SMatrix m = s_zero(n, n, prec);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = LaurentSeries::constant(Quadratic(1), prec);
    return m;
}

SMatrix s_constant(const KMatrix& a, long prec) {
    SMatrix m = s_zero(a.rows(), a.cols(), prec);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = LaurentSeries::constant(a(i, j), prec);
    return m;
}

SMatrix operator*(const SMatrix& a, const SMatrix& b) {
    if (a.cols() != b.rows()) throw MathError("matrix shape mismatch");
    SMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            LaurentSeries acc = a(i, 0) * b(0, j);
            for (std::size_t k = 1; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = std::move(acc);
        }
    return c;
}

SMatrix operator+(const SMatrix& a, const SMatrix& b) {
    SMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

SMatrix operator-(const SMatrix& a, const SMatrix& b) {
    SMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

SVector operator*(const SMatrix& a, const SVector& v) {
    SVector out;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        LaurentSeries acc = a(i, 0) * v[0];
        for (std::size_t k = 1; k < a.cols(); ++k) acc += a(i, k) * v[k];
        out.push_back(std::move(acc));
    }
    return out;
}

SMatrix s_scaled(const SMatrix& a, const LaurentSeries& f) {
    SMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f * a(i, j);
    return c;
}

SMatrix s_truncated(const SMatrix& a, long prec) {
    SMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j).truncated(prec);
    return c;
}

SMatrix s_twisted(const SMatrix& a, const Quadratic& step) {
    SMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j).twisted(step);
    return c;
}

SMatrix s_shifted(const SMatrix& a, long index) {
    SMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j).shifted(index);
    return c;
}

Tri s_compare(const SMatrix& a, const SMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return Tri::unequal;
    bool any = false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Tri t = a(i, j).compare(b(i, j));
            if (t == Tri::unequal) return t;
            if (t == Tri::equal) any = true;
        }
    return any ? Tri::equal : Tri::undecidable;
}

long s_min_lo(const SMatrix& a) {
    long lo = s_min_prec(a);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) lo = std::min(lo, a(i, j).lo());
    return lo;
}

long s_min_prec(const SMatrix& a) {
    long p = a(0, 0).prec();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) p = std::min(p, a(i, j).prec());
    return p;
}

bool s_in_R(const SMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).in_R()) return false;
    return true;
}

KMatrix s_coeff(const SMatrix& a, long index) {
    KMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).ram() != 1) throw MathError("coefficient matrix of a ramified series matrix");
            r(i, j) = a(i, j).coeff(index);
        }
    return r;
}

KMatrix s_residue(const SMatrix& a) {
    if (!s_in_R(a)) throw MathError("residue of a matrix with polar entries");
    return s_coeff(a, 0);
}

namespace {

// Lowest-valuation nonzero entry in column c among rows >= r0.
std::size_t pick_pivot(const SMatrix& a, std::size_t r0, std::size_t c) {
    std::size_t best = a.rows();
    for (std::size_t i = r0; i < a.rows(); ++i) {
        if (a(i, c).is_zero()) continue;
        if (best == a.rows() || a(i, c).lo() < a(best, c).lo()) best = i;
    }
    return best;
}

void swap_rows(SMatrix& a, std::size_t r, std::size_t s) {
    if (r == s) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(s, j));
}

}  // namespace

LaurentSeries s_det(const SMatrix& a0) {
    SMatrix a = a0;
    std::size_t n = a.rows();
    if (n != a.cols()) throw MathError("determinant of a non-square matrix");
    LaurentSeries det = LaurentSeries::constant(Quadratic(1), s_min_prec(a) + 1'000'000);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = pick_pivot(a, c, c);
        if (p == n) {
            // Zero column in the window: the determinant vanishes to the
            // product precision.
            return LaurentSeries::zero((det * a(c, c)).prec());
        }
        if (p != c) {
            swap_rows(a, p, c);
            det = -det;
        }
        det = det * a(c, c);
        LaurentSeries inv = a(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero()) continue;
            LaurentSeries f = a(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

SMatrix s_inverse(const SMatrix& a0) {
    std::size_t n = a0.rows();
    if (n != a0.cols()) throw MathError("inverse of a non-square matrix");
    long prec = s_min_prec(a0);
    SMatrix a(n, 2 * n, LaurentSeries::zero(prec));
    a.set_block(0, 0, a0);
    // The identity half carries no precision limit of its own.
    a.set_block(0, n, s_identity(n, prec + 4 * n * 64 + 1024));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = pick_pivot(a, c, c);
        if (p == n) throw PrecisionError("matrix not invertible at the working precision");
        swap_rows(a, p, c);
        LaurentSeries inv = a(c, c).inverse();
        for (std::size_t j = 0; j < 2 * n; ++j) a(c, j) = inv * a(c, j);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c).is_zero()) continue;
            LaurentSeries f = a(i, c);
            for (std::size_t j = 0; j < 2 * n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return a.block(0, n, n, n);
}

SeriesEchelon s_echelon(SMatrix a) {
    SeriesEchelon out;
    out.pivot.assign(a.cols(), false);
    std::size_t row = 0;
    for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
        std::size_t p = pick_pivot(a, row, c);
        if (p == a.rows()) continue;
        swap_rows(a, p, row);
        LaurentSeries inv = a(row, c).inverse();
        for (std::size_t i = row + 1; i < a.rows(); ++i) {
            if (a(i, c).is_zero()) continue;
            LaurentSeries f = a(i, c) * inv;
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        out.pivot[c] = true;
        ++row;
    }
    out.rank = row;
    return out;
}

bool s_solve_full_column(const SMatrix& a0, const SVector& b, SVector& x) {
    std::size_t d = a0.rows();
    std::size_t m = a0.cols();
    SMatrix a(d, m + 1, LaurentSeries::zero(0));
    a.set_block(0, 0, a0);
    for (std::size_t i = 0; i < d; ++i) a(i, m) = b[i];
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t p = pick_pivot(a, c, c);
        if (p == d) throw PrecisionError("column rank undecidable at the working precision");
        swap_rows(a, p, c);
        LaurentSeries inv = a(c, c).inverse();
        for (std::size_t j = c; j <= m; ++j) a(c, j) = inv * a(c, j);
        for (std::size_t i = 0; i < d; ++i) {
            if (i == c || a(i, c).is_zero()) continue;
            LaurentSeries f = a(i, c);
            for (std::size_t j = c; j <= m; ++j) a(i, j) -= f * a(c, j);
        }
    }
    for (std::size_t i = m; i < d; ++i)
        if (!a(i, m).is_zero()) return false;
    x.clear();
    for (std::size_t i = 0; i < m; ++i) x.push_back(a(i, m));
    return true;
}

}  // namespace qdiff
