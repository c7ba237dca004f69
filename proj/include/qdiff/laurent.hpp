#pragma once

// Truncated Laurent series with ramified exponents.
//
// A series stores coefficients for exponent indices lo, lo+1, ... in units of
// 1/ram. Every index below `prec` is determined; indices at or above `prec`
// are unknown. The zero-at-precision series has no stored coefficients.

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qdiff/scalars.hpp"

namespace qdiff {

enum class Tri { equal, unequal, undecidable };

class LaurentSeries {
public:
    static constexpr long default_prec = 32;

    LaurentSeries() : LaurentSeries(zero(default_prec)) {}

    static LaurentSeries zero(long prec, int ram = 1);
    static LaurentSeries constant(const Quadratic& c, long prec);
    // c * z^(index/ram)
    static LaurentSeries monomial(const Quadratic& c, long index, long prec, int ram = 1);
    static LaurentSeries from_terms(const std::map<long, Quadratic>& terms, long prec, int ram = 1);

    int ram() const noexcept { return ram_; }
    long prec() const noexcept { return prec_; }
    // Smallest stored index; equals prec() for the zero series.
    long lo() const noexcept { return lo_; }
    // One past the largest nonzero stored index (lo() when zero).
    long hi() const noexcept { return lo_ + static_cast<long>(coeffs_.size()); }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    // Coefficient at an index (1/ram units). Throws PrecisionError at or
    // beyond prec().
    Quadratic coeff(long index) const;
    // Coefficient with no precision check; zero outside the stored range.
    const Quadratic& raw(long index) const;

    // Valuation in index units; PrecisionError for the zero series.
    long val_index() const;
    Rational valuation() const { return Rational(val_index(), ram_); }
    const Quadratic& leading() const;

    // R-membership: no negative exponents.
    bool in_R() const { return is_zero() || lo_ >= 0; }

    LaurentSeries operator-() const;
    LaurentSeries& operator+=(const LaurentSeries& o);
    LaurentSeries& operator-=(const LaurentSeries& o);
    friend LaurentSeries operator+(LaurentSeries x, const LaurentSeries& y) { return x += y; }
    friend LaurentSeries operator-(LaurentSeries x, const LaurentSeries& y) { return x -= y; }
    friend LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y);
    LaurentSeries scaled(const Quadratic& c) const;
    // Multiply by z^(index/ram) exactly.
    LaurentSeries shifted(long index) const;

    LaurentSeries inverse() const;
    // Coefficient at index i multiplied by step^i. With step = q^(1/ram) this
    // is the substitution z -> q z.
    LaurentSeries twisted(const Quadratic& step) const;
    LaurentSeries truncated(long prec) const;
    LaurentSeries with_ram(int ram) const;

    Tri compare(const LaurentSeries& o) const;
    // Agreement on the common window.
    bool agrees(const LaurentSeries& o) const { return compare(o) != Tri::unequal; }

    // Largest coefficient height in the window.
    std::size_t max_height() const;

    const std::vector<Quadratic>& coefficients() const noexcept { return coeffs_; }

private:
    LaurentSeries(int ram, long lo, std::vector<Quadratic> coeffs, long prec);
    void trim();

    int ram_ = 1;
    long lo_ = 0;
    std::vector<Quadratic> coeffs_;
    long prec_ = default_prec;
};

// f(z) -> f(z^n).
LaurentSeries ls_substitute_power(const LaurentSeries& f, int n);
// Same series with exponents viewed in units of 1/(ram*n).
LaurentSeries ls_ramify(const LaurentSeries& f, int n);
LaurentSeries ls_exp(const LaurentSeries& f);
LaurentSeries ls_log(const LaurentSeries& f);
LaurentSeries ls_invert(const LaurentSeries& f);

std::string to_string(const LaurentSeries& f);
std::ostream& operator<<(std::ostream& os, const LaurentSeries& f);
LaurentSeries parse_series(const std::string& text);

}  // namespace qdiff
