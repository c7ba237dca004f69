#pragma once

// Exact coefficient arithmetic: rationals, quadratic fields Q(sqrt d) and
// fixed-precision p-adic numbers.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>

#include "qdiff/errors.hpp"

namespace qdiff {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);
// Bit size of numerator plus bit size of denominator.
std::size_t height_bits(const Rational& r);
Rational rational_pow(const Rational& r, long e);

bool is_squarefree(long d);

// The field Q(sqrt d). d == 1 encodes Q itself.
struct QuadField {
    long d = 1;
    bool is_rational() const noexcept { return d == 1; }
    bool is_imaginary() const noexcept { return d < 0; }
    friend bool operator==(const QuadField&, const QuadField&) = default;
};

std::ostream& operator<<(std::ostream& os, const QuadField& f);

// a + b*sqrt(d). Elements with b == 0 are rational and mix freely with any
// field; two elements with b != 0 must share d.
class Quadratic {
public:
    Quadratic() = default;
    Quadratic(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
    Quadratic(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
    Quadratic(Rational a, Rational b, long d);

    static Quadratic sqrt_of(long d) { return Quadratic(Rational(0), Rational(1), d); }

    const Rational& a() const noexcept { return a_; }
    const Rational& b() const noexcept { return b_; }
    long d() const noexcept { return d_; }
    QuadField field() const noexcept { return QuadField{d_}; }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_one() const { return a_ == 1 && sgn(b_) == 0; }
    bool is_rational() const { return sgn(b_) == 0; }

    Quadratic conj() const { return Quadratic(a_, -b_, d_); }
    // a^2 - d b^2.
    Rational norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }
    Quadratic inverse() const;
    Quadratic pow(long e) const;

    Quadratic operator-() const { return Quadratic(-a_, -b_, d_); }
    Quadratic& operator+=(const Quadratic& o);
    Quadratic& operator-=(const Quadratic& o);
    Quadratic& operator*=(const Quadratic& o);
    Quadratic& operator/=(const Quadratic& o);

    friend Quadratic operator+(Quadratic x, const Quadratic& y) { return x += y; }
    friend Quadratic operator-(Quadratic x, const Quadratic& y) { return x -= y; }
    friend Quadratic operator*(Quadratic x, const Quadratic& y) { return x *= y; }
    friend Quadratic operator/(Quadratic x, const Quadratic& y) { return x /= y; }

    friend bool operator==(const Quadratic& x, const Quadratic& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && (sgn(x.b_) == 0 || x.d_ == y.d_);
    }
    // Arbitrary total order (lexicographic on a, b) for use as a map key.
    friend bool operator<(const Quadratic& x, const Quadratic& y) {
        if (x.a_ != y.a_) return x.a_ < y.a_;
        return x.b_ < y.b_;
    }

    std::size_t height() const { return height_bits(a_) + height_bits(b_); }

private:
    void adopt_field(const Quadratic& o);
    void normalize();

    Rational a_{0};
    Rational b_{0};
    long d_ = 1;
};

std::string to_string(const Quadratic& x);
std::ostream& operator<<(std::ostream& os, const Quadratic& x);

// Sign of a real element (d > 0 or rational), computed exactly.
int real_sign(const Quadratic& x);
int real_compare(const Quadratic& x, const Quadratic& y);
// Exact floor of a real element.
Integer real_floor(const Quadratic& x);
double to_double_real(const Quadratic& x);

// Result of abs_value. For Q and p-adic fields `value` is |x|; for an
// imaginary quadratic field it is |x|^2 (squared == true). For a real
// quadratic field with b != 0 the absolute value is the real element
// `real_abs`, compared exactly through real_compare.
struct AbsValue {
    Rational value;
    bool squared = false;
    std::optional<Quadratic> real_abs;
};

AbsValue abs_value(const Quadratic& x);
// Uses the squared form whenever the field is imaginary, even for rational x.
AbsValue abs_value(const Quadratic& x, QuadField field);

struct RootOfUnityResult {
    bool root_of_unity = false;
    long order = 0;
};

RootOfUnityResult is_root_of_unity(const Quadratic& q, long bound);

// Fixed-precision p-adic number p^valuation * unit, with unit known modulo
// p^precision. A zero element is "zero modulo p^abs_precision".
class Padic {
public:
    static constexpr long default_floor = 4;

    Padic() = default;
    static Padic from_integer(const Integer& x, long p, long precision);
    static Padic from_rational(const Rational& x, long p, long precision);
    static Padic make(long p, long valuation, const Integer& unit, long precision);
    static Padic zero(long p, long abs_precision);

    long p() const noexcept { return p_; }
    bool is_zero() const noexcept { return zero_; }
    long valuation() const;
    const Integer& unit() const noexcept { return unit_; }
    long precision() const noexcept { return zero_ ? 0 : prec_; }
    long abs_precision() const noexcept { return zero_ ? abs_ : val_ + prec_; }

    // |x| = p^(-v); 0 for the zero element.
    Rational abs() const;

    Padic operator-() const;
    friend Padic operator+(const Padic& x, const Padic& y);
    friend Padic operator-(const Padic& x, const Padic& y) { return x + (-y); }
    friend Padic operator*(const Padic& x, const Padic& y);
    friend Padic operator/(const Padic& x, const Padic& y);
    Padic inverse() const;
    Padic pow(long e) const;

    // Agreement modulo the smaller absolute precision.
    bool equals(const Padic& o) const;

    // Raises PrecisionError when a nonzero value has fewer than `floor`
    // known unit digits.
    const Padic& check_floor(long floor = default_floor) const;

private:
    void check_same_prime(const Padic& o) const;

    long p_ = 2;
    bool zero_ = true;
    long val_ = 0;
    Integer unit_{0};
    long prec_ = 0;
    long abs_ = 0;
};

std::string to_string(const Padic& x);
std::ostream& operator<<(std::ostream& os, const Padic& x);
Padic parse_padic(const std::string& text);
bool is_prime(long p);

AbsValue abs_value(const Padic& x);

}  // namespace qdiff
