#include "qdiff/scalars.hpp"

#include <cmath>
#include <regex>
#include <sstream>

namespace qdiff {

Rational make_rational(long num, long den) {
    if (den == 0) throw MathError("division by zero");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational parse_rational(const std::string& raw) {
    std::string text;
    // Accept the typographic minus as well as '-'.
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw.compare(i, 3, "\xE2\x88\x92") == 0) {
            text += '-';
            i += 2;
        } else if (!std::isspace(static_cast<unsigned char>(raw[i]))) {
            text += raw[i];
        }
    }
    static const std::regex re(R"(^([+-]?[0-9]+)(/([0-9]+))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ParseError("not a rational: '" + raw + "'");
    Integer num(m[1].str());
    Integer den(m[3].matched ? m[3].str() : std::string("1"));
    if (den == 0) throw ParseError("zero denominator in '" + raw + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::size_t height_bits(const Rational& r) {
    return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

Rational rational_pow(const Rational& r, long e) {
    if (e < 0) {
        if (sgn(r) == 0) throw MathError("division by zero");
        return rational_pow(Rational(1) / r, -e);
    }
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(e));
    Rational out(n, d);
    out.canonicalize();
    return out;
}

bool is_squarefree(long d) {
    if (d == 0) return false;
    long m = d < 0 ? -d : d;
    for (long f = 2; f * f <= m; ++f) {
        if (m % (f * f) == 0) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const QuadField& f) {
    if (f.is_rational()) return os << "rational";
    return os << "quadratic " << f.d;
}

Quadratic::Quadratic(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (d == 0 || !is_squarefree(d)) throw MathError("sqrt(" + std::to_string(d) + ") needs a squarefree radicand");
    normalize();
}

void Quadratic::normalize() {
    if (d_ == 1) {
        a_ += b_;
        b_ = 0;
    }
}

void Quadratic::adopt_field(const Quadratic& o) {
    if (d_ == o.d_) return;
    if (o.d_ == 1) return;
    if (d_ == 1) {
        d_ = o.d_;
        return;
    }
    // Both carry a radicand. Rational values may still pass.
    if (sgn(b_) == 0 && sgn(o.b_) == 0) return;
    if (sgn(b_) == 0) {
        d_ = o.d_;
        return;
    }
    if (sgn(o.b_) == 0) return;
    throw MathError("mixed-field operands: sqrt(" + std::to_string(d_) + ") and sqrt(" + std::to_string(o.d_) + ")");
}

Quadratic& Quadratic::operator+=(const Quadratic& o) {
    adopt_field(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

Quadratic& Quadratic::operator-=(const Quadratic& o) {
    adopt_field(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

Quadratic& Quadratic::operator*=(const Quadratic& o) {
    adopt_field(o);
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
        a_ *= o.a_;
        return *this;
    }
    Rational na = a_ * o.a_ + Rational(d_) * b_ * o.b_;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
}

Quadratic Quadratic::inverse() const {
    if (is_zero()) throw MathError("division by zero");
    if (sgn(b_) == 0) {
        Quadratic r = *this;
        r.a_ = Rational(1) / a_;
        return r;
    }
    Rational n = norm();
    Quadratic r = *this;
    r.a_ = a_ / n;
    r.b_ = -b_ / n;
    return r;
}

Quadratic& Quadratic::operator/=(const Quadratic& o) {
    adopt_field(o);
    return *this *= o.inverse();
}

Quadratic Quadratic::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Quadratic result(Rational(1), Rational(0), 1);
    result.d_ = d_;
    Quadratic base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

std::string to_string(const Quadratic& x) {
    if (x.is_rational()) return to_string(x.a());
    std::ostringstream os;
    if (sgn(x.a()) != 0) {
        os << x.a().get_str();
        if (sgn(x.b()) > 0) os << "+";
    }
    os << x.b().get_str() << "*sqrt(" << x.d() << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Quadratic& x) { return os << to_string(x); }

int real_sign(const Quadratic& x) {
    if (x.is_rational()) return sgn(x.a());
    if (x.d() < 0) throw MathError("sign of a non-real element requested");
    int sa = sgn(x.a()), sb = sgn(x.b());
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // a and b*sqrt(d) of opposite sign: compare a^2 with d b^2.
    Rational lhs = x.a() * x.a();
    Rational rhs = Rational(x.d()) * x.b() * x.b();
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

int real_compare(const Quadratic& x, const Quadratic& y) { return real_sign(x - y); }

Integer real_floor(const Quadratic& x) {
    if (x.is_rational()) {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), x.a().get_num_mpz_t(), x.a().get_den_mpz_t());
        return f;
    }
    // Start from a floating estimate and correct exactly.
    double approx = to_double_real(x);
    Integer f(std::floor(approx));
    while (real_sign(x - Quadratic(Rational(f))) < 0) f -= 1;
    while (real_sign(x - Quadratic(Rational(f + 1))) >= 0) f += 1;
    return f;
}

double to_double_real(const Quadratic& x) {
    if (x.is_rational()) return x.a().get_d();
    if (x.d() < 0) throw MathError("not a real element");
    return x.a().get_d() + x.b().get_d() * std::sqrt(static_cast<double>(x.d()));
}

AbsValue abs_value(const Quadratic& x) {
    return abs_value(x, x.field());
}

AbsValue abs_value(const Quadratic& x, QuadField field) {
    AbsValue out;
    if (field.d < 0 || x.d() < 0) {
        long d = field.d < 0 ? field.d : x.d();
        out.value = x.a() * x.a() + Rational(-d) * x.b() * x.b();
        out.squared = true;
        return out;
    }
    if (x.is_rational()) {
        out.value = abs(x.a());
        return out;
    }
    out.real_abs = real_sign(x) < 0 ? -x : x;
    return out;
}

RootOfUnityResult is_root_of_unity(const Quadratic& q, long bound) {
    if (q.is_zero()) throw MathError("zero is not a unit");
    Quadratic power = q;
    for (long m = 1; m <= bound; ++m) {
        if (power.is_one()) return {true, m};
        power *= q;
    }
    return {};
}

// ---------------------------------------------------------------------------
// p-adic numbers

bool is_prime(long p) {
    if (p < 2) return false;
    for (long f = 2; f * f <= p; ++f) {
        if (p % f == 0) return false;
    }
    return true;
}

namespace {

Integer ipow(long p, long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

Integer mod_pos(const Integer& x, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Strip factors of p from x (x != 0). Returns the number removed.
long strip(Integer& x, long p) {
    long v = 0;
    Integer pp(p);
    while (mpz_divisible_p(x.get_mpz_t(), pp.get_mpz_t())) {
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t());
        ++v;
    }
    return v;
}

}  // namespace

Padic Padic::make(long p, long valuation, const Integer& unit, long precision) {
    if (!is_prime(p)) throw MathError("p-adic modulus " + std::to_string(p) + " is not prime");
    if (precision <= 0) throw PrecisionError("p-adic precision must be positive");
    Integer u = unit;
    if (u == 0) return zero(p, valuation + precision);
    long extra = strip(u, p);
    Padic x;
    x.p_ = p;
    x.zero_ = false;
    x.val_ = valuation + extra;
    x.prec_ = precision - extra;
    if (x.prec_ <= 0) return zero(p, valuation + precision);
    x.unit_ = mod_pos(u, ipow(p, x.prec_));
    return x;
}

Padic Padic::zero(long p, long abs_precision) {
    Padic x;
    x.p_ = p;
    x.zero_ = true;
    x.abs_ = abs_precision;
    return x;
}

Padic Padic::from_integer(const Integer& x, long p, long precision) {
    if (x == 0) return zero(p, precision);
    return make(p, 0, x, precision);
}

Padic Padic::from_rational(const Rational& x, long p, long precision) {
    if (sgn(x) == 0) return zero(p, precision);
    Integer num = x.get_num(), den = x.get_den();
    long vn = strip(num, p);
    long vd = strip(den, p);
    Integer mod = ipow(p, precision);
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    return make(p, vn - vd, mod_pos(num * inv, mod), precision);
}

long Padic::valuation() const {
    if (zero_) throw PrecisionError("p-adic value indistinguishable from 0 modulo " + std::to_string(p_) + "^" + std::to_string(abs_));
    return val_;
}

Rational Padic::abs() const {
    if (zero_) return Rational(0);
    return rational_pow(Rational(p_), -val_);
}

void Padic::check_same_prime(const Padic& o) const {
    if (p_ != o.p_) throw MathError("mixed-field operands: p-adic primes " + std::to_string(p_) + " and " + std::to_string(o.p_));
}

Padic Padic::operator-() const {
    if (zero_) return *this;
    Padic r = *this;
    r.unit_ = mod_pos(-unit_, ipow(p_, prec_));
    return r;
}

Padic operator+(const Padic& x, const Padic& y) {
    x.check_same_prime(y);
    long abs_prec = std::min(x.abs_precision(), y.abs_precision());
    if (x.zero_ && y.zero_) return Padic::zero(x.p_, abs_prec);
    if (x.zero_ || y.zero_) {
        const Padic& nz = x.zero_ ? y : x;
        if (abs_prec <= nz.val_) return Padic::zero(x.p_, abs_prec);
        return Padic::make(nz.p_, nz.val_, nz.unit_, abs_prec - nz.val_);
    }
    long v = std::min(x.val_, y.val_);
    if (abs_prec <= v) return Padic::zero(x.p_, abs_prec);
    Integer s = x.unit_ * ipow(x.p_, x.val_ - v) + y.unit_ * ipow(y.p_, y.val_ - v);
    s = mod_pos(s, ipow(x.p_, abs_prec - v));
    if (s == 0) return Padic::zero(x.p_, abs_prec);
    return Padic::make(x.p_, v, s, abs_prec - v);
}

Padic operator*(const Padic& x, const Padic& y) {
    x.check_same_prime(y);
    if (x.zero_ || y.zero_) {
        // Zero times anything known: absolute precision shifts by the other
        // factor's valuation.
        long ax = x.zero_ ? x.abs_ + (y.zero_ ? y.abs_ : y.val_) : x.val_ + y.abs_;
        return Padic::zero(x.p_, ax);
    }
    long prec = std::min(x.prec_, y.prec_);
    return Padic::make(x.p_, x.val_ + y.val_, mod_pos(x.unit_ * y.unit_, ipow(x.p_, prec)), prec);
}

Padic Padic::inverse() const {
    if (zero_) throw PrecisionError("division by a p-adic value indistinguishable from 0");
    Integer mod = ipow(p_, prec_);
    Integer inv;
    mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
    return Padic::make(p_, -val_, inv, prec_);
}

Padic operator/(const Padic& x, const Padic& y) {
    x.check_same_prime(y);
    return x * y.inverse();
}

Padic Padic::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Padic result = Padic::from_integer(1, p_, zero_ ? std::max<long>(abs_, 1) : prec_);
    Padic base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

bool Padic::equals(const Padic& o) const {
    if (p_ != o.p_) return false;
    long abs_prec = std::min(abs_precision(), o.abs_precision());
    Padic diff = *this - o;
    return diff.zero_ || diff.val_ >= abs_prec;
}

const Padic& Padic::check_floor(long floor) const {
    if (!zero_ && prec_ < floor)
        throw PrecisionError("p-adic value keeps " + std::to_string(prec_) + " digits, floor is " + std::to_string(floor));
    return *this;
}

std::string to_string(const Padic& x) {
    std::ostringstream os;
    if (x.is_zero()) {
        os << "0 mod " << x.p() << "^" << x.abs_precision();
        return os.str();
    }
    os << x.p() << "^" << x.valuation() << " * " << x.unit().get_str() << " mod " << x.p() << "^" << x.precision();
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Padic& x) { return os << to_string(x); }

Padic parse_padic(const std::string& text) {
    static const std::regex full(R"(^\s*([0-9]+)\s*\^\s*(-?[0-9]+)\s*\*\s*([0-9]+)\s*mod\s*([0-9]+)\s*\^\s*([0-9]+)\s*$)");
    static const std::regex zero(R"(^\s*0\s*mod\s*([0-9]+)\s*\^\s*(-?[0-9]+)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, full)) {
        long p = std::stol(m[1]);
        if (std::stol(m[4]) != p) throw ParseError("mismatched primes in '" + text + "'");
        if (!is_prime(p)) throw ParseError("not a prime: " + m[1].str());
        long v = std::stol(m[2]);
        long n = std::stol(m[5]);
        if (n <= 0) throw ParseError("p-adic precision must be positive in '" + text + "'");
        Integer u(m[3].str());
        if (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(p)))
            throw ParseError("unit digits divisible by p in '" + text + "'");
        return Padic::make(p, v, u, n);
    }
    if (std::regex_match(text, m, zero)) {
        long p = std::stol(m[1]);
        if (!is_prime(p)) throw ParseError("not a prime: " + m[1].str());
        return Padic::zero(p, std::stol(m[2]));
    }
    throw ParseError("not a p-adic literal: '" + text + "'");
}

AbsValue abs_value(const Padic& x) {
    AbsValue out;
    out.value = x.abs();
    return out;
}

}  // namespace qdiff
