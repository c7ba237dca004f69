#include "qdiff/laurent.hpp"

#include <numeric>
#include <sstream>

namespace qdiff {

namespace {

const Quadratic& zero_scalar() {
    static const Quadratic z;
    return z;
}

long lcm_l(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

LaurentSeries::LaurentSeries(int ram, long lo, std::vector<Quadratic> coeffs, long prec)
    : ram_(ram), lo_(lo), coeffs_(std::move(coeffs)), prec_(prec) {
    if (ram_ <= 0) throw MathError("ramification index must be positive");
    trim();
}

void LaurentSeries::trim() {
    // Drop coefficients at or beyond prec, then leading and trailing zeros.
    if (lo_ >= prec_) {
        coeffs_.clear();
    } else if (hi() > prec_) {
        coeffs_.resize(static_cast<std::size_t>(prec_ - lo_));
    }
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first].is_zero()) ++first;
    if (first == coeffs_.size()) {
        coeffs_.clear();
        lo_ = prec_;
        return;
    }
    if (first > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(first));
        lo_ += static_cast<long>(first);
    }
}

LaurentSeries LaurentSeries::zero(long prec, int ram) { return LaurentSeries(ram, prec, {}, prec); }

LaurentSeries LaurentSeries::constant(const Quadratic& c, long prec) { return monomial(c, 0, prec, 1); }

LaurentSeries LaurentSeries::monomial(const Quadratic& c, long index, long prec, int ram) {
    return LaurentSeries(ram, index, {c}, prec);
}

LaurentSeries LaurentSeries::from_terms(const std::map<long, Quadratic>& terms, long prec, int ram) {
    if (terms.empty()) return zero(prec, ram);
    long lo = terms.begin()->first;
    long top = std::min(prec, terms.rbegin()->first + 1);
    std::vector<Quadratic> c(static_cast<std::size_t>(std::max(0L, top - lo)));
    for (const auto& [i, v] : terms) {
        if (i < top) c[static_cast<std::size_t>(i - lo)] = v;
    }
    return LaurentSeries(ram, lo, std::move(c), prec);
}

Quadratic LaurentSeries::coeff(long index) const {
    if (index >= prec_)
        throw PrecisionError("coefficient " + std::to_string(index) + " requested beyond precision " + std::to_string(prec_));
    return raw(index);
}

const Quadratic& LaurentSeries::raw(long index) const {
    if (index < lo_ || index >= hi()) return zero_scalar();
    return coeffs_[static_cast<std::size_t>(index - lo_)];
}

long LaurentSeries::val_index() const {
    if (is_zero()) throw PrecisionError("series is zero at precision " + std::to_string(prec_));
    return lo_;
}

const Quadratic& LaurentSeries::leading() const {
    if (is_zero()) throw PrecisionError("series is zero at precision " + std::to_string(prec_));
    return coeffs_.front();
}

LaurentSeries LaurentSeries::with_ram(int ram) const {
    if (ram == ram_) return *this;
    if (ram % ram_ != 0) throw MathError("ramification " + std::to_string(ram) + " is not a multiple of " + std::to_string(ram_));
    long m = ram / ram_;
    std::vector<Quadratic> c;
    if (!coeffs_.empty()) {
        c.resize(static_cast<std::size_t>((static_cast<long>(coeffs_.size()) - 1) * m + 1));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * static_cast<std::size_t>(m)] = coeffs_[i];
    }
    return LaurentSeries(ram, lo_ * m, std::move(c), prec_ * m);
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
    if (o.ram_ != ram_) {
        int r = static_cast<int>(lcm_l(ram_, o.ram_));
        *this = with_ram(r);
        return *this += o.with_ram(r);
    }
    long prec = std::min(prec_, o.prec_);
    if (o.is_zero()) {
        prec_ = prec;
        trim();
        return *this;
    }
    long lo = is_zero() ? o.lo_ : std::min(lo_, o.lo_);
    long top = std::min(prec, std::max(hi(), o.hi()));
    if (top <= lo) {
        *this = zero(prec, ram_);
        return *this;
    }
    std::vector<Quadratic> c(static_cast<std::size_t>(top - lo));
    for (long i = lo; i < top; ++i) c[static_cast<std::size_t>(i - lo)] = raw(i) + o.raw(i);
    *this = LaurentSeries(ram_, lo, std::move(c), prec);
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) { return *this += -o; }

LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y) {
    if (x.ram_ != y.ram_) {
        int r = static_cast<int>(lcm_l(x.ram_, y.ram_));
        return x.with_ram(r) * y.with_ram(r);
    }
    // Unknown tail of x meets the leading term of y and vice versa.
    long prec = std::min(x.prec_ + y.lo_, y.prec_ + x.lo_);
    if (x.is_zero() || y.is_zero()) return LaurentSeries::zero(prec, x.ram_);
    long lo = x.lo_ + y.lo_;
    long top = std::min(prec, x.hi() + y.hi() - 1);
    if (top <= lo) return LaurentSeries::zero(prec, x.ram_);
    std::vector<Quadratic> c(static_cast<std::size_t>(top - lo));
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
        if (x.coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < y.coeffs_.size(); ++j) {
            std::size_t k = i + j;
            if (static_cast<long>(k) >= top - lo) break;
            if (y.coeffs_[j].is_zero()) continue;
            c[k] += x.coeffs_[i] * y.coeffs_[j];
        }
    }
    return LaurentSeries(x.ram_, lo, std::move(c), prec);
}

LaurentSeries LaurentSeries::scaled(const Quadratic& c) const {
    if (c.is_zero()) return zero(prec_ + 0, ram_).truncated(prec_);
    LaurentSeries r = *this;
    for (auto& v : r.coeffs_) v *= c;
    return r;
}

LaurentSeries LaurentSeries::shifted(long index) const {
    LaurentSeries r = *this;
    r.lo_ += index;
    r.prec_ += index;
    return r;
}

LaurentSeries LaurentSeries::inverse() const {
    if (is_zero()) throw PrecisionError("inverse of a series indistinguishable from zero (precision " + std::to_string(prec_) + ")");
    long rel = prec_ - lo_;
    std::vector<Quadratic> w(static_cast<std::size_t>(rel));
    Quadratic inv0 = coeffs_[0].inverse();
    w[0] = inv0;
    for (long n = 1; n < rel; ++n) {
        Quadratic acc;
        long upto = std::min<long>(n, static_cast<long>(coeffs_.size()) - 1);
        for (long i = 1; i <= upto; ++i) {
            const Quadratic& u = coeffs_[static_cast<std::size_t>(i)];
            if (!u.is_zero()) acc += u * w[static_cast<std::size_t>(n - i)];
        }
        w[static_cast<std::size_t>(n)] = -(acc * inv0);
    }
    return LaurentSeries(ram_, -lo_, std::move(w), -lo_ + rel);
}

LaurentSeries LaurentSeries::twisted(const Quadratic& step) const {
    if (is_zero() || step.is_one()) return *this;
    LaurentSeries r = *this;
    Quadratic p = step.pow(lo_);
    for (auto& c : r.coeffs_) {
        if (!c.is_zero()) c *= p;
        p *= step;
    }
    return r;
}

LaurentSeries LaurentSeries::truncated(long prec) const {
    if (prec >= prec_) return *this;
    LaurentSeries r = *this;
    r.prec_ = prec;
    r.trim();
    return r;
}

Tri LaurentSeries::compare(const LaurentSeries& o) const {
    if (o.ram_ != ram_) {
        int r = static_cast<int>(lcm_l(ram_, o.ram_));
        return with_ram(r).compare(o.with_ram(r));
    }
    long window = std::min(prec_, o.prec_);
    long start = std::min(lo_, o.lo_);
    bool any_nonzero = false;
    for (long i = start; i < window; ++i) {
        const Quadratic& a = raw(i);
        const Quadratic& b = o.raw(i);
        if (!(a == b)) return Tri::unequal;
        if (!a.is_zero()) any_nonzero = true;
    }
    return any_nonzero ? Tri::equal : Tri::undecidable;
}

std::size_t LaurentSeries::max_height() const {
    std::size_t h = 0;
    for (const auto& c : coeffs_) h = std::max(h, c.height());
    return h;
}

LaurentSeries ls_substitute_power(const LaurentSeries& f, int n) {
    if (n <= 0) throw MathError("substitution power must be positive");
    long g = std::gcd(static_cast<long>(f.ram()), static_cast<long>(n));
    int new_ram = static_cast<int>(f.ram() / g);
    long mult = n / g;
    std::map<long, Quadratic> terms;
    for (long i = f.lo(); i < f.hi(); ++i) {
        const Quadratic& c = f.raw(i);
        if (!c.is_zero()) terms.emplace(i * mult, c);
    }
    return LaurentSeries::from_terms(terms, f.prec() * mult, new_ram);
}

LaurentSeries ls_ramify(const LaurentSeries& f, int n) {
    if (n <= 0) throw MathError("ramification factor must be positive");
    return f.with_ram(f.ram() * n);
}

LaurentSeries ls_invert(const LaurentSeries& f) { return f.inverse(); }

LaurentSeries ls_exp(const LaurentSeries& f) {
    if (!f.is_zero() && f.lo() < 1) throw MathError("exp needs a series of strictly positive valuation");
    long prec = f.prec();
    if (prec <= 0) return LaurentSeries::zero(prec, f.ram());
    // n E_n = sum_k k f_k E_{n-k}
    std::vector<Quadratic> e(static_cast<std::size_t>(prec));
    e[0] = Quadratic(1);
    for (long n = 1; n < prec; ++n) {
        Quadratic acc;
        for (long k = std::max(1L, f.lo()); k <= n && k < f.hi(); ++k) {
            const Quadratic& fk = f.raw(k);
            if (!fk.is_zero()) acc += Quadratic(k) * fk * e[static_cast<std::size_t>(n - k)];
        }
        e[static_cast<std::size_t>(n)] = acc / Quadratic(n);
    }
    std::map<long, Quadratic> terms;
    for (long n = 0; n < prec; ++n) {
        if (!e[static_cast<std::size_t>(n)].is_zero()) terms.emplace(n, e[static_cast<std::size_t>(n)]);
    }
    return LaurentSeries::from_terms(terms, prec, f.ram());
}

LaurentSeries ls_log(const LaurentSeries& f) {
    if (f.prec() <= 0 || f.is_zero() || f.lo() < 0 || !f.raw(0).is_one())
        throw MathError("log needs a series of the form 1 + g with valuation(g) >= 1");
    long prec = f.prec();
    // n L_n = n g_n - sum_{k=1}^{n-1} k L_k g_{n-k}
    std::vector<Quadratic> l(static_cast<std::size_t>(prec));
    for (long n = 1; n < prec; ++n) {
        Quadratic acc = Quadratic(n) * f.raw(n);
        for (long k = 1; k < n; ++k) {
            const Quadratic& g = f.raw(n - k);
            if (!g.is_zero() && !l[static_cast<std::size_t>(k)].is_zero()) acc -= Quadratic(k) * l[static_cast<std::size_t>(k)] * g;
        }
        l[static_cast<std::size_t>(n)] = acc / Quadratic(n);
    }
    std::map<long, Quadratic> terms;
    for (long n = 1; n < prec; ++n) {
        if (!l[static_cast<std::size_t>(n)].is_zero()) terms.emplace(n, l[static_cast<std::size_t>(n)]);
    }
    return LaurentSeries::from_terms(terms, prec, f.ram());
}

std::string to_string(const LaurentSeries& f) {
    std::ostringstream os;
    os << "{ram=" << f.ram() << "; prec=" << f.prec() << "; terms:";
    bool first = true;
    for (long i = f.lo(); i < f.hi(); ++i) {
        const Quadratic& c = f.raw(i);
        if (c.is_zero()) continue;
        os << (first ? " " : ", ") << i << ":" << to_string(c);
        first = false;
    }
    os << "}";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const LaurentSeries& f) { return os << to_string(f); }

}  // namespace qdiff
