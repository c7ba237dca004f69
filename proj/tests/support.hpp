#pragma once

// Random generators shared by the test suites. Every generator takes the
// engine explicitly so seeds fully determine the inputs.

#include <random>

#include "qdiff/laurent.hpp"
#include "qdiff/skew.hpp"
#include "qdiff/scalars.hpp"

namespace qdiff::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng, long box = 9) {
    long den = uniform(rng, 1, box);
    return make_rational(uniform(rng, -box, box), den);
}

inline Quadratic random_quadratic(Rng& rng, long d, long box = 9) {
    if (d == 1) return Quadratic(random_rational(rng, box));
    return Quadratic(random_rational(rng, box), random_rational(rng, box), d);
}

inline Quadratic random_nonzero(Rng& rng, long d, long box = 9) {
    for (;;) {
        Quadratic x = random_quadratic(rng, d, box);
        if (!x.is_zero()) return x;
    }
}

// Dense random series with exponents in [lo, lo+len), zeros allowed.
inline LaurentSeries random_series(Rng& rng, long d, long lo, long len, long prec, long box = 5) {
    std::map<long, Quadratic> terms;
    for (long i = lo; i < lo + len && i < prec; ++i) {
        if (uniform(rng, 0, 3) == 0) continue;
        terms[i] = random_quadratic(rng, d, box);
    }
    terms[lo] = random_nonzero(rng, d, box);
    return LaurentSeries::from_terms(terms, prec);
}

// Skew polynomial with degrees in [lo, hi], both ends present.
inline SkewPoly random_skew(Rng& rng, const Context& ctx, long lo, long hi, long vmin = -2, long vmax = 2) {
    SkewPoly x(ctx);
    long d = ctx->field.d;
    for (long i = lo; i <= hi; ++i) {
        if (i != lo && i != hi && uniform(rng, 0, 2) == 0) continue;
        x.set(i, random_series(rng, d, uniform(rng, vmin, vmax), 6, ctx->prec, 4));
    }
    return x;
}

}  // namespace qdiff::testing
