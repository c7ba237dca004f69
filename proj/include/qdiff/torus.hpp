#pragma once

// Quantum torus over Q_p: finitely supported sums of e(lambda), lambda in
// Z^d, with e(lambda) e(mu) = chi(lambda, mu) e(lambda + mu) and Banach norm
// max |a(lambda)| r^lambda.

#include <map>
#include <string>
#include <vector>

#include "qdiff/scalars.hpp"

namespace qdiff {

using Lattice = std::vector<long>;

// chi[i][j] are p-adic units with chi[i][i] = 1 and chi[i][j] chi[j][i] = 1.
struct TorusForm {
    long d = 0;
    long p = 2;
    std::vector<std::vector<Padic>> chi;

    // chi(lambda, mu) = prod_{i<j} chi[i][j]^(lambda_i mu_j - lambda_j mu_i).
    Padic character(const Lattice& lambda, const Lattice& mu) const;
};

// Form from the entries above the diagonal, listed row by row.
TorusForm make_form(long d, long p, const std::vector<Padic>& upper);
void validate(const TorusForm& form);
bool same_form(const TorusForm& x, const TorusForm& y);

struct TorusElement {
    TorusForm form;
    std::map<Lattice, Padic> coeffs;  // no zero entries
};

TorusElement t_zero(const TorusForm& form);
TorusElement t_unit(const TorusForm& form, long precision);
TorusElement t_monomial(const TorusForm& form, const Lattice& lambda, const Padic& c);
// Drops entries indistinguishable from zero.
TorusElement t_make(const TorusForm& form, const std::map<Lattice, Padic>& coeffs);

TorusElement t_add(const TorusElement& f, const TorusElement& g);
TorusElement t_neg(const TorusElement& f);
// Twisted convolution; PrecisionError when a coefficient keeps fewer than
// `floor` digits.
TorusElement t_mul(const TorusElement& f, const TorusElement& g, long floor = Padic::default_floor);
// Same support up to entries zero at precision; coefficients agree modulo the
// smaller absolute precision.
bool t_equal(const TorusElement& f, const TorusElement& g);

using Radius = std::vector<Rational>;

void validate(const Radius& r, long d);
Rational term_norm(const Lattice& lambda, const Padic& c, const Radius& r);
Rational t_norm(const TorusElement& f, const Radius& r);

struct Truncation {
    TorusElement kept;
    Rational tail_bound;
};

// Keeps the terms of norm >= eps; tail_bound is the largest dropped norm.
Truncation t_truncate(const TorusElement& f, const Radius& r, const Rational& eps);
// Term norms in decreasing order.
std::vector<Rational> t_membership_report(const TorusElement& f, const Radius& r);

// "form d p", one "chi i j : <padic>" line per i < j, then
// "lambda_1 ... lambda_d : p^v * u mod p^N" per term.
std::string write_torus(const TorusElement& f);
TorusElement read_torus(const std::string& text);
Radius parse_radius(const std::string& text);

}  // namespace qdiff
