#pragma once

// Text forms for scalars and series.
//
//   rational   "-3/7"
//   quadratic  "3/5+4/5*sqrt(-1)"   (any arithmetic expression in sqrt(d),
//                                     named variables and the unit "i")
//   series     "{ram=2; prec=32; terms: -1:2/3, 0:1, 5:-7/2}"
//              or an expression in z such as "3*z^2 - q*z^-1".

#include <map>
#include <string>

#include "qdiff/laurent.hpp"
#include "qdiff/scalars.hpp"

namespace qdiff {

using ScalarVars = std::map<std::string, Quadratic>;

Quadratic parse_scalar(const std::string& text, const ScalarVars& vars = {});
LaurentSeries parse_series_expr(const std::string& text, long prec, const ScalarVars& vars = {});

// "rational", "quadratic D" / "quadratic:D", "padic P N" / "padic:P:N".
struct FieldSpec {
    enum class Kind { rational, quadratic, padic } kind = Kind::rational;
    long d = 1;
    long p = 0;
    long precision = 0;
    QuadField quad() const { return QuadField{kind == Kind::quadratic ? d : 1}; }
};

FieldSpec parse_field(const std::string& text);
std::string to_string(const FieldSpec& f);

// Strips comments ('#' to end of line) and surrounding whitespace.
std::string strip_line(const std::string& line);

}  // namespace qdiff
