#include <sstream>

#include "qdiff/text.hpp"
#include "qmod_internal.hpp"

namespace qdiff {

namespace {

constexpr long default_orbit_bound = 24;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string where(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
}

bool is_integer(const std::string& s) {
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

long to_long(const std::string& s, std::size_t line, std::size_t col) {
    if (!is_integer(s)) throw ParseError(where(line, col) + "expected an integer, got '" + s + "'");
    try {
        return std::stol(s);
    } catch (const std::out_of_range&) {
        throw ParseError(where(line, col) + "integer out of range '" + s + "'");
    }
}

}  // namespace

std::string write_module(const QDiffModule& m) {
    std::ostringstream os;
    os << "dim " << m.dim() << "\n";
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? " | " : "") << to_string(m.phi(i, j));
        os << "\n";
    }
    return os.str();
}

QDiffModule read_module(const std::string& text, const Context& ctx, const ScalarVars& vars0) {
    ScalarVars vars = vars0;
    vars.emplace("q", ctx->q);
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0, dim = 0, row = 0;
    bool have_dim = false;
    SMatrix phi;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = strip_line(raw);
        if (s.empty()) continue;
        if (!have_dim) {
            std::istringstream hs(s);
            std::string word, n, extra;
            hs >> word >> n;
            if (word != "dim" || (hs >> extra)) throw ParseError(where(line, 1) + "expected 'dim N'");
            long d = to_long(n, line, raw.find(n) + 1);
            if (d <= 0) throw ParseError(where(line, raw.find(n) + 1) + "dimension must be positive");
            dim = static_cast<std::size_t>(d);
            phi = SMatrix(dim, dim);
            have_dim = true;
            continue;
        }
        if (row == dim) throw ParseError(where(line, 1) + "more than " + std::to_string(dim) + " matrix rows");
        auto cells = split(s, '|');
        if (cells.size() != dim)
            throw ParseError(where(line, 1) + "expected " + std::to_string(dim) + " entries separated by '|', got " +
                             std::to_string(cells.size()));
        std::size_t offset = raw.find(s.substr(0, 1));
        std::size_t col = offset;
        for (std::size_t j = 0; j < dim; ++j) {
            try {
                phi(row, j) = parse_series_expr(cells[j], ctx->prec, vars);
            } catch (const ParseError& e) {
                throw ParseError(where(line, col + (e.column() > 0 ? e.column() : 1)) + e.detail());
            }
            col += cells[j].size() + 1;
        }
        ++row;
    }
    if (!have_dim) throw ParseError(where(line + 1, 1) + "missing 'dim N' header");
    if (row != dim) throw ParseError(where(line + 1, 1) + "expected " + std::to_string(dim) + " matrix rows, got " +
                                     std::to_string(row));
    return make_module(ctx, std::move(phi));
}

std::string write_labels(const std::vector<IndecompLabel>& labels) {
    std::ostringstream os;
    for (const auto& l : labels) {
        os << to_string(l);
        if (l.orbit_bound != default_orbit_bound) os << " " << l.orbit_bound;
        os << "\n";
    }
    return os.str();
}

std::vector<IndecompLabel> read_labels(const std::string& text, const ScalarVars& vars, long default_bound) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    std::vector<IndecompLabel> out;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = strip_line(raw);
        if (s.empty()) continue;
        std::istringstream ts(s);
        std::vector<std::string> tok;
        for (std::string t; ts >> t;) tok.push_back(t);
        if (tok.size() < 4) throw ParseError(where(line, 1) + "expected 'n k l a [M]'");
        auto col = [&](std::size_t i) { return raw.find(tok[i]) + 1; };
        IndecompLabel l;
        l.n = to_long(tok[0], line, col(0));
        l.k = to_long(tok[1], line, col(1));
        l.l = to_long(tok[2], line, col(2));
        std::size_t last = tok.size();
        l.orbit_bound = default_bound;
        if (tok.size() >= 5 && is_integer(tok.back())) {
            l.orbit_bound = to_long(tok.back(), line, col(tok.size() - 1));
            --last;
        }
        std::string a;
        for (std::size_t i = 3; i < last; ++i) a += tok[i];
        try {
            l.a = parse_scalar(a, vars);
        } catch (const ParseError& e) {
            throw ParseError(where(line, col(3)) + e.detail());
        }
        try {
            validate(l);
        } catch (const MathError& e) {
            throw ParseError(where(line, 1) + e.what());
        }
        out.push_back(l);
    }
    return out;
}

}  // namespace qdiff
