#pragma once

// Recursive-descent parser for arithmetic expressions over a value type
// supplied by an Ops policy: integer, sqrt_of, variable, divide, power and
// literal (a braces series literal).

#include <cctype>
#include <string>

#include "qdiff/errors.hpp"
#include "qdiff/scalars.hpp"

namespace qdiff::detail {

// Replace the typographic minus by '-'.
inline std::string ascii_minus(const std::string& raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw.compare(i, 3, "\xE2\x88\x92") == 0) {
            out += '-';
            i += 2;
        } else {
            out += raw[i];
        }
    }
    return out;
}

template <class Ops>
class ExprParser {
public:
    using V = typename Ops::V;
    ExprParser(const std::string& text, Ops ops) : s_(ascii_minus(text)), ops_(std::move(ops)) {}

    V parse() {
        V v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'", static_cast<long>(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    V expr() {
        V v = term();
        for (;;) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }
    V term() {
        V v = unary();
        for (;;) {
            if (eat('*')) v = v * unary();
            else if (eat('/')) v = ops_.divide(v, unary());
            else return v;
        }
    }
    V unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    long signed_integer() {
        skip();
        bool paren = eat('(');
        skip();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        long v = std::stol(s_.substr(start, pos_ - start));
        if (paren && !eat(')')) fail("expected ')'");
        return neg ? -v : v;
    }
    V power() {
        V base = atom();
        if (eat('^')) return ops_.power(base, signed_integer());
        return base;
    }
    V atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '{') {
            std::size_t close = s_.find('}', pos_);
            if (close == std::string::npos) fail("unterminated '{'");
            std::string lit = s_.substr(pos_, close - pos_ + 1);
            pos_ = close + 1;
            return ops_.literal(lit);
        }
        if (c == '(') {
            ++pos_;
            V v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return ops_.integer(Integer(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "sqrt") {
                if (!eat('(')) fail("expected '(' after sqrt");
                long d = signed_integer();
                if (!eat(')')) fail("expected ')'");
                if (d == 0 || !is_squarefree(d)) fail("sqrt needs a squarefree nonzero radicand");
                return ops_.sqrt_of(d);
            }
            V out = ops_.integer(Integer(0));
            if (!ops_.variable(name, out)) {
                pos_ = start;
                fail("unknown symbol '" + name + "'");
            }
            return out;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
    Ops ops_;
};

}  // namespace qdiff::detail
