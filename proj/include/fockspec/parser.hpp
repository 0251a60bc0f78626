#ifndef FOCKSPEC_PARSER_HPP
#define FOCKSPEC_PARSER_HPP

// Operator expressions over the generators a, b, L0 and named rational parameters.
//
//   expr     := term (('+' | '-') term)*
//   term     := unary ('*' unary)*
//   unary    := ('-' | '+') unary | factor
//   factor   := atom ('^' uint)?
//   atom     := rational | ident | '(' expr ')'
//   rational := uint ('/' uint)?
//
// Products keep their written order; there is no implicit multiplication, and '/' only
// appears inside a rational literal. Unary minus binds looser than '^'.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fockspec/errors.hpp"
#include "fockspec/rational.hpp"
#include "fockspec/weyl.hpp"

namespace fockspec {

struct OpAst {
    enum class Kind { Sum, Product, Power, Neg, RationalLit, Param, Gen };

    Kind kind;
    std::vector<OpAst> children;
    Rational value;            // RationalLit
    std::string name;          // Param, Gen ("a", "b", "L0")
    std::size_t exponent = 0;  // Power
    std::size_t begin = 0;     // source span [begin, end)
    std::size_t end = 0;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    OpAst parse() {
        skip_ws();
        if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
        OpAst e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    OpAst expr() {
        const std::size_t start = pos_;
        std::vector<OpAst> terms;
        terms.push_back(term());
        while (true) {
            if (peek('+')) {
                ++pos_;
                terms.push_back(term());
            } else if (peek('-')) {
                const std::size_t at = pos_++;
                OpAst t = term();
                OpAst neg{OpAst::Kind::Neg, {}, 0, {}, 0, at, t.end};
                neg.children.push_back(std::move(t));
                terms.push_back(std::move(neg));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return std::move(terms.front());
        return OpAst{OpAst::Kind::Sum, std::move(terms), 0, {}, 0, start, pos_};
    }

    OpAst term() {
        skip_ws();
        const std::size_t start = pos_;
        std::vector<OpAst> factors;
        factors.push_back(unary());
        while (accept('*')) factors.push_back(unary());
        if (peek('/')) throw ParseError("division is only allowed inside a rational literal", pos_);
        if (factors.size() == 1) return std::move(factors.front());
        return OpAst{OpAst::Kind::Product, std::move(factors), 0, {}, 0, start, pos_};
    }

    OpAst unary() {
        skip_ws();
        const std::size_t start = pos_;
        if (accept('-')) {
            OpAst inner = unary();
            OpAst neg{OpAst::Kind::Neg, {}, 0, {}, 0, start, inner.end};
            neg.children.push_back(std::move(inner));
            return neg;
        }
        if (accept('+')) return unary();
        return factor();
    }

    OpAst factor() {
        OpAst base = atom();
        if (!accept('^')) return base;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '-') throw ParseError("negative exponent", pos_);
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw ParseError("exponent must be a non-negative integer", pos_);
        const std::size_t at = pos_;
        std::string digits = read_digits();
        if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == '/'))
            throw ParseError("exponent must be a non-negative integer", at);
        if (digits.size() > 6) throw ParseError("exponent too large", at);
        OpAst pw{OpAst::Kind::Power, {}, 0, {}, std::stoul(digits), base.begin, pos_};
        pw.children.push_back(std::move(base));
        return pw;
    }

    OpAst atom() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ == s_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            OpAst inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = read_digits();
            if (pos_ < s_.size() && s_[pos_] == '.') throw ParseError("decimal literals are not supported", pos_);
            std::string den = "1";
            if (accept('/')) {
                skip_ws();
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    throw ParseError("division is only allowed inside a rational literal", pos_);
                const std::size_t at = pos_;
                den = read_digits();
                if (Integer(den) == 0) throw ParseError("zero denominator", at);
            }
            return OpAst{OpAst::Kind::RationalLit, {}, rat(Integer(num), Integer(den)), {}, 0, start, pos_};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                id += s_[pos_++];
            const bool gen = id == "a" || id == "b" || id == "L0";
            return OpAst{gen ? OpAst::Kind::Gen : OpAst::Kind::Param, {}, 0, id, 0, start, pos_};
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::string read_digits() {
        std::string out;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) out += s_[pos_++];
        return out;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline OpAst parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Normal form of the parsed expression, with parameters substituted from `binds`.
inline WeylElement lower(const OpAst& ast, const Bindings& binds, std::size_t cap = default_degree_cap) {
    switch (ast.kind) {
        case OpAst::Kind::Sum: {
            WeylElement out;
            for (const auto& c : ast.children) out = out + lower(c, binds, cap);
            return out;
        }
        case OpAst::Kind::Product: {
            WeylElement out = lower(ast.children.front(), binds, cap);
            for (std::size_t i = 1; i < ast.children.size(); ++i) out = multiply(out, lower(ast.children[i], binds, cap), cap);
            return out;
        }
        case OpAst::Kind::Power: return power(lower(ast.children.front(), binds, cap), ast.exponent, cap);
        case OpAst::Kind::Neg: return -lower(ast.children.front(), binds, cap);
        case OpAst::Kind::RationalLit: return WeylElement::scalar(ast.value);
        case OpAst::Kind::Param: {
            auto it = binds.find(ast.name);
            if (it == binds.end()) throw UnboundParameter(ast.name);
            return WeylElement::scalar(it->second);
        }
        case OpAst::Kind::Gen:
            if (ast.name == "a") return WeylElement::a();
            if (ast.name == "b") return WeylElement::b();
            return WeylElement::number();
    }
    return {};
}

inline WeylElement parse_element(std::string_view text, const Bindings& binds = {},
                                 std::size_t cap = default_degree_cap) {
    return lower(parse(text), binds, cap);
}

/// Canonical text: terms by descending total degree, then descending a-degree, joined
/// by " + "; each term `c*b^i*a^j` with unit exponents and a unit coefficient elided.
inline std::string print_canonical(const WeylElement& u) {
    if (u.is_zero()) return "0";
    std::vector<std::pair<Monomial, Rational>> terms(u.terms().begin(), u.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
        const auto dx = x.first.b_exp + x.first.a_exp, dy = y.first.b_exp + y.first.a_exp;
        if (dx != dy) return dx > dy;
        return x.first.a_exp > y.first.a_exp;
    });
    auto gen = [](const char* g, std::size_t e) {
        return e == 1 ? std::string(g) : std::string(g) + "^" + std::to_string(e);
    };
    std::string out;
    for (const auto& [m, c] : terms) {
        if (!out.empty()) out += " + ";
        std::vector<std::string> parts;
        const bool has_gen = m.b_exp > 0 || m.a_exp > 0;
        if (c != 1 || !has_gen) parts.push_back(to_string(c));
        if (m.b_exp > 0) parts.push_back(gen("b", m.b_exp));
        if (m.a_exp > 0) parts.push_back(gen("a", m.a_exp));
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
    }
    return out;
}

}  // namespace fockspec

#endif  // FOCKSPEC_PARSER_HPP
