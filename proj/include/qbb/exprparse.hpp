#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "qbb/ubase.hpp"

namespace qbb {

/// Recursive-descent parser for the generator expression language:
///
///   expr    := term (('+' | '-') term)*
///   term    := factor (('*' | '/')? factor)*        juxtaposition = product
///   factor  := ('-')* atom ('^' ('-')? integer)?
///   atom    := integer | 'q' | generator | '(' expr ')'
///   gen     := ('e'|'f') '[' node ',' level ']'
///            | 'K' '[' node ']'
///            | 'q' '[' ints (';' ints)? ']'          torus exponents h; d
///
/// Nodes are datum names or 1-based indices. Without an algebra the parser
/// accepts scalars only (used for tau tables).
class ExprParser {
  public:
    explicit ExprParser(std::string src) : src_(std::move(src)), alg_(nullptr) {}
    ExprParser(std::string src, const Algebra& A) : src_(std::move(src)), alg_(&A) {}

    RationalFunction parse_scalar() {
        Value v = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw input_error(err("trailing input"));
        if (!v.is_scalar) throw input_error(err("expected a scalar expression"));
        return v.s;
    }

    AlgebraElement parse_element() {
        if (!alg_) throw input_error("parser has no algebra context");
        Value v = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw input_error(err("trailing input"));
        return v.is_scalar ? alg_->scalar(v.s) : v.a;
    }

  private:
    struct Value {
        bool is_scalar = true;
        RationalFunction s = RationalFunction::one();
        AlgebraElement a;
    };

    Value parse_expr() {
        Value acc = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                char op = take();
                Value rhs = parse_term();
                acc = add(acc, rhs, op == '-');
            } else {
                return acc;
            }
        }
    }

    Value parse_term() {
        Value acc = parse_factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '*' || c == '/') {
                take();
                Value rhs = parse_factor();
                acc = (c == '*') ? mul(acc, rhs) : divide(acc, rhs);
            } else if (c == '(' || std::isalnum(static_cast<unsigned char>(c))) {
                Value rhs = parse_factor();
                acc = mul(acc, rhs);
            } else {
                return acc;
            }
        }
    }

    Value parse_factor() {
        skip_ws();
        if (peek() == '-') {
            take();
            Value v = parse_factor();
            return negate(v);
        }
        Value v = parse_atom();
        skip_ws();
        if (peek() == '^') {
            take();
            skip_ws();
            bool neg = false;
            if (peek() == '-') {
                take();
                neg = true;
            }
            long e = parse_integer();
            v = power(v, neg ? -e : e);
        }
        return v;
    }

    Value parse_atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            take();
            Value v = parse_expr();
            skip_ws();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long n = parse_integer();
            Value v;
            v.s = RationalFunction(n);
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw input_error(err("unexpected character"));
    }

    Value parse_ident() {
        size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        skip_ws();
        if (name == "q" && peek() != '[') {
            Value v;
            v.s = RationalFunction::q_power(1);
            return v;
        }
        if (!alg_) throw input_error(err("generators are not allowed here"));
        if (peek() != '[') throw input_error(err("unknown identifier '" + name + "'"));
        take();
        Value v;
        v.is_scalar = false;
        if (name == "q") {
            // torus exponents: h-part, optionally ';' then d-part
            TorusElement t = TorusElement::zero(alg_->datum().size());
            parse_int_list(t.h);
            skip_ws();
            if (peek() == ';') {
                take();
                parse_int_list(t.d);
            }
            skip_ws();
            expect(']');
            v.a = alg_->torus_gen(t);
            return v;
        }
        if (name == "e" || name == "f" || name == "K") {
            int node = parse_node();
            if (name == "K") {
                skip_ws();
                expect(']');
                v.a = alg_->k_gen(node, 1);
                return v;
            }
            skip_ws();
            expect(',');
            long level = parse_integer();
            skip_ws();
            expect(']');
            v.a = (name == "e") ? alg_->e_gen(node, static_cast<int>(level))
                                : alg_->f_gen(node, static_cast<int>(level));
            return v;
        }
        throw input_error(err("unknown identifier '" + name + "'"));
    }

    int parse_node() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != ',' && src_[pos_] != ']') ++pos_;
        std::string token = src_.substr(start, pos_ - start);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
            token.pop_back();
        const auto& names = alg_->datum().names;
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == token) return static_cast<int>(i);
        try {
            size_t used = 0;
            long idx = std::stol(token, &used);
            if (used == token.size() && idx >= 1 && idx <= alg_->datum().size())
                return static_cast<int>(idx - 1);
        } catch (...) {
        }
        throw input_error(err("unknown node '" + token + "'"));
    }

    void parse_int_list(std::vector<long long>& out) {
        for (size_t i = 0; i < out.size(); ++i) {
            skip_ws();
            bool neg = false;
            if (peek() == '-') {
                take();
                neg = true;
            }
            long v = parse_integer();
            out[i] = neg ? -v : v;
            if (i + 1 < out.size()) {
                skip_ws();
                expect(',');
            }
        }
    }

    long parse_integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw input_error(err("expected an integer"));
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            v = v * 10 + (src_[pos_++] - '0');
        return v;
    }

    // ---- value arithmetic ----------------------------------------------

    Value mul(const Value& x, const Value& y) const {
        Value r;
        if (x.is_scalar && y.is_scalar) {
            r.s = x.s * y.s;
            return r;
        }
        r.is_scalar = false;
        if (x.is_scalar)
            r.a = x.s * y.a;
        else if (y.is_scalar)
            r.a = y.s * x.a;
        else
            r.a = alg_->multiply(x.a, y.a);
        return r;
    }

    Value add(const Value& x, const Value& y, bool subtract) const {
        Value r;
        if (x.is_scalar && y.is_scalar) {
            r.s = subtract ? x.s - y.s : x.s + y.s;
            return r;
        }
        r.is_scalar = false;
        AlgebraElement xa = x.is_scalar ? alg_->scalar(x.s) : x.a;
        AlgebraElement ya = y.is_scalar ? alg_->scalar(y.s) : y.a;
        r.a = subtract ? xa - ya : xa + ya;
        return r;
    }

    Value divide(const Value& x, const Value& y) const {
        if (!y.is_scalar) {
            // allow division by an invertible single torus term
            if (alg_ && y.a.terms.size() == 1) {
                const auto& [t, c] = *y.a.terms.begin();
                if (t.f.empty() && t.e.empty()) {
                    Value inv;
                    inv.is_scalar = false;
                    AlgebraElement e;
                    e.add(Triple{{}, -t.t, {}}, c.inverse());
                    inv.a = e;
                    return mul(x, inv);
                }
            }
            throw input_error("division by a non-scalar expression");
        }
        if (y.s.is_zero()) throw input_error("division by zero");
        Value r = x;
        if (r.is_scalar)
            r.s = r.s / y.s;
        else
            r.a = y.s.inverse() * r.a;
        return r;
    }

    Value negate(const Value& x) const {
        Value r = x;
        if (r.is_scalar)
            r.s = RationalFunction::zero() - r.s;
        else
            r.a = RationalFunction(-1) * r.a;
        return r;
    }

    Value power(const Value& x, long e) const {
        Value r;
        if (x.is_scalar) {
            r.s = x.s.pow(e);
            return r;
        }
        r.is_scalar = false;
        if (e >= 0) {
            r.a = alg_->one();
            for (long k = 0; k < e; ++k) r.a = alg_->multiply(r.a, x.a);
            return r;
        }
        // negative powers only for invertible single torus terms
        if (x.a.terms.size() == 1) {
            const auto& [t, c] = *x.a.terms.begin();
            if (t.f.empty() && t.e.empty()) {
                AlgebraElement inv;
                inv.add(Triple{{}, -t.t, {}}, c.inverse());
                r.a = alg_->one();
                for (long k = 0; k < -e; ++k) r.a = alg_->multiply(r.a, inv);
                return r;
            }
        }
        throw input_error("negative power of a non-invertible expression");
    }

    // ---- lexer helpers ----------------------------------------------------

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char take() { return src_[pos_++]; }
    void expect(char c) {
        if (peek() != c) throw input_error(err(std::string("expected '") + c + "'"));
        take();
    }
    std::string err(const std::string& msg) const {
        return "parse error at offset " + std::to_string(pos_) + ": " + msg;
    }

    std::string src_;
    size_t pos_ = 0;
    const Algebra* alg_;
};

inline RationalFunction parse_rational_function(const std::string& src) {
    ExprParser p(src);
    return p.parse_scalar();
}

} // namespace qbb
