#include <cctype>

#include "skewalg/expr.hpp"

namespace skewalg {

namespace {

class Parser {
public:
    Parser(const std::string& text, const std::set<std::string>& allowed)
        : text_(text), allowed_(allowed) {}

    Expr run() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        return e;
    }

private:
    const std::string& text_;
    const std::set<std::string>& allowed_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = e + parse_term();
            else if (accept('-')) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (accept('*')) e = e * parse_factor();
            else if (accept('/')) e = e / parse_factor();
            else return e;
        }
    }

    Expr parse_factor() {
        if (accept('-')) return Expr::num(-1) * parse_factor();
        if (accept('+')) return parse_factor();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        while (accept('^')) base = pow(base, parse_exponent());
        return base;
    }

    long long parse_exponent() {
        skip_ws();
        bool parens = accept('(');
        skip_ws();
        bool neg = accept('-');
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer exponent", pos_);
        if (pos_ < text_.size() && (text_[pos_] == '.' ||
                                    std::isalpha(static_cast<unsigned char>(text_[pos_]))))
            throw ParseError("exponent must be an integer literal", pos_);
        long long value;
        try {
            value = std::stoll(text_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            throw ParseError("exponent out of range", start);
        }
        if (parens) expect(')');
        return neg ? -value : value;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    // digits [. digits] [e|E [+-] digits], converted to an exact rational
    Expr parse_number() {
        size_t start = pos_;
        std::string int_part, frac_part;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            int_part.push_back(text_[pos_++]);
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                frac_part.push_back(text_[pos_++]);
        }
        if (int_part.empty() && frac_part.empty())
            throw ParseError("malformed number", start);
        long long exp10 = 0;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t save = pos_++;
            bool neg = false;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                neg = text_[pos_++] == '-';
            size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == dstart) {
                pos_ = save; // 'e' belongs to a following identifier, back off
            } else {
                exp10 = std::stoll(text_.substr(dstart, pos_ - dstart));
                if (neg) exp10 = -exp10;
            }
        }
        BigInt mantissa = BigInt::from_decimal(int_part.empty() ? "0" : int_part);
        for (char d : frac_part) {
            mantissa = mantissa * BigInt(10) + BigInt(d - '0');
        }
        long long scale = exp10 - static_cast<long long>(frac_part.size());
        Rational r(mantissa, BigInt(1));
        if (scale > 0) r = r * Rational(BigInt(10).pow(static_cast<unsigned>(scale)), BigInt(1));
        if (scale < 0) r = r / Rational(BigInt(10).pow(static_cast<unsigned>(-scale)), BigInt(1));
        return Expr::num(r);
    }

    Expr parse_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (peek('(')) {
            auto f = func_from_name(name);
            if (!f) throw ParseError("unknown function: " + name, start);
            expect('(');
            Expr arg = parse_sum();
            expect(')');
            return Expr::call(*f, arg);
        }
        if (!allowed_.count(name))
            throw ParseError("unknown symbol: " + name, start);
        return Expr::sym(name);
    }
};

} // namespace

Expr parse_expr(const std::string& text, const std::set<std::string>& allowed_symbols) {
    return Parser(text, allowed_symbols).run();
}

} // namespace skewalg
