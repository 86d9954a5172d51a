#include <cctype>

#include "jkit/scalar.hpp"

namespace jkit {

namespace {

class Parser {
  public:
    Parser(const std::string& text, const std::vector<Var>& vars) : text_(text), vars_(vars) {}

    Scalar parse() {
        Scalar s = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return s;
    }

  private:
    const std::string& text_;
    const std::vector<Var>& vars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Scalar expr() {
        bool neg = eat('-');
        Scalar s = term();
        if (neg) s = -s;
        for (;;) {
            if (eat('+'))
                s = s + term();
            else if (eat('-'))
                s = s - term();
            else
                return s;
        }
    }

    Scalar term() {
        Scalar s = factor();
        for (;;) {
            if (eat('*')) {
                s = s * factor();
            } else if (eat('/')) {
                std::size_t at = pos_;
                Scalar d = factor();
                if (d.is_zero()) throw ParseError("division by zero", at);
                s = s / d;
            } else {
                return s;
            }
        }
    }

    Scalar factor() {
        Scalar b = base();
        if (eat('^')) {
            std::size_t at = pos_;
            bool neg = eat('-');
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("expected integer exponent", at);
            long e = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                e = e * 10 + (text_[pos_++] - '0');
            if (e > 64) throw ParseError("exponent too large", at);
            if (neg && b.is_zero()) throw ParseError("zero to a negative power", at);
            b = b.pow(static_cast<int>(neg ? -e : e));
        }
        return b;
    }

    Scalar base() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class n(0);
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                n = n * 10 + (text_[pos_++] - '0');
            return Scalar(Rat(n));
        }
        if (c == '(') {
            ++pos_;
            Scalar s = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return s;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos_;
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                name += text_[pos_++];
            if (name == "exp") {
                if (!eat('(')) throw ParseError("expected '(' after exp", pos_);
                std::size_t arg_at = pos_;
                Scalar arg = expr();
                if (!eat(')')) throw ParseError("expected ')'", pos_);
                return exp_of(arg, arg_at);
            }
            for (Var v : vars_)
                if (v.name() == name) return Scalar::var(v);
            throw ParseError("unknown variable " + name, at);
        }
        throw ParseError("unexpected character", pos_);
    }

    // Validates linearity of the exp argument and builds the monomial.
    static Scalar exp_of(const Scalar& arg, std::size_t at) {
        if (arg.is_zero()) return Scalar(1);
        if (!arg.den().is_constant() || arg.den().leading_coeff() != 1 ||
            !arg.den().leading_monomial().is_one())
            throw ParseError("exp of a non-linear argument", at);
        std::vector<std::pair<Var, Rat>> lin;
        for (const auto& [m, c] : arg.num().terms) {
            if (m.has_expo() || m.powers.size() != 1 || m.powers[0].second != 1)
                throw ParseError("exp of a non-linear argument", at);
            lin.emplace_back(m.powers[0].first, c);
        }
        return Scalar::exp_linform(lin);
    }
};

}  // namespace

Scalar parse_scalar(const std::string& text, const std::vector<Var>& chart_vars) {
    return Parser(text, chart_vars).parse();
}

}  // namespace jkit
