#pragma once

// Recursive-descent parser for rational-function expressions such as
// "(x + i*y)^2 / (2*y) - 3/4".

#include <cctype>
#include <string>
#include <string_view>

#include "focklab/diff_field.hpp"

namespace focklab {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, const ParameterSpace& params) : text_(text), params_(params) {}

    RationalFunction parse() {
        RationalFunction r = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression '" + std::string(text_) + "': " + what + " at offset " +
                                    std::to_string(pos_));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RationalFunction expr() {
        RationalFunction acc = term();
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    RationalFunction term() {
        RationalFunction acc = unary();
        for (;;) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                acc /= unary();
            } else {
                skip();
                // implicit product: "2x", "3i", "2(x+1)"
                if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '('))
                    acc *= power();
                else
                    return acc;
            }
        }
    }

    RationalFunction unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    RationalFunction power() {
        RationalFunction base = atom();
        if (!accept('^')) return base;
        bool paren = accept('(');
        int sign = 1;
        if (accept('-')) sign = -1;
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
        if (paren && !accept(')')) fail("expected ')'");
        RationalFunction r(1);
        for (int k = 0; k < n; ++k) r *= base;
        return sign > 0 ? r : r.inverse();
    }

    RationalFunction atom() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RationalFunction r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            Rational q(std::string(text_.substr(start, pos_ - start)));
            return RationalFunction(GaussianRational(q));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (name == "i" || name == "I") return RationalFunction(GaussianRational::i());
            return RationalFunction::variable(params_.index_of(name));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    const ParameterSpace& params_;
    std::size_t pos_ = 0;
};

inline RationalFunction parse_rational_function(std::string_view text, const ParameterSpace& params) {
    return ExpressionParser(text, params).parse();
}

}  // namespace focklab
