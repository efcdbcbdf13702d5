#pragma once

// Exact scalars: rationals, Gaussian rationals Q(i) and pi-tagged scalars.

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "focklab/errors.hpp"

namespace focklab {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Element re + i*im of Q(i). Both parts are kept canonical by GMP.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v) {}  // NOLINT: implicit integer literals are convenient
    GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussianRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational inverse() const {
        if (is_zero()) throw std::domain_error("division by zero in Q(i)");
        Rational n = norm();
        return {re_ / n, -im_ / n};
    }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        if (o.is_real()) {
            re_ *= o.re_;
            im_ *= o.re_;
            return *this;
        }
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_real()) {
            if (sgn(o.re_) == 0) throw std::domain_error("division by zero in Q(i)");
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        return *this *= o.inverse();
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    /// Total order (lexicographic on (re, im)) used only for canonical keys.
    friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
        int c = cmp(a.re_, b.re_);
        if (c != 0) return c < 0;
        return cmp(a.im_, b.im_) < 0;
    }

    std::string str() const {
        if (sgn(im_) == 0) return re_.get_str();
        std::string imag;
        if (im_ == 1)
            imag = "i";
        else if (im_ == -1)
            imag = "-i";
        else
            imag = im_.get_str() + "*i";
        if (sgn(re_) == 0) return imag;
        std::string out = re_.get_str();
        if (imag[0] == '-')
            out += imag;
        else
            out += "+" + imag;
        return "(" + out + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

private:
    Rational re_{0};
    Rational im_{0};
};

inline GaussianRational conj(const GaussianRational& z) { return z.conj(); }
inline Rational conj(const Rational& q) { return q; }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline std::string to_string(const GaussianRational& z) { return z.str(); }

/// Parses "3", "-2/5", "i", "-3/2*i", "(1+2i)", "1-i", "2i".
inline GaussianRational parse_gaussian(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')') s += c;
    if (s.empty()) throw ParseError("empty scalar literal");
    GaussianRational acc;
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
        std::string number = s.substr(start, pos - start);
        bool imaginary = false;
        if (pos < s.size() && s[pos] == '*') ++pos;
        if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'I')) {
            imaginary = true;
            ++pos;
        }
        if (number.empty() && !imaginary) throw ParseError("bad scalar literal: " + std::string(text));
        Rational value(1);
        if (!number.empty()) {
            auto slash = number.find('/');
            if (number.front() == '/' || number.back() == '/' || number.find('/', slash + 1) != std::string::npos ||
                (slash != std::string::npos && number.find_first_not_of('0', slash + 1) == std::string::npos))
                throw ParseError("bad scalar literal: " + std::string(text));
            value = Rational(number);
            value.canonicalize();
        }
        if (sign < 0) value = -value;
        if (imaginary)
            acc += GaussianRational(Rational(0), value);
        else
            acc += GaussianRational(value);
        if (pos < s.size() && s[pos] != '+' && s[pos] != '-')
            throw ParseError("bad scalar literal: " + std::string(text));
    }
    return acc;
}

/// coeff * pi^pi_power. Products are closed; sums require matching powers.
struct PiScaled {
    GaussianRational coeff;
    int pi_power = 0;

    bool is_zero() const { return coeff.is_zero(); }

    friend PiScaled operator*(const PiScaled& a, const PiScaled& b) {
        return {a.coeff * b.coeff, a.pi_power + b.pi_power};
    }
    friend PiScaled operator+(const PiScaled& a, const PiScaled& b) {
        if (a.coeff.is_zero()) return b;
        if (b.coeff.is_zero()) return a;
        if (a.pi_power != b.pi_power) throw std::domain_error("adding scalars with different powers of pi");
        return {a.coeff + b.coeff, a.pi_power};
    }
    friend bool operator==(const PiScaled& a, const PiScaled& b) {
        if (a.coeff.is_zero() && b.coeff.is_zero()) return true;
        return a.pi_power == b.pi_power && a.coeff == b.coeff;
    }

    std::string str() const {
        if (pi_power == 0 || coeff.is_zero()) return coeff.str();
        return coeff.str() + "*pi^" + std::to_string(pi_power);
    }
};

}  // namespace focklab
