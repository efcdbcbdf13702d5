#pragma once

// Rational functions over Q(i) in named real parameters, with partial
// derivatives and conjugation (parameters are real, coefficients conjugate).

#include <memory>
#include <string>
#include <vector>

#include "focklab/polynomial.hpp"

namespace focklab {

/// Declared parameter names; index k names variable k of every polynomial.
struct ParameterSpace {
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }
    std::size_t index_of(const std::string& name) const {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name) return k;
        throw ParseError("unknown parameter: " + name);
    }
};

/// num/den with gcd(num, den) = 1 and den monic.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(1) {}
    RationalFunction(GaussianRational c) : num_(std::move(c)), den_(1) {}  // NOLINT
    RationalFunction(long c) : RationalFunction(GaussianRational(c)) {}    // NOLINT
    RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}         // NOLINT
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RationalFunction variable(std::size_t var) { return RationalFunction(Polynomial::variable(var)); }

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    GaussianRational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    RationalFunction& operator+=(const RationalFunction& o) {
        if (o.is_zero()) return *this;
        if (den_ == o.den_) {
            num_ += o.num_;
            if (!den_.is_constant()) normalize();
            else if (num_.is_zero()) den_ = Polynomial(1);
            return *this;
        }
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
        normalize();
        return *this;
    }
    RationalFunction& operator-=(const RationalFunction& o) { return *this += -o; }
    RationalFunction& operator*=(const RationalFunction& o) {
        if (is_zero()) return *this;
        if (o.is_zero()) return *this = RationalFunction();
        if (o.is_constant()) {
            num_ = num_.scaled(o.constant_value());
            return *this;
        }
        if (is_constant()) {
            GaussianRational c = constant_value();
            *this = o;
            num_ = num_.scaled(c);
            return *this;
        }
        // Cross-cancel before multiplying to keep the final gcd small.
        Polynomial g1 = gcd(num_, o.den_);
        Polynomial g2 = gcd(o.num_, den_);
        num_ = divide_or_throw(num_, g1) * divide_or_throw(o.num_, g2);
        den_ = divide_or_throw(den_, g2) * divide_or_throw(o.den_, g1);
        fix_sign();
        return *this;
    }
    RationalFunction& operator/=(const RationalFunction& o) { return *this *= o.inverse(); }

    RationalFunction inverse() const {
        if (is_zero()) throw std::domain_error("division by zero rational function");
        RationalFunction r;
        r.num_ = den_;
        r.den_ = num_;
        r.fix_sign();
        return r;
    }

    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }
    friend bool operator<(const RationalFunction& a, const RationalFunction& b) {
        if (a.num_ != b.num_) return a.num_ < b.num_;
        return a.den_ < b.den_;
    }

    RationalFunction conj() const {
        RationalFunction r;
        r.num_ = num_.conj();
        r.den_ = den_.conj();
        r.fix_sign();
        return r;
    }

    RationalFunction derivative(std::size_t var) const {
        Polynomial dn = num_.derivative(var);
        Polynomial dd = den_.derivative(var);
        if (dd.is_zero()) return RationalFunction(dn, den_);
        return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
    }

    GaussianRational evaluate(const std::vector<GaussianRational>& point) const {
        GaussianRational d = den_.evaluate(point);
        if (d.is_zero()) throw std::domain_error("rational function has a pole at the evaluation point");
        return num_.evaluate(point) / d;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (den_.is_constant() && den_.constant_value().is_one()) return num_.str(names);
        return "(" + num_.str(names) + ")/(" + den_.str(names) + ")";
    }

private:
    void fix_sign() {
        if (num_.is_zero()) {
            den_ = Polynomial(1);
            return;
        }
        GaussianRational lc = den_.leading_coefficient();
        if (!lc.is_one()) {
            GaussianRational inv = lc.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(1);
            return;
        }
        if (!den_.is_constant()) {
            Polynomial g = gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = divide_or_throw(num_, g);
                den_ = divide_or_throw(den_, g);
            }
        }
        fix_sign();
    }

    Polynomial num_;
    Polynomial den_;
};

inline RationalFunction conj(const RationalFunction& f) { return f.conj(); }
inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }
inline std::string to_string(const RationalFunction& f) { return f.str(); }

using DiffFieldElement = RationalFunction;

}  // namespace focklab
