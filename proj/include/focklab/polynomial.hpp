#pragma once

// Sparse multivariate polynomials over Q(i) with recursive (primitive PRS) gcd.
//
// Exponent vectors have trailing zeros trimmed, so polynomials in different
// numbers of variables mix freely: a constant has the empty exponent vector.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "focklab/rational.hpp"

namespace focklab {

using Exponents = std::vector<int>;

inline void trim(Exponents& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

inline int exponent_of(const Exponents& e, std::size_t var) { return var < e.size() ? e[var] : 0; }

class Polynomial {
public:
    // Lexicographically greatest monomial first.
    using TermMap = std::map<Exponents, GaussianRational, std::greater<>>;

    Polynomial() = default;
    Polynomial(GaussianRational c) {  // NOLINT
        if (!c.is_zero()) terms_.emplace(Exponents{}, std::move(c));
    }
    Polynomial(long c) : Polynomial(GaussianRational(c)) {}  // NOLINT

    static Polynomial variable(std::size_t var) {
        Exponents e(var + 1, 0);
        e[var] = 1;
        Polynomial p;
        p.terms_.emplace(std::move(e), GaussianRational(1));
        return p;
    }

    static Polynomial monomial(Exponents e, GaussianRational c) {
        trim(e);
        Polynomial p;
        if (!c.is_zero()) p.terms_.emplace(std::move(e), std::move(c));
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    GaussianRational constant_value() const {
        auto it = terms_.find(Exponents{});
        return it == terms_.end() ? GaussianRational() : it->second;
    }
    std::size_t size() const { return terms_.size(); }

    const Exponents& leading_exponents() const { return terms_.begin()->first; }
    const GaussianRational& leading_coefficient() const { return terms_.begin()->second; }

    std::size_t num_vars() const {
        std::size_t n = 0;
        for (const auto& [e, c] : terms_) n = std::max(n, e.size());
        return n;
    }

    int degree_in(std::size_t var) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, exponent_of(e, var));
        return d;
    }

    void add_term(Exponents e, const GaussianRational& c) {
        if (c.is_zero()) return;
        trim(e);
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r;
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        if (a.is_zero() || b.is_zero()) return r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(std::max(ea.size(), eb.size()), 0);
                for (std::size_t k = 0; k < e.size(); ++k) e[k] = exponent_of(ea, k) + exponent_of(eb, k);
                r.add_term(std::move(e), ca * cb);
            }
        }
        return r;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const GaussianRational& s) const {
        Polynomial r;
        if (s.is_zero()) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }
    friend bool operator<(const Polynomial& a, const Polynomial& b) {
        return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
                                            [](const auto& x, const auto& y) {
                                                if (x.first != y.first) return x.first > y.first;
                                                return x.second < y.second;
                                            });
    }

    Polynomial conj() const {
        Polynomial r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
        return r;
    }

    Polynomial derivative(std::size_t var) const {
        Polynomial r;
        for (const auto& [e, c] : terms_) {
            int k = exponent_of(e, var);
            if (k == 0) continue;
            Exponents f = e;
            f[var] -= 1;
            r.add_term(std::move(f), c * GaussianRational(k));
        }
        return r;
    }

    GaussianRational evaluate(const std::vector<GaussianRational>& point) const {
        GaussianRational acc;
        for (const auto& [e, c] : terms_) {
            GaussianRational t = c;
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (e[k] == 0) continue;
                if (k >= point.size()) throw std::invalid_argument("evaluation point has too few coordinates");
                for (int p = 0; p < e[k]; ++p) t *= point[k];
            }
            acc += t;
        }
        return acc;
    }

    /// Coefficients as a polynomial in `var`: degree -> coefficient free of `var`.
    std::map<int, Polynomial> coefficients_in(std::size_t var) const {
        std::map<int, Polynomial> out;
        for (const auto& [e, c] : terms_) {
            int k = exponent_of(e, var);
            Exponents f = e;
            if (var < f.size()) f[var] = 0;
            out[k].add_term(std::move(f), c);
        }
        return out;
    }

    Polynomial leading_coefficient_in(std::size_t var) const {
        auto coeffs = coefficients_in(var);
        return coeffs.rbegin()->second;
    }

    /// Monic in the lexicographic order (zero stays zero).
    Polynomial monic() const {
        if (is_zero()) return *this;
        return scaled(leading_coefficient().inverse());
    }

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    TermMap terms_;
};

inline Polynomial shift_var(const Polynomial& p, std::size_t var, int k) {
    if (k == 0) return p;
    Polynomial r;
    for (const auto& [e, c] : p.terms()) {
        Exponents f = e;
        if (f.size() <= var) f.resize(var + 1, 0);
        f[var] += k;
        r.add_term(std::move(f), c);
    }
    return r;
}

/// Exact quotient a / b; nullopt when b does not divide a.
inline std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Polynomial q;
    Polynomial r = a;
    const Exponents& lb = b.leading_exponents();
    const GaussianRational lcb_inv = b.leading_coefficient().inverse();
    while (!r.is_zero()) {
        const Exponents& lr = r.leading_exponents();
        Exponents e(std::max(lr.size(), lb.size()), 0);
        for (std::size_t k = 0; k < e.size(); ++k) {
            e[k] = exponent_of(lr, k) - exponent_of(lb, k);
            if (e[k] < 0) return std::nullopt;
        }
        Polynomial t = Polynomial::monomial(e, r.leading_coefficient() * lcb_inv);
        q += t;
        r -= t * b;
    }
    return q;
}

inline Polynomial divide_or_throw(const Polynomial& a, const Polynomial& b) {
    auto q = divide_exact(a, b);
    if (!q) throw std::logic_error("inexact polynomial division");
    return *q;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

inline std::optional<std::size_t> first_variable(const Polynomial& a, const Polynomial& b) {
    std::optional<std::size_t> best;
    for (const Polynomial* p : {&a, &b}) {
        for (const auto& [e, c] : p->terms()) {
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (e[k] != 0 && (!best || k < *best)) best = k;
            }
        }
    }
    return best;
}

inline Polynomial monomial_gcd(const Polynomial& a, const Exponents& m) {
    Exponents e = m;
    for (const auto& [ea, c] : a.terms()) {
        e.resize(std::min(e.size(), ea.size()));
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::min(e[k], ea[k]);
    }
    return Polynomial::monomial(e, GaussianRational(1));
}

inline Polynomial content_in(const Polynomial& p, std::size_t var) {
    Polynomial g;
    for (const auto& [k, c] : p.coefficients_in(var)) {
        g = gcd(g, c);
        if (g.is_constant()) return Polynomial(1);
    }
    return g;
}

inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t var) {
    const int db = b.degree_in(var);
    const Polynomial lcb = b.leading_coefficient_in(var);
    while (!a.is_zero() && a.degree_in(var) >= db) {
        const int da = a.degree_in(var);
        Polynomial lca = a.leading_coefficient_in(var);
        a = lcb * a - shift_var(lca, var, da - db) * b;
    }
    return a;
}

inline Polynomial primitive_part(const Polynomial& p, std::size_t var) {
    if (p.is_zero()) return p;
    return divide_or_throw(p, content_in(p, var)).monic();
}

}  // namespace detail

/// Monic gcd over Q(i); gcd(0, 0) = 0.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Polynomial(1);
    if (a.size() == 1) return detail::monomial_gcd(b, a.leading_exponents());
    if (b.size() == 1) return detail::monomial_gcd(a, b.leading_exponents());
    auto var = detail::first_variable(a, b);
    if (a.degree_in(*var) <= 0) return gcd(a, detail::content_in(b, *var));
    if (b.degree_in(*var) <= 0) return gcd(detail::content_in(a, *var), b);
    Polynomial ca = detail::content_in(a, *var);
    Polynomial cb = detail::content_in(b, *var);
    Polynomial c = gcd(ca, cb);
    Polynomial pa = divide_or_throw(a, ca).monic();
    Polynomial pb = divide_or_throw(b, cb).monic();
    if (pa.degree_in(*var) < pb.degree_in(*var)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        Polynomial r = detail::pseudo_remainder(pa, pb, *var);
        pa = std::move(pb);
        pb = r.is_zero() ? r : detail::primitive_part(r, *var);
        if (!pb.is_zero() && pb.degree_in(*var) == 0) {
            pa = Polynomial(1);
            break;
        }
    }
    return (c * detail::primitive_part(pa, *var)).monic();
}

inline std::string Polynomial::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += k < names.size() ? names[k] : "p" + std::to_string(k);
            if (e[k] != 1) mono += "^" + std::to_string(e[k]);
        }
        std::string coef = c.str();
        std::string term;
        if (mono.empty()) {
            term = coef;
        } else if (c.is_one()) {
            term = mono;
        } else if (c == GaussianRational(-1)) {
            term = "-" + mono;
        } else {
            term = coef + "*" + mono;
        }
        if (!first && term[0] != '-') out += "+";
        out += term;
        first = false;
    }
    return out;
}

}  // namespace focklab
