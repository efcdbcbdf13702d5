#pragma once

// Truncated formal Laurent series with a tracked precision window.
//
// A series stores coefficients for exponents ord..prec-1 (implied zeros past
// the stored tail). prec == kExact marks a Laurent polynomial known exactly.

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "focklab/diff_field.hpp"
#include "focklab/errors.hpp"
#include "focklab/rational.hpp"

namespace focklab {

inline constexpr int kExact = INT_MAX / 4;

inline int sat_add(int a, int b) {
    if (a >= kExact || b >= kExact) return kExact;
    return std::min(a + b, kExact);
}

inline int sat_mul(int a, int m) {
    if (a >= kExact) return kExact;
    return a * m;
}

/// Principal square root in the scalar field when it exists.
inline std::optional<GaussianRational> exact_sqrt(const GaussianRational& z) {
    if (!z.is_real()) return std::nullopt;
    Rational q = z.re();
    bool negative = sgn(q) < 0;
    if (negative) q = -q;
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn = sqrt(n), rd = sqrt(d);
    Rational r(rn, rd);
    r.canonicalize();
    return negative ? GaussianRational(Rational(0), r) : GaussianRational(r);
}

inline std::optional<RationalFunction> exact_sqrt(const RationalFunction& f) {
    if (!f.is_constant()) return std::nullopt;
    auto s = exact_sqrt(f.constant_value());
    if (!s) return std::nullopt;
    return RationalFunction(*s);
}

template <class S>
class LaurentSeries {
public:
    /// Exact zero.
    LaurentSeries() : ord_(kExact), prec_(kExact) {}

    LaurentSeries(int ord, std::vector<S> coeffs, int prec) : ord_(ord), prec_(prec), c_(std::move(coeffs)) {
        if (prec_ < kExact && static_cast<long>(ord_) + static_cast<long>(c_.size()) > prec_)
            c_.resize(static_cast<std::size_t>(std::max(0, prec_ - ord_)));
        normalize();
    }

    static LaurentSeries zero(int prec) { return LaurentSeries(prec, {}, prec); }
    static LaurentSeries monomial(const S& c, int k, int prec = kExact) { return LaurentSeries(k, {c}, prec); }
    static LaurentSeries constant(const S& c, int prec = kExact) { return monomial(c, 0, prec); }

    static LaurentSeries from_map(const std::map<int, S>& terms, int prec = kExact) {
        if (terms.empty()) return zero(prec);
        int lo = terms.begin()->first;
        int hi = terms.rbegin()->first;
        std::vector<S> c(static_cast<std::size_t>(hi - lo + 1), S(0));
        for (const auto& [k, v] : terms) c[static_cast<std::size_t>(k - lo)] = v;
        return LaurentSeries(lo, std::move(c), prec);
    }

    /// Valuation lower bound: first nonzero stored exponent, or prec if none.
    int ord() const { return ord_; }
    int prec() const { return prec_; }
    bool is_exact() const { return prec_ >= kExact; }
    bool is_zero_in_window() const { return c_.empty(); }
    /// One past the last stored nonzero coefficient.
    int stored_end() const { return c_.empty() ? ord_ : ord_ + static_cast<int>(c_.size()); }

    S coeff(int k) const {
        if (k >= prec_) throw WindowTooNarrow("coefficient of t^" + std::to_string(k) + " beyond prec " + std::to_string(prec_));
        if (k < ord_ || k >= stored_end()) return S(0);
        return c_[static_cast<std::size_t>(k - ord_)];
    }

    S leading_coefficient() const {
        if (c_.empty()) throw NotInvertible("series is zero within its window");
        return c_.front();
    }

    /// (exponent, coefficient) for stored nonzero coefficients.
    std::vector<std::pair<int, S>> terms() const {
        std::vector<std::pair<int, S>> out;
        for (std::size_t j = 0; j < c_.size(); ++j)
            if (!is_zero(c_[j])) out.emplace_back(ord_ + static_cast<int>(j), c_[j]);
        return out;
    }

    LaurentSeries truncated(int prec) const {
        if (prec >= prec_) return *this;
        return LaurentSeries(ord_, c_, prec);
    }

    /// Multiplication by c * t^k.
    LaurentSeries shifted(int k, const S& c = S(1)) const {
        if (is_zero(c)) return zero(sat_add(prec_, k));
        std::vector<S> v = c_;
        for (auto& x : v) x = c * x;
        return LaurentSeries(ord_ >= kExact ? kExact : ord_ + k, std::move(v), sat_add(prec_, k));
    }

    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = combine(*this, o, 1); }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = combine(*this, o, -1); }
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, 1); }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, -1); }
    friend LaurentSeries operator-(const LaurentSeries& a) { return a.shifted(0, S(-1)); }
    friend LaurentSeries operator*(const S& s, const LaurentSeries& a) { return a.shifted(0, s); }

    /// prec(fg) = min(prec f + ord g, prec g + ord f).
    friend LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) {
        const int prec = std::min(sat_add(f.prec_, g.ord_), sat_add(g.prec_, f.ord_));
        if (f.c_.empty() || g.c_.empty()) return zero(prec);
        const int lo = f.ord_ + g.ord_;
        long hi = static_cast<long>(f.stored_end()) + g.stored_end() - 1;
        hi = std::min<long>(hi, prec);
        if (hi <= lo) return zero(prec);
        std::vector<S> c(static_cast<std::size_t>(hi - lo), S(0));
        for (std::size_t i = 0; i < f.c_.size(); ++i) {
            if (is_zero(f.c_[i])) continue;
            for (std::size_t j = 0; j < g.c_.size() && static_cast<long>(i + j) < hi - lo; ++j)
                if (!is_zero(g.c_[j])) c[i + j] += f.c_[i] * g.c_[j];
        }
        return LaurentSeries(lo, std::move(c), prec);
    }
    LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

    /// Exact agreement on exponents below `upto` (both windows must cover it).
    bool agrees_below(const LaurentSeries& o, int upto) const {
        if (upto > prec_ || upto > o.prec_) throw WindowTooNarrow("comparison window exceeds a precision");
        int lo = std::min(ord_, o.ord_);
        for (int k = lo; k < upto; ++k)
            if (coeff(k) != o.coeff(k)) return false;
        return true;
    }

    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        return a.prec_ == b.prec_ && a.c_ == b.c_ && (a.c_.empty() || a.ord_ == b.ord_);
    }

    LaurentSeries map_coefficients(S (*f)(const S&)) const {
        std::vector<S> v = c_;
        for (auto& x : v) x = f(x);
        return LaurentSeries(ord_, std::move(v), prec_);
    }

private:
    static LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, int sign) {
        const int prec = std::min(a.prec_, b.prec_);
        if (a.c_.empty() && b.c_.empty()) return zero(prec);
        int lo = std::min(a.c_.empty() ? kExact : a.ord_, b.c_.empty() ? kExact : b.ord_);
        const int end_a = a.c_.empty() ? lo : a.stored_end();
        const int end_b = b.c_.empty() ? lo : b.stored_end();
        int hi = std::min(std::max(end_a, end_b), prec);
        if (hi <= lo) return zero(prec);
        std::vector<S> c(static_cast<std::size_t>(hi - lo), S(0));
        for (std::size_t j = 0; j < a.c_.size(); ++j) {
            int k = a.ord_ + static_cast<int>(j);
            if (k < hi) c[static_cast<std::size_t>(k - lo)] += a.c_[j];
        }
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            int k = b.ord_ + static_cast<int>(j);
            if (k >= hi) continue;
            if (sign > 0)
                c[static_cast<std::size_t>(k - lo)] += b.c_[j];
            else
                c[static_cast<std::size_t>(k - lo)] -= b.c_[j];
        }
        return LaurentSeries(lo, std::move(c), prec);
    }

    void normalize() {
        std::size_t lead = 0;
        while (lead < c_.size() && is_zero(c_[lead])) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            ord_ = prec_;
            return;
        }
        if (lead) c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        ord_ += static_cast<int>(lead);
        while (is_zero(c_.back())) c_.pop_back();
    }

    int ord_;
    int prec_;
    std::vector<S> c_;
};

/// 1/f. The result window is prec f - 2 ord f; exact input needs `cap`.
template <class S>
LaurentSeries<S> inv(const LaurentSeries<S>& f, std::optional<int> cap = std::nullopt) {
    if (f.is_zero_in_window()) throw NotInvertible("series is zero within its window");
    const int a = f.ord();
    int prec = f.is_exact() ? kExact : f.prec() - 2 * a;
    if (cap) prec = std::min(prec, *cap);
    if (prec >= kExact) throw PrecisionExhausted("inverse of an exact series needs a precision cap");
    const long n = static_cast<long>(prec) + a;
    if (n <= 0) throw PrecisionExhausted("inverse has an empty window");
    const S c0inv = S(1) / f.leading_coefficient();
    std::vector<S> b(static_cast<std::size_t>(n), S(0));
    b[0] = c0inv;
    for (long k = 1; k < n; ++k) {
        S acc(0);
        for (long j = 1; j <= k; ++j) {
            S fj = f.coeff(a + static_cast<int>(j));
            if (!is_zero(fj)) acc += fj * b[static_cast<std::size_t>(k - j)];
        }
        b[static_cast<std::size_t>(k)] = -(c0inv * acc);
    }
    return LaurentSeries<S>(-a, std::move(b), prec);
}

/// Square root with the principal root of the leading coefficient.
template <class S>
LaurentSeries<S> sqrt_unit(const LaurentSeries<S>& f, std::optional<int> cap = std::nullopt) {
    if (f.is_zero_in_window()) throw NotASquare("series is zero within its window");
    const int a = f.ord();
    if (a % 2 != 0) throw NotASquare("odd order " + std::to_string(a));
    auto root = exact_sqrt(f.leading_coefficient());
    if (!root) throw NotASquare("leading coefficient " + to_string(f.leading_coefficient()) + " has no exact root");
    const int b = a / 2;
    int prec = f.is_exact() ? kExact : f.prec() - b;
    if (cap) prec = std::min(prec, *cap);
    if (prec >= kExact) throw PrecisionExhausted("square root of an exact series needs a precision cap");
    const long n = static_cast<long>(prec) - b;
    if (n <= 0) throw PrecisionExhausted("square root has an empty window");
    const S c0inv = S(1) / f.leading_coefficient();
    // f = c0 t^a (1 + h); s = sqrt(1 + h) with s_0 = 1.
    std::vector<S> s(static_cast<std::size_t>(n), S(0));
    s[0] = S(1);
    const S half = S(1) / S(2);
    for (long k = 1; k < n; ++k) {
        S acc = c0inv * f.coeff(a + static_cast<int>(k));
        for (long j = 1; j < k; ++j) acc -= s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
        s[static_cast<std::size_t>(k)] = half * acc;
    }
    for (auto& x : s) x = *root * x;
    return LaurentSeries<S>(b, std::move(s), prec);
}

/// t -> t^m. Negative m needs an exact (Laurent polynomial) input.
template <class S>
LaurentSeries<S> compose_monomial(const LaurentSeries<S>& f, int m) {
    if (m == 0) throw std::invalid_argument("compose_monomial with m = 0");
    if (m < 0 && !f.is_exact()) throw PrecisionExhausted("t -> t^m with m < 0 needs an exact input");
    std::map<int, S> terms;
    for (const auto& [k, c] : f.terms()) terms.emplace(k * m, c);
    return LaurentSeries<S>::from_map(terms, m > 0 ? sat_mul(f.prec(), m) : kExact);
}

/// d/dt
template <class S>
LaurentSeries<S> derivative(const LaurentSeries<S>& f) {
    std::map<int, S> terms;
    for (const auto& [k, c] : f.terms())
        if (k != 0) terms.emplace(k - 1, S(k) * c);
    return LaurentSeries<S>::from_map(terms, f.is_exact() ? kExact : f.prec() - 1);
}

template <class S>
S residue(const LaurentSeries<S>& integrand) {
    if (integrand.prec() <= -1) throw WindowTooNarrow("coefficient of t^-1 is not determined");
    return integrand.coeff(-1);
}

/// Antiderivative with zero constant term.
template <class S>
LaurentSeries<S> integrate(const LaurentSeries<S>& integrand) {
    if (!is_zero(residue(integrand))) throw NonzeroResidue("coefficient of t^-1 is " + to_string(residue(integrand)));
    std::map<int, S> terms;
    for (const auto& [k, c] : integrand.terms()) terms.emplace(k + 1, c / S(k + 1));
    return LaurentSeries<S>::from_map(terms, sat_add(integrand.prec(), 1));
}

/// (f, g) = res(g df)
template <class S>
S residue_form(const LaurentSeries<S>& f, const LaurentSeries<S>& g) {
    return residue(g * derivative(f));
}

/// Vertical derivation g(t) d/dt, plus an optional horizontal part
/// sum_p c_p d/d(param p) that acts on parameter-dependent coefficients.
template <class S>
struct Derivation {
    LaurentSeries<S> g;
    std::map<std::size_t, S> horizontal;

    /// D_k = t^{k+1} d/dt
    static Derivation D(int k) { return {LaurentSeries<S>::monomial(S(1), k + 1), {}}; }
    static Derivation zero() { return {LaurentSeries<S>(), {}}; }
    bool is_vertical() const { return horizontal.empty(); }
};

template <class S>
LaurentSeries<S> apply_derivation(const Derivation<S>& D, const LaurentSeries<S>& f) {
    const LaurentSeries<S> df = derivative(f);
    LaurentSeries<S> out = D.g * df;
    if constexpr (std::is_same_v<S, RationalFunction>) {
        for (const auto& [var, c] : D.horizontal) {
            std::map<int, S> terms;
            for (const auto& [k, a] : f.terms()) terms.emplace(k, c * a.derivative(var));
            out += LaurentSeries<S>::from_map(terms, f.prec());
        }
    } else if (!D.horizontal.empty()) {
        throw std::invalid_argument("horizontal derivation on parameter-free coefficients");
    }
    if (!out.is_exact() && !df.is_zero_in_window() && !D.g.is_zero_in_window() &&
        out.prec() <= D.g.ord() + df.ord())
        throw PrecisionExhausted("derivation result has an empty window");
    return out;
}

/// Contraction <D, h dt> = g h.
template <class S>
LaurentSeries<S> contract(const Derivation<S>& D, const LaurentSeries<S>& form_coeff) {
    return D.g * form_coeff;
}

/// res(<D,alpha> beta) == res(<D,beta> alpha), alpha and beta given as dt-coefficients.
template <class S>
bool selfadjoint_check(const Derivation<S>& D, const LaurentSeries<S>& alpha, const LaurentSeries<S>& beta) {
    return residue(contract(D, alpha) * beta) == residue(contract(D, beta) * alpha);
}

/// Finite direct sum over punctures.
template <class S>
struct SemiLocalSeries {
    std::map<std::string, LaurentSeries<S>> parts;

    S residue_sum() const {
        S acc(0);
        for (const auto& [p, f] : parts) acc += residue(f);
        return acc;
    }
};

template <class S>
SemiLocalSeries<S> derivative(const SemiLocalSeries<S>& f) {
    SemiLocalSeries<S> out;
    for (const auto& [p, s] : f.parts) out.parts.emplace(p, derivative(s));
    return out;
}

template <class S>
std::string to_string(const LaurentSeries<S>& f) {
    std::string out;
    for (const auto& [k, c] : f.terms()) {
        std::string coef = to_string(c);
        std::string mono = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
        std::string term;
        if (mono.empty())
            term = coef;
        else if (c == S(1))
            term = mono;
        else if (c == S(-1))
            term = "-" + mono;
        else
            term = coef + "*" + mono;
        if (out.empty())
            out = term;
        else if (term[0] == '-')
            out += " - " + term.substr(1);
        else
            out += " + " + term;
    }
    if (out.empty()) out = "0";
    if (!f.is_exact()) out += "; prec=" + std::to_string(f.prec());
    return out;
}

/// Parses "c_k*t^k + ...; prec=N" over Q(i). A missing prec means exact.
inline LaurentSeries<GaussianRational> parse_series(std::string_view text) {
    std::string body(text);
    int prec = kExact;
    if (auto semi = body.find(';'); semi != std::string::npos) {
        std::string tail = body.substr(semi + 1);
        body = body.substr(0, semi);
        auto eq = tail.find('=');
        if (eq == std::string::npos || tail.find("prec") == std::string::npos)
            throw ParseError("expected 'prec=N' after ';'");
        prec = std::stoi(tail.substr(eq + 1));
    }
    std::string s;
    for (char c : body)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    // Split into signed terms at top-level + and -, skipping signs inside
    // parentheses and exponent signs (t^-2).
    std::vector<std::string> pieces;
    int depth = 0;
    std::string cur;
    for (std::size_t j = 0; j < s.size(); ++j) {
        char c = s[j];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        bool split = depth == 0 && (c == '+' || c == '-') && !cur.empty() && cur.back() != '^' && cur.back() != '*';
        if (split) {
            pieces.push_back(cur);
            cur.clear();
        }
        cur += c;
    }
    if (!cur.empty()) pieces.push_back(cur);
    std::map<int, GaussianRational> terms;
    for (std::string p : pieces) {
        if (p == "0" || p == "+0" || p == "-0") continue;
        auto tpos = p.find('t');
        int k = 0;
        GaussianRational c(1);
        if (tpos == std::string::npos) {
            c = parse_gaussian(p);
        } else {
            std::string coef = p.substr(0, tpos);
            if (!coef.empty() && coef.back() == '*') coef.pop_back();
            if (coef.empty() || coef == "+")
                c = GaussianRational(1);
            else if (coef == "-")
                c = GaussianRational(-1);
            else
                c = parse_gaussian(coef);
            std::string ex = p.substr(tpos + 1);
            if (ex.empty())
                k = 1;
            else if (ex[0] == '^')
                k = std::stoi(ex.substr(1));
            else
                throw ParseError("bad series term '" + p + "'");
        }
        terms[k] += c;
    }
    return LaurentSeries<GaussianRational>::from_map(terms, prec);
}

}  // namespace focklab
