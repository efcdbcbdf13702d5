#pragma once

// Normal-ordered Heisenberg algebra on integer labels and its Fock module.
//
// Generators e_a satisfy e_a e_b - e_b e_a = (a, b) hbar. Words are kept
// sorted by label; labels that kill the vacuum must sort after the ones that
// create, so a sorted word is normally ordered.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "focklab/diff_field.hpp"
#include "focklab/rational.hpp"

namespace focklab {

using Word = std::vector<int>;

struct Monomial {
    Word labels;  // nondecreasing
    int hbar = 0;

    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.labels.size() != b.labels.size()) return a.labels.size() < b.labels.size();
        if (a.labels != b.labels) return a.labels < b.labels;
        return a.hbar < b.hbar;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.labels == b.labels && a.hbar == b.hbar;
    }
};

template <class S>
struct HeisenbergAlgebra {
    std::function<S(int, int)> pairing;  // (e_a, e_b)
    std::function<bool(int)> annihilator;  // e_a v_o = 0
};

template <class S>
class UElement {
public:
    UElement() = default;
    UElement(const S& c) { add(Monomial{}, c); }  // NOLINT

    static UElement generator(int label, const S& c = S(1)) {
        UElement u;
        u.add(Monomial{{label}, 0}, c);
        return u;
    }

    /// Product of generators in the given (not necessarily sorted) order,
    /// rewritten into sorted words.
    static UElement product(const HeisenbergAlgebra<S>& alg, const Word& letters, int hbar = 0, const S& c = S(1)) {
        UElement u;
        u.add(Monomial{{}, hbar}, c);
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) u = left_multiply(alg, *it, u);
        return u;
    }

    const std::map<Monomial, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Monomial& m, const S& c) {
        if (focklab::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (focklab::is_zero(it->second)) terms_.erase(it);
        }
    }

    UElement& operator+=(const UElement& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    UElement& operator-=(const UElement& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    friend UElement operator+(UElement a, const UElement& b) { return a += b; }
    friend UElement operator-(UElement a, const UElement& b) { return a -= b; }
    friend UElement operator-(const UElement& a) {
        UElement r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend UElement operator*(const S& s, const UElement& a) {
        UElement r;
        if (focklab::is_zero(s)) return r;
        for (const auto& [m, c] : a.terms_) r.add(m, s * c);
        return r;
    }
    friend bool operator==(const UElement& a, const UElement& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const UElement& a, const UElement& b) { return !(a == b); }

    /// e_x * u, keeping every word sorted.
    static UElement left_multiply(const HeisenbergAlgebra<S>& alg, int x, const UElement& u) {
        UElement out;
        for (const auto& [m, c] : u.terms_) insert_left(alg, x, m, c, out);
        return out;
    }

    /// Sets hbar = 1 and collects words.
    UElement specialize_hbar() const {
        UElement r;
        for (const auto& [m, c] : terms_) r.add(Monomial{m.labels, 0}, c);
        return r;
    }

    /// Degree in generators mod 2, or -1 when mixed.
    int parity() const {
        int p = -2;
        for (const auto& [m, c] : terms_) {
            int q = static_cast<int>(m.labels.size() % 2);
            if (p == -2)
                p = q;
            else if (p != q)
                return -1;
        }
        return p == -2 ? 0 : p;
    }

    /// Coefficient of the empty word with hbar power 0.
    S scalar_part() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? S(0) : it->second;
    }

    bool is_scalar() const {
        for (const auto& [m, c] : terms_)
            if (!m.labels.empty()) return false;
        return true;
    }

private:
    // e_x P Q with P = labels < x: e_x P = P e_x + sum_k (x, p_k) hbar P\p_k.
    static void insert_left(const HeisenbergAlgebra<S>& alg, int x, const Monomial& m, const S& c, UElement& out) {
        const Word& w = m.labels;
        const std::size_t split = static_cast<std::size_t>(std::lower_bound(w.begin(), w.end(), x) - w.begin());
        Word sorted = w;
        sorted.insert(sorted.begin() + static_cast<long>(split), x);
        out.add(Monomial{std::move(sorted), m.hbar}, c);
        for (std::size_t k = 0; k < split; ++k) {
            if (k > 0 && w[k] == w[k - 1]) continue;
            S p = alg.pairing(x, w[k]);
            if (focklab::is_zero(p)) continue;
            std::size_t mult = 1;
            while (k + mult < split && w[k + mult] == w[k]) ++mult;
            Word rest = w;
            rest.erase(rest.begin() + static_cast<long>(k));
            UElement tail;
            tail.add(Monomial{std::move(rest), m.hbar + 1}, c * p * S(static_cast<long>(mult)));
            // rest is sorted; no further reordering needed.
            out += tail;
        }
    }

    std::map<Monomial, S> terms_;
};

template <class S>
UElement<S> multiply(const HeisenbergAlgebra<S>& alg, const UElement<S>& a, const UElement<S>& b) {
    UElement<S> out;
    for (const auto& [m, c] : a.terms()) {
        UElement<S> acc = c * b;
        for (auto it = m.labels.rbegin(); it != m.labels.rend(); ++it) acc = UElement<S>::left_multiply(alg, *it, acc);
        for (const auto& [mm, cc] : acc.terms()) out.add(Monomial{mm.labels, mm.hbar + m.hbar}, cc);
    }
    return out;
}

template <class S>
UElement<S> commutator(const HeisenbergAlgebra<S>& alg, const UElement<S>& a, const UElement<S>& b) {
    return multiply(alg, a, b) - multiply(alg, b, a);
}

/// Fock vector: sorted multiset of creation labels -> coefficient.
template <class S>
class FockVector {
public:
    FockVector() = default;

    static FockVector vacuum(const S& c = S(1)) {
        FockVector v;
        v.add(Word{}, c);
        return v;
    }
    static FockVector basis(Word w, const S& c = S(1)) {
        std::sort(w.begin(), w.end());
        FockVector v;
        v.add(std::move(w), c);
        return v;
    }

    const std::map<Word, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    S coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? S(0) : it->second;
    }

    void add(Word w, const S& c) {
        if (focklab::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(std::move(w), c);
        if (!inserted) {
            it->second += c;
            if (focklab::is_zero(it->second)) terms_.erase(it);
        }
    }

    FockVector& operator+=(const FockVector& o) {
        for (const auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    FockVector& operator-=(const FockVector& o) {
        for (const auto& [w, c] : o.terms_) add(w, -c);
        return *this;
    }
    friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
    friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
    friend FockVector operator*(const S& s, const FockVector& a) {
        FockVector r;
        if (focklab::is_zero(s)) return r;
        for (const auto& [w, c] : a.terms_) r.add(w, s * c);
        return r;
    }
    friend bool operator==(const FockVector& a, const FockVector& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const FockVector& a, const FockVector& b) { return !(a == b); }

    FockVector map_coefficients(const std::function<S(const S&)>& f) const {
        FockVector r;
        for (const auto& [w, c] : terms_) r.add(w, f(c));
        return r;
    }

private:
    std::map<Word, S> terms_;
};

/// rho(e_a) v. A creator multiplies; an annihilator acts as the derivation
/// e_a (c_1...c_n) v_o = sum_k (a, c_k) c_1..^c_k..c_n v_o.
template <class S>
FockVector<S> apply_generator(const HeisenbergAlgebra<S>& alg, int a, const FockVector<S>& v) {
    FockVector<S> out;
    if (!alg.annihilator(a)) {
        for (const auto& [w, c] : v.terms()) {
            Word n = w;
            n.insert(std::upper_bound(n.begin(), n.end(), a), a);
            out.add(std::move(n), c);
        }
        return out;
    }
    for (const auto& [w, c] : v.terms()) {
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (k > 0 && w[k] == w[k - 1]) continue;
            S p = alg.pairing(a, w[k]);
            if (focklab::is_zero(p)) continue;
            std::size_t mult = 1;
            while (k + mult < w.size() && w[k + mult] == w[k]) ++mult;
            Word n = w;
            n.erase(n.begin() + static_cast<long>(k));
            out.add(std::move(n), c * p * S(static_cast<long>(mult)));
        }
    }
    return out;
}

/// rho(u) v with hbar acting as 1, applying each word right to left.
template <class S>
FockVector<S> rho_apply(const HeisenbergAlgebra<S>& alg, const UElement<S>& u, const FockVector<S>& v) {
    FockVector<S> out;
    for (const auto& [m, c] : u.terms()) {
        FockVector<S> cur = v;
        for (auto it = m.labels.rbegin(); it != m.labels.rend() && !cur.is_zero(); ++it)
            cur = apply_generator(alg, *it, cur);
        out += c * cur;
    }
    return out;
}

/// Second route: multiply u by the creation word of each basis vector in the
/// algebra, then drop words that end in an annihilator and set hbar = 1.
template <class S>
FockVector<S> rho_apply_via_algebra(const HeisenbergAlgebra<S>& alg, const UElement<S>& u, const FockVector<S>& v) {
    FockVector<S> out;
    for (const auto& [w, c] : v.terms()) {
        UElement<S> vw = UElement<S>::product(alg, w, 0, c);
        UElement<S> p = multiply(alg, u, vw);
        for (const auto& [m, cc] : p.terms()) {
            if (!m.labels.empty() && alg.annihilator(m.labels.back())) continue;
            out.add(m.labels, cc);
        }
    }
    return out;
}

template <class S>
std::string to_string(const UElement<S>& u, const std::function<std::string(int)>& name) {
    if (u.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : u.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(c);
        for (int l : m.labels) out += "*" + name(l);
        if (m.hbar != 0) out += "*hbar^" + std::to_string(m.hbar);
    }
    return out;
}

template <class S>
std::string to_string(const FockVector<S>& v, const std::function<std::string(int)>& name) {
    if (v.is_zero()) return "0";
    std::string out;
    for (const auto& [w, c] : v.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(c);
        for (int l : w) out += "*" + name(l);
        out += "*v0";
    }
    return out;
}

}  // namespace focklab
