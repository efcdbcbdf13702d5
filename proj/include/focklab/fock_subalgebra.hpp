#pragma once

// Subalgebras A of K = R((t)) of Fock type, the symplectic quotient
// H_A = A^perp / A and the covariant space F(K,O)_A.
//
// Everything is truncated: A is known as a basis complete up to a pole-order
// bound, series are known below a window, and every result records both.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "focklab/laurent.hpp"
#include "focklab/matrix.hpp"
#include "focklab/oscillator.hpp"

namespace focklab {

/// Reduced row echelon form of series on exponents [lo, prec), pivot = lowest
/// exponent; rows come back sorted by pivot with leading coefficient 1.
template <class S>
std::vector<LaurentSeries<S>> echelon_series(const std::vector<LaurentSeries<S>>& in, int lo, int prec) {
    const bool exact = prec >= kExact;
    if (exact) {
        prec = lo;
        for (const auto& f : in) prec = std::max(prec, f.stored_end());
    }
    const auto n = static_cast<std::size_t>(std::max(prec - lo, 0));
    std::vector<std::vector<S>> rows;
    for (const auto& f : in) {
        if (!f.is_zero_in_window() && f.ord() < lo) throw std::invalid_argument("series below echelon range");
        std::vector<S> r(n, S(0));
        for (std::size_t k = 0; k < n; ++k) r[k] = f.coeff(lo + static_cast<int>(k));
        rows.push_back(std::move(r));
    }
    std::size_t next = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < n && next < rows.size(); ++col) {
        std::size_t p = next;
        while (p < rows.size() && is_zero(rows[p][col])) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[next]);
        const S inv = S(1) / rows[next][col];
        for (auto& x : rows[next]) x = x * inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == next || is_zero(rows[r][col])) continue;
            const S c = rows[r][col];
            for (std::size_t k = col; k < n; ++k) rows[r][k] -= c * rows[next][k];
        }
        pivots.push_back(col);
        ++next;
    }
    std::vector<LaurentSeries<S>> out;
    for (std::size_t r = 0; r < next; ++r) {
        std::map<int, S> t;
        for (std::size_t k = 0; k < n; ++k)
            if (!is_zero(rows[r][k])) t[lo + static_cast<int>(k)] = rows[r][k];
        out.push_back(LaurentSeries<S>::from_map(t, exact ? kExact : prec));
    }
    return out;
}

struct FockTypeCertificate {
    int degree_bound = 0;  // A is complete for pole orders <= this
    int window = 0;        // coefficients are exact below t^window
    int perp_pole = 0;     // A^perp computed on poles <= perp_pole
    int perp_window = 0;
    bool ft1_evidence = false;  // basis independent and products stay in A
    bool ft2_meets_O = false;   // A cap O = R
    bool ft2_stable = false;    // no gap in the upper half of the degree range
    int rank = 0;               // rank of K / (A + O)
    std::vector<int> gaps;
    bool ft3 = false;
    std::vector<bool> ft4_preserves;  // D(A) in A, per supplied derivation
    std::vector<bool> ft4;            // D(A^perp) in A
    bool fock_type() const {
        return ft1_evidence && ft2_meets_O && ft2_stable && ft3 &&
               std::all_of(ft4.begin(), ft4.end(), [](bool b) { return b; });
    }
};

template <class S>
class FockSubalgebra {
public:
    using Series = LaurentSeries<S>;

    /// The algebra spanned by monomials in the generators, echelonized and
    /// kept up to pole order degree_bound. Monomials up to degree_bound +
    /// slack are formed so that cancellations can surface lower poles.
    static FockSubalgebra generate(const std::vector<Series>& generators, int degree_bound, int slack = 4) {
        for (const auto& g : generators)
            if (g.is_zero_in_window() || g.ord() >= 0)
                throw std::invalid_argument("generators must have a pole at t = 0");
        const int top = degree_bound + slack;
        std::vector<Series> monomials{Series::constant(S(1))};
        std::vector<int> poles{0};
        // breadth-first over monomials, each extended by generators of index >= last
        std::vector<std::size_t> last{0};
        for (std::size_t k = 0; k < monomials.size(); ++k)
            for (std::size_t j = last[k]; j < generators.size(); ++j) {
                const int p = poles[k] - generators[j].ord();
                if (p > top) continue;
                monomials.push_back(monomials[k] * generators[j]);
                poles.push_back(p);
                last.push_back(j);
            }
        int prec = kExact;
        for (const auto& m : monomials) prec = std::min(prec, m.prec());
        auto ech = echelon_series(monomials, -top, prec);
        std::vector<Series> basis;
        for (auto& f : ech)
            if (-f.ord() <= degree_bound) basis.push_back(std::move(f));
        return FockSubalgebra(std::move(basis), degree_bound, generators);
    }

    /// From an explicit basis that is complete up to degree_bound.
    static FockSubalgebra from_basis(const std::vector<Series>& basis, int degree_bound) {
        int prec = kExact, lo = 0;
        for (const auto& f : basis) {
            prec = std::min(prec, f.prec());
            if (!f.is_zero_in_window()) lo = std::min(lo, f.ord());
        }
        std::vector<Series> all{Series::constant(S(1))};
        all.insert(all.end(), basis.begin(), basis.end());
        return FockSubalgebra(echelon_series(all, lo, prec), degree_bound, basis);
    }

    const std::vector<Series>& basis() const { return basis_; }
    const std::vector<Series>& generators() const { return generators_; }
    int degree_bound() const { return degree_bound_; }
    int window() const { return window_; }

    std::vector<int> pole_orders() const {
        std::vector<int> p;
        for (const auto& f : basis_) p.push_back(-f.ord());
        return p;
    }

    std::vector<int> gaps() const {
        std::set<int> poles;
        for (const auto& f : basis_) poles.insert(-f.ord());
        std::vector<int> g;
        for (int k = 1; k <= degree_bound_; ++k)
            if (!poles.count(k)) g.push_back(k);
        return g;
    }

    /// Basis element with leading term t^-k, if any.
    const Series* with_pole(int k) const {
        for (const auto& f : basis_)
            if (-f.ord() == k) return &f;
        return nullptr;
    }

    /// f minus the A-combination clearing every principal part and constant
    /// that A can clear, scanning upward from the lowest exponent.
    Series reduce(Series f) const {
        if (!f.is_zero_in_window() && -f.ord() > degree_bound_)
            throw WindowTooNarrow("pole order " + std::to_string(-f.ord()) + " above degree bound " +
                                  std::to_string(degree_bound_));
        for (int e = f.is_zero_in_window() ? 1 : f.ord(); e <= 0; ++e) {
            const S c = f.coeff(e);
            if (is_zero(c)) continue;
            const Series* a = with_pole(-e);
            if (!a) continue;
            f -= Series::monomial(c, 0) * *a;
        }
        return f;
    }

    /// Membership in A, decided on coefficients below min(prec of f, window).
    bool contains(const Series& f) const { return reduce(f).is_zero_in_window(); }

    FockTypeCertificate certify(const std::vector<Derivation<S>>& derivations, int perp_pole, int perp_window) const;

private:
    FockSubalgebra(std::vector<Series> basis, int degree_bound, std::vector<Series> generators)
        : basis_(std::move(basis)), generators_(std::move(generators)), degree_bound_(degree_bound) {
        std::reverse(basis_.begin(), basis_.end());
        window_ = kExact;
        for (const auto& f : basis_) window_ = std::min(window_, f.prec());
    }

    std::vector<Series> basis_;  // echelon, increasing pole order, basis_[0] = 1
    std::vector<Series> generators_;
    int degree_bound_ = 0;
    int window_ = kExact;
};

/// Basis of A^perp among series with poles <= pole_bound, exact below
/// t^window, in reduced echelon form by leading exponent.
template <class S>
std::vector<LaurentSeries<S>> compute_perp(const FockSubalgebra<S>& a, int pole_bound, int window) {
    if (a.degree_bound() < window - 1)
        throw WindowTooNarrow("A^perp below t^" + std::to_string(window) + " needs A up to pole " +
                              std::to_string(window - 1));
    if (a.window() <= pole_bound)
        throw WindowTooNarrow("A is known below t^" + std::to_string(a.window()) + ", pairing needs t^" +
                              std::to_string(pole_bound));
    // (f, a) = sum_k k f_k a_{-k}; unknowns f_k for k in [-pole_bound, window)
    const auto n = static_cast<std::size_t>(pole_bound + window);
    std::vector<const LaurentSeries<S>*> rows;
    for (const auto& f : a.basis())
        if (-f.ord() >= 1 && -f.ord() <= window - 1) rows.push_back(&f);
    std::vector<std::vector<S>> kernel;
    if (rows.empty()) {
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<S> v(n, S(0));
            v[c] = S(1);
            kernel.push_back(v);
        }
    } else {
        Matrix<S> m(rows.size(), n);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < n; ++c) {
                const int k = static_cast<int>(c) - pole_bound;
                if (k != 0) m(r, c) = S(static_cast<long>(k)) * rows[r]->coeff(-k);
            }
        kernel = kernel_basis(m);
    }
    std::vector<LaurentSeries<S>> sols;
    for (const auto& v : kernel) {
        std::map<int, S> t;
        for (std::size_t c = 0; c < n; ++c)
            if (!is_zero(v[c])) t[static_cast<int>(c) - pole_bound] = v[c];
        sols.push_back(LaurentSeries<S>::from_map(t, window));
    }
    return echelon_series(sols, -pole_bound, window);
}

template <class S>
FockTypeCertificate FockSubalgebra<S>::certify(const std::vector<Derivation<S>>& derivations, int perp_pole,
                                               int perp_window) const {
    FockTypeCertificate c;
    c.degree_bound = degree_bound_;
    c.window = window_;
    c.perp_pole = perp_pole;
    c.perp_window = perp_window;

    // FT1 surrogate: independent per degree (echelon) and closed under products
    c.ft1_evidence = true;
    for (std::size_t i = 0; i < basis_.size() && c.ft1_evidence; ++i)
        for (std::size_t j = i; j < basis_.size(); ++j) {
            if (-basis_[i].ord() - basis_[j].ord() > degree_bound_) continue;
            if (!contains(basis_[i] * basis_[j])) {
                c.ft1_evidence = false;
                break;
            }
        }

    int regular = 0;
    for (const auto& f : basis_)
        if (f.ord() >= 0) ++regular;
    c.ft2_meets_O = regular == 1 && basis_.front() == Series::constant(S(1)).truncated(basis_.front().prec());
    c.gaps = gaps();
    c.rank = static_cast<int>(c.gaps.size());
    c.ft2_stable = c.gaps.empty() || c.gaps.back() <= degree_bound_ / 2;

    c.ft3 = true;
    for (std::size_t i = 0; i < basis_.size() && c.ft3; ++i)
        for (std::size_t j = i + 1; j < basis_.size(); ++j)
            if (!is_zero(residue_form(basis_[i], basis_[j]))) {
                c.ft3 = false;
                break;
            }

    std::vector<Series> perp = compute_perp(*this, perp_pole, perp_window);
    for (const auto& d : derivations) {
        bool preserves = true, maps_perp = true;
        for (const auto& f : basis_) {
            if (-f.ord() - d.g.ord() + 1 > degree_bound_) continue;
            if (!contains(apply_derivation(d, f))) preserves = false;
        }
        for (const auto& f : perp)
            if (!contains(apply_derivation(d, f))) maps_perp = false;
        c.ft4_preserves.push_back(preserves);
        c.ft4.push_back(preserves && maps_perp);
    }
    return c;
}

// --- the quotient H_A ---------------------------------------------------------

template <class S>
struct QuotientSymplectic {
    int genus = 0;
    int window = 0;
    std::vector<int> gaps;
    std::vector<LaurentSeries<S>> negative;  // e_-1 .. e_-g
    std::vector<LaurentSeries<S>> positive;  // e_1 .. e_g, in m

    const LaurentSeries<S>& element(int i) const {
        return i > 0 ? positive.at(static_cast<std::size_t>(i - 1)) : negative.at(static_cast<std::size_t>(-i - 1));
    }

    /// Residue Gram in the order e_-g..e_-1, e_1..e_g.
    Matrix<S> gram() const {
        std::vector<int> idx;
        for (int i = genus; i >= 1; --i) idx.push_back(-i);
        for (int i = 1; i <= genus; ++i) idx.push_back(i);
        Matrix<S> m(idx.size(), idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c) m(r, c) = residue_form(element(idx[r]), element(idx[c]));
        return m;
    }
};

/// Lifts e_-1..e_-g of a basis of K/(A+O) with A + sum R e_-i isotropic and
/// e_1..e_g in m, orthogonal to A, dual to them. Preferred negative lifts are
/// used when given (they must lie in A^perp).
template <class S>
QuotientSymplectic<S> build_quotient(const FockSubalgebra<S>& a, int pole_bound, int window,
                                     const std::vector<LaurentSeries<S>>& preferred = {}) {
    using Series = LaurentSeries<S>;
    QuotientSymplectic<S> q;
    q.window = window;
    q.gaps = a.gaps();
    q.genus = static_cast<int>(q.gaps.size());
    const auto g = q.gaps.size();
    if (g && q.gaps.back() > pole_bound) throw WindowTooNarrow("gap above the pole bound");
    std::vector<Series> perp = compute_perp(a, pole_bound, window);

    std::vector<Series> neg, pos;
    for (const auto& f : perp) {
        if (f.ord() > 0) pos.push_back(f);
        else if (!a.with_pole(-f.ord()) && f.ord() < 0) neg.push_back(f);
    }
    std::reverse(neg.begin(), neg.end());  // e_-i lifts the i-th gap
    if (pos.size() != g || neg.size() != g)
        throw NoIsotropicLift("A^perp / A has rank " + std::to_string(pos.size() + neg.size()) + ", expected " +
                              std::to_string(2 * g));
    auto in_perp_span = [&](const Series& f) {
        // f in A^perp within the window: reduce by the echelon basis of A^perp
        Series r = f.truncated(window);
        for (const auto& p : perp) {
            const S c = r.is_zero_in_window() ? S(0) : r.coeff(p.ord());
            if (!is_zero(c)) r -= Series::monomial(c, 0) * p;
        }
        return r.truncated(window).is_zero_in_window();
    };
    if (!preferred.empty()) {
        if (preferred.size() != g) throw NoIsotropicLift("wrong number of preferred lifts");
        // gap coefficients after reduction mod A must be invertible
        Matrix<S> lead(g, g);
        for (std::size_t i = 0; i < g; ++i) {
            if (!in_perp_span(preferred[i])) throw NoIsotropicLift("preferred lift not orthogonal to A");
            Series r = a.reduce(preferred[i]);
            for (std::size_t j = 0; j < g; ++j) lead(i, j) = r.coeff(-q.gaps[j]);
        }
        if (is_zero(determinant(lead))) throw NoIsotropicLift("preferred lifts do not span K/(A+O)");
        neg.clear();
        for (const auto& p : preferred) neg.push_back(p.truncated(window));
    }

    // isotropy: e_-i += sum_j s_ij f_j with s = N G^-T / 2
    Matrix<S> n(g, g), gm(g, g);
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            n(i, j) = residue_form(neg[i], neg[j]);
            gm(i, j) = residue_form(neg[i], pos[j]);
        }
    if (g && is_zero(determinant(gm))) throw NoIsotropicLift("residue pairing degenerate on A^perp / A");
    Matrix<S> s = n * inverse(gm.transpose());
    for (std::size_t i = 0; i < g; ++i) {
        Series e = neg[i];
        for (std::size_t j = 0; j < g; ++j) e += Series::monomial(s(i, j) / S(2), 0) * pos[j];
        q.negative.push_back(e.truncated(window));
    }
    // e_i = sum_j c_ij f_j with (e_i, e_-k) = i delta_ik
    Matrix<S> h(g, g);
    for (std::size_t j = 0; j < g; ++j)
        for (std::size_t k = 0; k < g; ++k) h(j, k) = residue_form(pos[j], q.negative[k]);
    Matrix<S> hinv = g ? inverse(h) : Matrix<S>();
    for (std::size_t i = 0; i < g; ++i) {
        Series e = Series::zero(window);
        for (std::size_t j = 0; j < g; ++j)
            e += Series::monomial(S(static_cast<long>(i + 1)) * hinv(i, j), 0) * pos[j];
        q.positive.push_back(e.truncated(window));
    }

    // postconditions
    for (int i = -q.genus; i <= q.genus; ++i)
        for (int j = -q.genus; j <= q.genus; ++j) {
            if (!i || !j) continue;
            const S expected = i + j == 0 ? S(static_cast<long>(i)) : S(0);
            if (residue_form(q.element(i), q.element(j)) != expected) throw NoIsotropicLift("Gram pattern failed");
        }
    // A^perp = A + sum R e_i: equal spans on the common window
    const int w = std::min(window, a.window());
    std::vector<Series> ours;
    for (const auto& f : a.basis())
        if (-f.ord() <= pole_bound) ours.push_back(f.truncated(w));
    for (int i = -q.genus; i <= q.genus; ++i)
        if (i) ours.push_back(q.element(i).truncated(w));
    std::vector<Series> both = ours;
    for (const auto& f : perp) both.push_back(f.truncated(w));
    const auto r1 = echelon_series(ours, -pole_bound, w).size();
    const auto r2 = echelon_series(both, -pole_bound, w).size();
    if (r1 != ours.size() || r2 != r1 || r1 != perp.size())
        throw NoIsotropicLift("A^perp is not A + span(e_i) in the window");
    return q;
}

// --- covariants -----------------------------------------------------------------

/// F(K,O) -> F(K,O)_A = F(H_A, F_A). A standard vector is rewritten in
/// monomials of K^- = A + sum R e_-i (one letter per pole order, leading
/// coefficient 1); words with an A letter die, e_-i letters become the
/// creators e_-i of the oscillator on H_A (labels -g..g).
template <class S>
class CovariantMap {
public:
    CovariantMap(const FockSubalgebra<S>& a, const QuotientSymplectic<S>& q, int energy_bound)
        : energy_bound_(energy_bound) {
        if (energy_bound > a.degree_bound())
            throw WindowTooNarrow("covariants up to energy " + std::to_string(energy_bound) + " need A up to pole " +
                                  std::to_string(energy_bound));
        if (std::min(a.window(), q.window) <= energy_bound)
            throw WindowTooNarrow("letters must be known beyond t^" + std::to_string(energy_bound));
        // gap letters: A-reduced lifts recombined so each has principal part t^-gap
        const auto g = q.gaps.size();
        std::vector<LaurentSeries<S>> reduced;
        Matrix<S> c(g, g);
        for (std::size_t i = 0; i < g; ++i) {
            reduced.push_back(a.reduce(q.element(-static_cast<int>(i) - 1)));
            for (std::size_t j = 0; j < g; ++j) c(i, j) = reduced[i].coeff(-q.gaps[j]);
        }
        Matrix<S> cinv = g ? inverse(c) : Matrix<S>();
        std::map<int, LaurentSeries<S>> letters;
        for (int k = 1; k <= energy_bound; ++k) {
            if (const auto* f = a.with_pole(k)) {
                letters.emplace(-k, *f);
                continue;
            }
            auto it = std::find(q.gaps.begin(), q.gaps.end(), k);
            if (it == q.gaps.end()) throw NoIsotropicLift("pole order " + std::to_string(k) + " has no letter");
            const auto j = static_cast<std::size_t>(it - q.gaps.begin());
            LaurentSeries<S> letter = LaurentSeries<S>::zero(kExact);
            UElement<S> image;
            for (std::size_t i = 0; i < g; ++i) {
                if (is_zero(cinv(j, i))) continue;
                letter += LaurentSeries<S>::monomial(cinv(j, i), 0) * reduced[i];
                image += UElement<S>::generator(-static_cast<int>(i) - 1, cinv(j, i));
            }
            letters.emplace(-k, letter);
            gap_image_.emplace(-k, image);
        }
        letters_ = ModeBasis<S>(std::move(letters));
    }

    int energy_bound() const { return energy_bound_; }
    const ModeBasis<S>& letters() const { return letters_; }

    std::map<Word, S> kminus_coordinates(const FockVector<S>& v) const {
        for (const auto& [w, c] : v.terms()) {
            if (!w.empty() && w.back() > 0) throw NotReduced("vector contains positive modes");
            if (word_energy(w) > energy_bound_)
                throw WindowTooNarrow("vector energy " + std::to_string(word_energy(w)) + " above bound " +
                                      std::to_string(energy_bound_));
        }
        return to_basis_coordinates(letters_, v);
    }

    FockVector<S> operator()(const FockVector<S>& v) const {
        static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
        FockVector<S> out;
        for (const auto& [w, c] : kminus_coordinates(v)) {
            FockVector<S> x = FockVector<S>::vacuum(c);
            for (int k : w) {
                auto it = gap_image_.find(k);
                if (it == gap_image_.end()) {
                    x = FockVector<S>();
                    break;
                }
                x = rho_apply(alg, it->second, x);
            }
            out += x;
        }
        return out;
    }

private:
    int energy_bound_;
    ModeBasis<S> letters_;
    std::map<int, UElement<S>> gap_image_;  // -pole -> class of its letter in H_A
};

/// Rewrites a vector of F(H_A, F_A) built on the lifts of `from` in terms of
/// the lifts of `to`: the class of e_-i is sum_a (e_-i, e'_-a) / a e'_a.
template <class S>
FockVector<S> transport(const QuotientSymplectic<S>& from, const QuotientSymplectic<S>& to, const FockVector<S>& v) {
    static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
    std::map<int, UElement<S>> op;
    for (int i = 1; i <= from.genus; ++i) {
        UElement<S> u;
        for (int a = -to.genus; a <= to.genus; ++a)
            if (a) u += UElement<S>::generator(a, residue_form(from.element(-i), to.element(-a)) / S(static_cast<long>(a)));
        op.emplace(-i, u);
    }
    FockVector<S> out;
    for (const auto& [w, c] : v.terms()) {
        FockVector<S> x = FockVector<S>::vacuum(c);
        for (int k : w) x = rho_apply(alg, op.at(k), x);
        out += x;
    }
    return out;
}

template <class S>
struct ScalarAction {
    S scalar{0};
    std::size_t probes = 0;
};

/// tau-hat(D) on F(K,O)_A for a vertical D with D(A) in A and D(A^perp) in A:
/// the scalar read off from the vacuum, then checked on every probe.
template <class S>
ScalarAction<S> scalar_action(const FockSubalgebra<S>& a, const QuotientSymplectic<S>& q, const Derivation<S>& d,
                              const std::vector<FockVector<S>>& probes, int energy_bound) {
    if (!d.is_vertical()) throw InvalidParams("scalar_action takes a vertical derivation");
    for (const auto& f : a.basis()) {
        if (-f.ord() - d.g.ord() + 1 > a.degree_bound()) continue;
        if (!a.contains(apply_derivation(d, f))) throw InvalidParams("derivation does not preserve A");
    }
    for (int i = -q.genus; i <= q.genus; ++i)
        if (i && !a.contains(apply_derivation(d, q.element(i))))
            throw InvalidParams("derivation does not map A^perp into A");
    CovariantMap<S> cov(a, q, energy_bound);
    auto tau = tau_hat_D(d);
    ScalarAction<S> out;
    FockVector<S> vac = FockVector<S>::vacuum();
    FockVector<S> image = cov(tau.apply(vac));
    for (const auto& [w, c] : image.terms())
        if (!w.empty()) throw NotScalar("vacuum is not an eigenvector of tau-hat(D) on covariants");
    out.scalar = image.coefficient({});
    for (std::size_t k = 0; k < probes.size(); ++k) {
        if (cov(tau.apply(probes[k])) != out.scalar * cov(probes[k]))
            throw NotScalar("probes 0 (vacuum) and " + std::to_string(k + 1) + " see different actions");
        ++out.probes;
    }
    return out;
}

}  // namespace focklab
