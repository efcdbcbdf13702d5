#pragma once

// Oscillator algebra of K = R((t)) with modes e_k = t^k, [e_k, e_l] = k
// delta_{k+l,0} hbar, and its Fock space Sym(e_-1, e_-2, ...). The unit e_0
// is central and acts as 0 on the Fock space (it is killed together with O).
//
// Quadratic operators are generated lazily per energy: acting on vectors
// whose energy (sum of |mode|) is at most E, only finitely many normally
// ordered monomials contribute, and `materialize(E)` returns exactly those.

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "focklab/heisenberg.hpp"
#include "focklab/laurent.hpp"
#include "focklab/matrix.hpp"

namespace focklab {

template <class S>
HeisenbergAlgebra<S> oscillator_algebra() {
    return {[](int a, int b) { return a + b == 0 ? S(static_cast<long>(a)) : S(0); }, [](int a) { return a >= 0; }};
}

inline int word_energy(const Word& w) {
    int e = 0;
    for (int a : w) e += std::abs(a);
    return e;
}

template <class S>
int energy(const FockVector<S>& v) {
    int e = 0;
    for (const auto& [w, c] : v.terms()) e = std::max(e, word_energy(w));
    return e;
}

/// Creator words (sorted, negative modes) of total energy exactly n.
inline std::vector<Word> energy_basis(int n) {
    std::vector<Word> out;
    Word w;
    std::function<void(int, int)> rec = [&](int remaining, int largest) {
        if (remaining == 0) {
            Word s = w;
            std::sort(s.begin(), s.end());
            out.push_back(s);
            return;
        }
        for (int k = std::min(remaining, largest); k >= 1; --k) {
            w.push_back(-k);
            rec(remaining - k, k);
            w.pop_back();
        }
    };
    rec(n, n);
    return out;
}

inline std::vector<Word> energy_basis_upto(int n) {
    std::vector<Word> out;
    for (int e = 0; e <= n; ++e)
        for (auto& w : energy_basis(e)) out.push_back(std::move(w));
    return out;
}

template <class S>
class QuadraticOperator {
public:
    using Generator = std::function<UElement<S>(int)>;

    QuadraticOperator() : materialize_([](int) { return UElement<S>(); }) {}
    QuadraticOperator(Generator g, S central = S(0)) : materialize_(std::move(g)), central_(std::move(central)) {}

    /// All monomials that act nontrivially on vectors of energy <= e.
    UElement<S> materialize(int e) const { return materialize_(e) + UElement<S>(central_); }
    const S& central() const { return central_; }

    FockVector<S> apply(const FockVector<S>& v) const {
        if (v.is_zero()) return v;
        static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
        return rho_apply(alg, materialize_(energy(v)), v) + central_ * v;
    }

    friend QuadraticOperator operator+(const QuadraticOperator& a, const QuadraticOperator& b) {
        return QuadraticOperator([a, b](int e) { return a.materialize_(e) + b.materialize_(e); }, a.central_ + b.central_);
    }
    friend QuadraticOperator operator-(const QuadraticOperator& a, const QuadraticOperator& b) {
        return a + S(-1) * b;
    }
    friend QuadraticOperator operator*(const S& s, const QuadraticOperator& a) {
        return QuadraticOperator([s, a](int e) { return s * a.materialize_(e); }, s * a.central_);
    }

private:
    Generator materialize_;
    S central_;
};

/// -1/2 sum_{a+b=n, a,b != 0} :e_a e_b: restricted to monomials that can act
/// on energy <= e (an annihilator above e kills everything).
template <class S>
UElement<S> mode_quadratic(int n, int e) {
    static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
    UElement<S> u;
    const int lo = n >= 0 ? (n + 1) / 2 : -((-n) / 2);  // ceil(n/2)
    const int hi = std::max(e, -1);
    for (int b = lo; b <= hi; ++b) {
        const int a = n - b;
        if (a == 0 || b == 0 || a > b) continue;
        const S c = a == b ? S(-1) / S(2) : S(-1);
        u += UElement<S>::product(alg, {a, b}, -1, c);
    }
    return u;
}

/// tau-hat(D_n), D_n = t^{n+1} d/dt.
template <class S>
QuadraticOperator<S> tau_hat_Dk(int n) {
    return QuadraticOperator<S>([n](int e) { return mode_quadratic<S>(n, e); });
}

/// tau-hat(g d/dt) = sum_m g_m tau-hat(D_{m-1}); needs g_m for m <= 2e + 1.
template <class S>
QuadraticOperator<S> tau_hat_D(const Derivation<S>& d) {
    if (!d.is_vertical()) throw std::invalid_argument("tau_hat_D takes a vertical derivation");
    LaurentSeries<S> g = d.g;
    return QuadraticOperator<S>([g](int e) {
        UElement<S> u;
        if (g.is_zero_in_window() && g.is_exact()) return u;
        const int top = 2 * e + 1;
        if (!g.is_exact() && g.prec() <= top)
            throw PrecisionExhausted("derivation known below t^" + std::to_string(g.prec()) + ", energy " +
                                     std::to_string(e) + " needs t^" + std::to_string(top));
        for (const auto& [m, c] : g.terms())
            if (m <= top) u += c * mode_quadratic<S>(m - 1, e);
        return u;
    });
}

// --- Virasoro relation -------------------------------------------------------

template <class S>
struct VirasoroCertificate {
    S central{0};         // read off from the vacuum
    bool holds = false;   // identity verified on every probe
    std::size_t probes = 0;
};

/// [tau-hat(D_k), tau-hat(D_l)] = (l - k) tau-hat(D_{k+l}) + c on all creator
/// words of energy <= probe_energy; c is read off from the vacuum.
template <class S>
VirasoroCertificate<S> virasoro_bracket(int k, int l, int probe_energy) {
    auto tk = tau_hat_Dk<S>(k), tl = tau_hat_Dk<S>(l), tkl = tau_hat_Dk<S>(k + l);
    const S coeff(static_cast<long>(l - k));
    auto defect = [&](const FockVector<S>& v) {
        return tk.apply(tl.apply(v)) - tl.apply(tk.apply(v)) - coeff * tkl.apply(v);
    };
    VirasoroCertificate<S> cert;
    FockVector<S> vac = FockVector<S>::vacuum();
    FockVector<S> d0 = defect(vac);
    for (const auto& [w, c] : d0.terms())
        if (!w.empty()) return cert;
    cert.central = d0.coefficient({});
    cert.holds = true;
    for (const auto& w : energy_basis_upto(probe_energy)) {
        FockVector<S> v = FockVector<S>::basis(w);
        ++cert.probes;
        if (defect(v) != cert.central * v) {
            cert.holds = false;
            break;
        }
    }
    return cert;
}

inline Rational virasoro_central_formula(int k, int l) {
    if (k + l != 0) return Rational(0);
    return make_rational(static_cast<long>(k) * k * k - k, 12);
}

// --- quasi-symplectic bases ------------------------------------------------------

/// A topological basis (e_i) of K given as t^i except for finitely many
/// exact overrides.
template <class S>
class ModeBasis {
public:
    ModeBasis() = default;
    explicit ModeBasis(std::map<int, LaurentSeries<S>> overrides) : overrides_(std::move(overrides)) {
        for (const auto& [i, f] : overrides_) {
            radius_ = std::max(radius_, std::abs(i));
            for (const auto& [m, c] : f.terms()) radius_ = std::max(radius_, std::abs(m));
        }
    }

    LaurentSeries<S> element(int i) const {
        auto it = overrides_.find(i);
        return it == overrides_.end() ? LaurentSeries<S>::monomial(S(1), i) : it->second;
    }

    /// Largest index or exponent touched by an override.
    int radius() const { return radius_; }
    const std::map<int, LaurentSeries<S>>& overrides() const { return overrides_; }

    /// e_i as an element of the oscillator algebra (e_0 included, acting as 0).
    UElement<S> mode_operator(int i) const {
        UElement<S> u;
        for (const auto& [m, c] : element(i).terms()) u += UElement<S>::generator(m, c);
        return u;
    }

private:
    std::map<int, LaurentSeries<S>> overrides_;
    int radius_ = 0;
};

struct QuasiSymplecticReport {
    bool unit_and_positive = true;  // e_0 = 1 and e_i in m for i > 0
    bool pairing = true;            // (e_i, e_j) = i delta_{i+j,0}
    bool topology = true;           // e_i in m^{k+1} for i > N_k
    std::string failure;
    bool ok() const { return unit_and_positive && pairing && topology; }
};

/// Checks the two defining conditions and the topological consequence on
/// indices in [-range, range].
template <class S>
QuasiSymplecticReport check_quasi_symplectic(const ModeBasis<S>& b, int range) {
    QuasiSymplecticReport rep;
    if (b.element(0) != LaurentSeries<S>::constant(S(1))) {
        rep.unit_and_positive = false;
        rep.failure = "e_0 != 1";
    }
    for (int i = 1; i <= range && rep.unit_and_positive; ++i) {
        auto e = b.element(i);
        if (!e.is_zero_in_window() && e.ord() < 1) {
            rep.unit_and_positive = false;
            rep.failure = "e_" + std::to_string(i) + " not in m";
        }
    }
    for (int i = -range; i <= range && rep.pairing; ++i)
        for (int j = -range; j <= range; ++j) {
            S expected = i + j == 0 ? S(static_cast<long>(i)) : S(0);
            if (residue_form(b.element(i), b.element(j)) != expected) {
                rep.pairing = false;
                rep.failure = "(e_" + std::to_string(i) + ", e_" + std::to_string(j) + ") wrong";
                break;
            }
        }
    // N_k: least N with span(e_-1..e_-N) cap m^-k onto m^-k / O.
    for (int k = 1; k <= range; ++k) {
        int n_k = -1;
        for (int n = 1; n <= range && n_k < 0; ++n) {
            int lo = -k;
            for (int j = 1; j <= n; ++j) {
                auto e = b.element(-j);
                if (!e.is_zero_in_window()) lo = std::min(lo, e.ord());
            }
            // rows: exponents lo..-1, columns: e_-1..e_-n
            const auto rows = static_cast<std::size_t>(-lo);
            Matrix<S> m(rows, static_cast<std::size_t>(n));
            for (int j = 1; j <= n; ++j)
                for (int x = lo; x <= -1; ++x) m(static_cast<std::size_t>(x - lo), static_cast<std::size_t>(j - 1)) = b.element(-j).coeff(x);
            const auto below = static_cast<std::size_t>(-k - lo);  // exponents < -k
            Matrix<S> low = m.block(0, 0, below, static_cast<std::size_t>(n));
            auto ker = below ? kernel_basis(low) : std::vector<std::vector<S>>{};
            if (!below) {
                for (int j = 0; j < n; ++j) {
                    std::vector<S> v(static_cast<std::size_t>(n), S(0));
                    v[static_cast<std::size_t>(j)] = S(1);
                    ker.push_back(v);
                }
            }
            Matrix<S> image(static_cast<std::size_t>(k), ker.size());
            Matrix<S> top = m.block(below, 0, static_cast<std::size_t>(k), static_cast<std::size_t>(n));
            for (std::size_t c = 0; c < ker.size(); ++c) {
                auto col = top * ker[c];
                for (std::size_t r = 0; r < col.size(); ++r) image(r, c) = col[r];
            }
            if (!ker.empty() && rank(image) == static_cast<std::size_t>(k)) n_k = n;
        }
        if (n_k < 0) break;
        for (int i = n_k + 1; i <= range; ++i) {
            auto e = b.element(i);
            if (!e.is_zero_in_window() && e.ord() < k + 1) {
                rep.topology = false;
                rep.failure = "e_" + std::to_string(i) + " not in m^" + std::to_string(k + 1);
                return rep;
            }
        }
    }
    return rep;
}

/// tau-hat(D) computed from the defining sum in the basis b; D must have an
/// exact coefficient series.
template <class S>
QuadraticOperator<S> tau_hat_in_basis(const Derivation<S>& d, const ModeBasis<S>& b) {
    if (!d.is_vertical()) throw std::invalid_argument("tau_hat_in_basis takes a vertical derivation");
    if (!d.g.is_exact()) throw PrecisionExhausted("tau_hat_in_basis needs an exact derivation");
    int span = 0;
    for (const auto& [m, c] : d.g.terms()) span = std::max(span, std::abs(m - 1));
    auto cache = std::make_shared<std::map<int, std::pair<LaurentSeries<S>, UElement<S>>>>();
    return QuadraticOperator<S>([d, b, span, cache](int e) {
        static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
        const int r = b.radius();
        const int lim = std::max(e, r) + span + r + 2;
        auto entry = [&](int i) -> const std::pair<LaurentSeries<S>, UElement<S>>& {
            auto it = cache->find(i);
            if (it == cache->end()) it = cache->emplace(i, std::make_pair(b.element(i), b.mode_operator(i))).first;
            return it->second;
        };
        UElement<S> u;
        for (int a = -lim; a <= lim; ++a) {
            if (a == 0) continue;
            LaurentSeries<S> de = apply_derivation(d, entry(-a).first);
            if (de.is_zero_in_window()) continue;
            for (int bb = -lim; bb <= lim; ++bb) {
                if (bb == 0) continue;
                S c = residue_form(de, entry(-bb).first);
                if (is_zero(c)) continue;
                c = c / S(2 * static_cast<long>(a) * bb);
                const int x = std::min(a, bb), y = std::max(a, bb);
                UElement<S> prod = multiply(alg, entry(x).second, entry(y).second);
                for (const auto& [mono, cc] : prod.terms()) u.add(Monomial{mono.labels, mono.hbar - 1}, c * cc);
            }
        }
        return u;
    });
}

/// tau-hat in b minus tau-hat in the standard basis: a scalar, read off from
/// the vacuum and checked on all probes up to probe_energy.
template <class S>
S basis_change_scalar(const Derivation<S>& d, const ModeBasis<S>& b, int probe_energy) {
    auto tb = tau_hat_in_basis(d, b);
    auto t0 = tau_hat_D(d);
    FockVector<S> vac = FockVector<S>::vacuum();
    FockVector<S> diff = tb.apply(vac) - t0.apply(vac);
    for (const auto& [w, c] : diff.terms())
        if (!w.empty()) throw NotScalar("basis change of tau-hat is not scalar on the vacuum");
    const S phi = diff.coefficient({});
    for (const auto& w : energy_basis_upto(probe_energy)) {
        FockVector<S> v = FockVector<S>::basis(w);
        if (tb.apply(v) - t0.apply(v) != phi * v) throw NotScalar("basis change of tau-hat is not scalar");
    }
    return phi;
}

// --- lifting derivations that move parameters -----------------------------------

/// e'_w v_o for a creator word w of basis indices.
template <class S>
FockVector<S> basis_monomial(const ModeBasis<S>& b, const Word& w) {
    static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
    FockVector<S> v = FockVector<S>::vacuum();
    for (int k : w) v = rho_apply(alg, b.mode_operator(k), v);
    return v;
}

/// Coordinates of v in the monomials e'_w v_o, by elimination from the top
/// energy down. Requires each e'_w v_o = e_w v_o + lower energy.
template <class S>
std::map<Word, S> to_basis_coordinates(const ModeBasis<S>& b, FockVector<S> v) {
    std::map<Word, S> coords;
    while (!v.is_zero()) {
        const Word* top = nullptr;
        for (const auto& [w, c] : v.terms())
            if (!top || word_energy(w) > word_energy(*top)) top = &w;
        Word w = *top;
        const S c = v.coefficient(w);
        FockVector<S> m = basis_monomial(b, w);
        if (m.coefficient(w) != S(1)) throw NotReduced("basis monomial is not unitriangular");
        for (const auto& [u, cu] : m.terms())
            if (u != w && word_energy(u) >= word_energy(w)) throw NotReduced("basis monomial is not unitriangular");
        coords[w] += c;
        v -= c * m;
    }
    return coords;
}

template <class S>
S horizontal_derivative(const Derivation<S>& d, const S& c) {
    if constexpr (std::is_same_v<S, RationalFunction>) {
        S out(0);
        for (const auto& [var, coeff] : d.horizontal) out += coeff * c.derivative(var);
        return out;
    } else {
        if (!d.horizontal.empty()) throw std::invalid_argument("horizontal derivation on constant coefficients");
        return S(0);
    }
}

/// Lift of D = D_vert + D_hor: tau-hat of the vertical part in basis b plus
/// coefficientwise D_hor in the coordinates of b.
template <class S>
FockVector<S> lift_derivation(const Derivation<S>& d, const ModeBasis<S>& b, const FockVector<S>& v) {
    Derivation<S> vert{d.g, {}};
    FockVector<S> out;
    if (!vert.g.is_zero_in_window()) out = tau_hat_in_basis(vert, b).apply(v);
    if (d.horizontal.empty()) return out;
    for (const auto& [w, c] : to_basis_coordinates(b, v)) {
        S dc = horizontal_derivative(d, c);
        if (!is_zero(dc)) out += dc * basis_monomial(b, w);
    }
    return out;
}

/// sum_w c_w sum_i e'..(delta e'_{k_i})..e' v_o, where delta differentiates the
/// coefficients of each basis element by the horizontal part of d.
template <class S>
FockVector<S> basis_motion(const Derivation<S>& d, const ModeBasis<S>& b, const FockVector<S>& v) {
    static const HeisenbergAlgebra<S> alg = oscillator_algebra<S>();
    FockVector<S> out;
    for (const auto& [w, c] : to_basis_coordinates(b, v))
        for (std::size_t i = 0; i < w.size(); ++i) {
            FockVector<S> x = FockVector<S>::vacuum();
            for (std::size_t j = 0; j < w.size(); ++j) {
                UElement<S> op;
                if (j == i) {
                    for (const auto& [m, cm] : b.element(w[j]).terms()) op += UElement<S>::generator(m, horizontal_derivative(d, cm));
                } else {
                    op = b.mode_operator(w[j]);
                }
                x = rho_apply(alg, op, x);
            }
            out += c * x;
        }
    return out;
}

}  // namespace focklab
