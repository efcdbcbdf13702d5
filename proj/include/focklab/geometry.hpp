#pragma once

// A hyperelliptic curve y^2 = f(x) of genus g seen from its Weierstrass point
// at infinity: local expansions in the parameter t with x = t^-2, the algebra
// A_p = C[x] + C[x]y inside K_p = C((t)), differentials, the primitives phi,
// the subspace K_p^- and the residue operator of the WZW action.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "focklab/errors.hpp"
#include "focklab/fock_subalgebra.hpp"
#include "focklab/laurent.hpp"
#include "focklab/matrix.hpp"
#include "focklab/polynomial.hpp"
#include "focklab/rational.hpp"

namespace focklab {

struct HyperellipticModel {
    using Series = LaurentSeries<GaussianRational>;
    int genus = 0;
    std::vector<GaussianRational> f;  // coefficients, constant term first
    int window = 0;                   // u(t^2) is known below t^window
    Series u;                         // u(t) = (t^{2g+1} f(1/t))^{-1/2}
    Series u_t2;                      // u(t^2)
    Series x;                         // t^-2
    Series y;                         // t^{-1-2g} u(t^2)^-1
};

inline Polynomial univariate(const std::vector<GaussianRational>& coeffs) {
    Polynomial p;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        p += Polynomial::monomial(Exponents{static_cast<int>(k)}, coeffs[k]);
    return p;
}

inline HyperellipticModel build_model(std::vector<GaussianRational> f, int g, int window) {
    using Series = HyperellipticModel::Series;
    if (g < 1) throw InvalidParams("genus must be at least 1");
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    if (static_cast<int>(f.size()) != 2 * g + 2)
        throw WrongDegree("f has degree " + std::to_string(static_cast<int>(f.size()) - 1) + ", expected " +
                          std::to_string(2 * g + 1));
    const Polynomial p = univariate(f);
    if (!gcd(p, p.derivative(0)).is_constant()) throw RepeatedRoots("gcd(f, f') is not constant");
    if (window < 4 * g + 4) throw WindowTooNarrow("window " + std::to_string(window) + " below 4g+4");
    if (!exact_sqrt(f.back())) throw InvalidParams("leading coefficient of f has no exact square root");

    HyperellipticModel m;
    m.genus = g;
    m.f = f;
    m.window = window;
    // t^{2g+1} f(1/t) reverses the coefficient list
    std::map<int, GaussianRational> rev;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (!f[k].is_zero()) rev.emplace(2 * g + 1 - static_cast<int>(k), f[k]);
    const int half = (window + 1) / 2;
    m.u = inv(sqrt_unit(Series::from_map(rev), half), half);
    m.u_t2 = compose_monomial(m.u, 2).truncated(window);
    m.x = Series::monomial(GaussianRational(1), -2);
    m.y = Series::monomial(GaussianRational(1), -1 - 2 * g) * inv(m.u_t2);

    // y^2 = f(x) on every determined coefficient
    Series fx;
    for (std::size_t k = 0; k < f.size(); ++k)
        fx += Series::monomial(f[k], -2 * static_cast<int>(k));
    const Series y2 = m.y * m.y;
    if (!y2.agrees_below(fx, y2.prec())) throw Inconsistent("y^2 != f(x) within the window");
    return m;
}

/// 2y d/dx = -t^{2-2g} u(t^2)^-1 d/dt, a vector field on the affine curve.
inline Derivation<GaussianRational> vertical_derivation(const HyperellipticModel& m) {
    using Series = HyperellipticModel::Series;
    return {Series::monomial(GaussianRational(-1), 2 - 2 * m.genus) * inv(m.u_t2), {}};
}

struct CurveFockData {
    using Series = LaurentSeries<GaussianRational>;
    HyperellipticModel model;
    FockSubalgebra<GaussianRational> a;
    int degree_bound = 0;
    std::vector<Series> omega_open;    // dt-coefficients spanning omega(C minus p) up to the pole bound
    std::vector<Series> omega_closed;  // t^{2k} u(t^2), k < g
    std::map<int, Series> phi;         // phi_{2i-1} for i = 1-g..g, keyed by 2i-1
    std::vector<Series> kminus;        // basis of A, then phi_-1, phi_-3, ..., phi_{1-2g}

    const Series& phi_of(int odd) const { return phi.at(odd); }
    std::vector<Series> phi_negative() const {
        std::vector<Series> out;
        for (int i = 0; i >= 1 - model.genus; --i) out.push_back(phi.at(2 * i - 1));
        return out;
    }
};

inline CurveFockData curve_fock_data(const HyperellipticModel& m, int degree_bound) {
    using Series = CurveFockData::Series;
    using Q = GaussianRational;
    const int g = m.genus;
    if (degree_bound < 4 * g + 2) throw WindowTooNarrow("degree bound below 4g+2");
    auto a = FockSubalgebra<Q>::generate({m.x, m.y}, degree_bound);
    if (a.window() <= 2 * g + 1) throw WindowTooNarrow("A_p is not determined past t^" + std::to_string(2 * g + 1));
    CurveFockData d{m, std::move(a), degree_bound, {}, {}, {}, {}};

    std::map<int, Series> open;  // keyed by pole order of the coefficient
    for (int k = 0; 2 * k - 2 * g + 2 <= degree_bound; ++k)
        open.emplace(2 * k - 2 * g + 2, Series::monomial(Q(1), 2 * g - 2 - 2 * k) * m.u_t2);
    for (int k = 0; 3 + 2 * k <= degree_bound; ++k) open.emplace(3 + 2 * k, Series::monomial(Q(1), -3 - 2 * k));
    for (auto& [p, w] : open) d.omega_open.push_back(std::move(w));

    for (int k = 0; k < g; ++k) d.omega_closed.push_back(Series::monomial(Q(1), 2 * k) * m.u_t2);
    for (int i = 1 - g; i <= g; ++i)
        d.phi.emplace(2 * i - 1, integrate(m.u_t2 * Series::monomial(Q(1), 2 * i - 2)));
    d.kminus = d.a.basis();
    for (const auto& f : d.phi_negative()) d.kminus.push_back(f);
    return d;
}

// --- certificates -------------------------------------------------------------

namespace detail {

inline bool in_span_truncated(const std::vector<LaurentSeries<GaussianRational>>& basis,
                              const LaurentSeries<GaussianRational>& f, int lo, int prec) {
    std::vector<LaurentSeries<GaussianRational>> b;
    for (const auto& x : basis) b.push_back(x.truncated(prec));
    const auto r = echelon_series(b, lo, prec).size();
    b.push_back(f.truncated(prec));
    return echelon_series(b, lo, prec).size() == r;
}

}  // namespace detail

struct CurveCertificate {
    FockTypeCertificate fock;
    int rank_b_over_a = 0;
    Matrix<GaussianRational> gram;  // residue_form(phi_a, phi_b), a, b = 1-2g, 3-2g, ..., 2g-1
    bool gram_antisymmetric = false;
    bool gram_nondegenerate = false;
    bool holomorphic_isotropic = false;  // phi_1, ..., phi_{2g-1}
    bool kminus_isotropic = false;       // phi_-1, ..., phi_{1-2g}
    bool a_orthogonal_to_b = false;
    bool ok() const {
        return fock.fock_type() && rank_b_over_a == 2 * static_cast<int>(gram.rows() / 2) && gram_antisymmetric &&
               gram_nondegenerate && holomorphic_isotropic && a_orthogonal_to_b;
    }
};

/// Fock-type surrogates for A_p (FT4 on 2y d/dx plus `extra`), rank of
/// B_p / A_p and the residue Gram of the phi classes.
inline CurveCertificate certify_curve(const CurveFockData& d, const std::vector<Derivation<GaussianRational>>& extra = {}) {
    using Q = GaussianRational;
    const int g = d.model.genus;
    CurveCertificate c;
    std::vector<Derivation<Q>> ders{vertical_derivation(d.model)};
    ders.insert(ders.end(), extra.begin(), extra.end());
    const int perp_pole = 2 * g + 1;
    const int perp_window = std::min(d.degree_bound - 2, d.a.window() - 1);
    c.fock = d.a.certify(ders, perp_pole, perp_window);

    std::vector<LaurentSeries<Q>> phis;
    for (const auto& [k, f] : d.phi) phis.push_back(f);

    // rank of span(A, phi) / A on exponents [-degree_bound, w)
    int w = d.a.window();
    for (const auto& f : phis) w = std::min(w, f.prec());
    std::vector<LaurentSeries<Q>> span;
    for (const auto& f : d.a.basis()) span.push_back(f.truncated(w));
    const auto base = echelon_series(span, -d.degree_bound, w).size();
    for (const auto& f : phis) span.push_back(f.truncated(w));
    c.rank_b_over_a = static_cast<int>(echelon_series(span, -d.degree_bound, w).size() - base);

    const std::size_t n = phis.size();
    c.gram = Matrix<Q>(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) c.gram(r, s) = residue_form(phis[r], phis[s]);
    c.gram_antisymmetric = c.gram.transpose() == -c.gram;
    c.gram_nondegenerate = !is_zero(determinant(c.gram));
    // phis are sorted by index: the first g have poles, the last g lie in m
    c.holomorphic_isotropic = c.gram.block(n / 2, n / 2, n / 2, n / 2).is_zero();
    c.kminus_isotropic = c.gram.block(0, 0, n / 2, n / 2).is_zero();

    c.a_orthogonal_to_b = true;
    for (const auto& f : d.a.basis())
        for (const auto& p : phis) {
            const auto prod = p * derivative(f);
            if (prod.prec() <= -1) continue;
            if (!is_zero(residue(prod))) c.a_orthogonal_to_b = false;
        }
    return c;
}

/// Residue pairing times this constant is the intersection form on H^1(C).
inline PiScaled intersection_scale() { return {GaussianRational(Rational(0), Rational(-2)), 1}; }

// --- K_p^- is not closed under products ------------------------------------------

struct ClosureCandidate {
    std::string label;
    LaurentSeries<GaussianRational> series;
};

struct ClosureWitness {
    bool found = false;
    std::string u_label, v_label;
    LaurentSeries<GaussianRational> u, v, product;
    int window = 0;  // membership decided on coefficients below t^window
    std::size_t pairs_tried = 0;
};

/// Left factors are phi_-1, ..., phi_{1-2g}; right factors add the elements of
/// A with pole order at most a_pole_bound (default 2g+2).
inline std::pair<std::vector<ClosureCandidate>, std::vector<ClosureCandidate>> closure_candidates(
    const CurveFockData& d, int a_pole_bound = -1) {
    const int g = d.model.genus;
    if (a_pole_bound < 0) a_pole_bound = 2 * g + 2;
    std::vector<ClosureCandidate> left, right;
    for (int i = 0; i >= 1 - g; --i) left.push_back({"phi_" + std::to_string(2 * i - 1), d.phi_of(2 * i - 1)});
    right = left;
    for (const auto& f : d.a.basis()) {
        const int p = -f.ord();
        if (p >= 1 && p <= a_pole_bound) right.push_back({"a_" + std::to_string(p), f});
    }
    return {left, right};
}

/// Whether u v lies outside K_p^-, certified on a truncation: K_p^- elements
/// with pole at most P use A up to pole max(P, 2g-1), so failure of the
/// truncated membership system proves non-membership.
inline bool product_leaves_kminus(const CurveFockData& d, const LaurentSeries<GaussianRational>& u,
                                  const LaurentSeries<GaussianRational>& v, int* window_used = nullptr) {
    const int g = d.model.genus;
    const auto p = u * v;
    const int pole = std::max(p.is_zero_in_window() ? 0 : -p.ord(), 2 * g - 1);
    if (pole > d.degree_bound) throw WindowTooNarrow("product pole " + std::to_string(pole) + " above degree bound");
    std::vector<LaurentSeries<GaussianRational>> basis;
    int w = p.prec();
    for (const auto& f : d.a.basis())
        if (-f.ord() <= pole) {
            basis.push_back(f);
            w = std::min(w, f.prec());
        }
    for (const auto& f : d.phi_negative()) {
        basis.push_back(f);
        w = std::min(w, f.prec());
    }
    if (w <= 0) throw WindowTooNarrow("membership window is empty");
    if (window_used) *window_used = w;
    return !detail::in_span_truncated(basis, p, -pole, w);
}

inline ClosureWitness closure_falsifier(const CurveFockData& d, int a_pole_bound = -1) {
    ClosureWitness out;
    auto [left, right] = closure_candidates(d, a_pole_bound);
    for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = 0; j < right.size(); ++j) {
            if (j < i) continue;  // phi x phi pairs once
            ++out.pairs_tried;
            int w = 0;
            if (product_leaves_kminus(d, left[i].series, right[j].series, &w)) {
                out.found = true;
                out.u_label = left[i].label;
                out.v_label = right[j].label;
                out.u = left[i].series;
                out.v = right[j].series;
                out.product = out.u * out.v;
                out.window = w;
                return out;
            }
        }
    return out;
}

/// Rebuilds the curve with window + extra and re-tests the witness found at
/// the original window. True when nothing was found (nothing to flip).
inline bool closure_witness_stable(const HyperellipticModel& m, int degree_bound, int extra = 10) {
    const auto w0 = closure_falsifier(curve_fock_data(m, degree_bound));
    if (!w0.found) return true;
    const auto big = curve_fock_data(build_model(m.f, m.genus, m.window + extra), degree_bound);
    auto [left, right] = closure_candidates(big);
    const LaurentSeries<GaussianRational>* u = nullptr;
    const LaurentSeries<GaussianRational>* v = nullptr;
    for (const auto& c : left)
        if (c.label == w0.u_label) u = &c.series;
    for (const auto& c : right)
        if (c.label == w0.v_label) v = &c.series;
    if (!u || !v) return false;
    return product_leaves_kminus(big, *u, *v);
}

// --- the WZW residue operator -------------------------------------------------

struct WzwGram {
    Matrix<GaussianRational> gram;     // res(<D,w_i> w_j) / (ij)
    Matrix<GaussianRational> pairing;  // res(<D,w_i> w_j)
    Matrix<GaussianRational> direct;   // res(e_j d(D e_i)) with de_j = j w_j
    bool symmetric = false;
    bool direct_symmetric = false;
    bool literal_identity = false;  // direct = -pairing entrywise
    bool scaled_identity = false;   // direct = -ij pairing entrywise
    std::vector<std::pair<int, int>> literal_failures;
    PiScaled image_factor{GaussianRational::i(), 1};  // pi sqrt(-1) in front of the image on covariants
};

/// omega holds the dt-coefficients of w_1..w_g, all regular at t = 0.
inline WzwGram wzw_gram(const Derivation<GaussianRational>& d, const std::vector<LaurentSeries<GaussianRational>>& omega) {
    using Q = GaussianRational;
    using Series = LaurentSeries<Q>;
    if (!d.is_vertical()) throw InvalidParams("wzw_gram takes a vertical derivation");
    const std::size_t g = omega.size();
    std::vector<Series> e;
    for (std::size_t j = 0; j < g; ++j) {
        if (!omega[j].is_zero_in_window() && omega[j].ord() < 0) throw InvalidParams("omega has a pole");
        e.push_back(integrate(Q(static_cast<long>(j + 1)) * omega[j]));
    }
    WzwGram out;
    out.gram = out.pairing = out.direct = Matrix<Q>(g, g);
    out.literal_identity = out.scaled_identity = true;
    for (std::size_t i = 0; i < g; ++i) {
        const Series dei = apply_derivation(d, e[i]);
        const Series contracted = contract(d, omega[i]);
        for (std::size_t j = 0; j < g; ++j) {
            const Q ij(static_cast<long>((i + 1) * (j + 1)));
            out.pairing(i, j) = residue(contracted * omega[j]);
            out.gram(i, j) = out.pairing(i, j) / ij;
            out.direct(i, j) = residue(e[j] * derivative(dei));
            if (out.direct(i, j) != -out.pairing(i, j)) {
                out.literal_identity = false;
                out.literal_failures.emplace_back(static_cast<int>(i + 1), static_cast<int>(j + 1));
            }
            if (out.direct(i, j) != -(ij * out.pairing(i, j))) out.scaled_identity = false;
        }
    }
    out.symmetric = out.gram == out.gram.transpose();
    out.direct_symmetric = out.direct == out.direct.transpose();
    return out;
}

}  // namespace focklab
