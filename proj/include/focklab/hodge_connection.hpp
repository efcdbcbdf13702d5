#pragma once

// Families of polarized weight one Hodge structures given by an explicit
// rational F-frame over a real parameter space, the Fock connection
// nabla^FF = nabla^Fbar + rho(s + sbar) and its curvature.
//
// Frame conventions. H carries a constant real symplectic Gram J in its flat
// coordinates. The F-frame V (2g x g) is holomorphic in tau = x + i y, and
// P = [V | conj V] is the adapted frame of H = F + Fbar. The flat connection
// has matrix A^H = P^-1 dP (columns are images), with blocks
//
//     A^H = [ A^F    sigmabar ]
//           [ sigma  A^Fbar   ]
//
// On the Fock space Sym Fbar, label k > 0 is v_k (annihilator) and label -k
// is conj(v_k) (creator); the Heisenberg pairing is the frame Gram P^T J P,
// which depends on the parameters.

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "focklab/expression.hpp"
#include "focklab/fock_finite.hpp"
#include "focklab/forms.hpp"
#include "focklab/heisenberg.hpp"

namespace focklab {

using RF = RationalFunction;
using RFMatrix = Matrix<RationalFunction>;
using RFState = FockVector<RationalFunction>;

struct HodgeFamily {
    std::string name;
    ParameterSpace params;
    std::size_t genus = 0;
    RFMatrix flat_gram;                   // 2g x 2g, constant, real
    RFMatrix frame;                       // 2g x g, columns v_1..v_g span F
    std::vector<GaussianRational> sample;  // real point for the positivity certificate
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

}  // namespace detail

/// Text format, one keyword per line ('#' starts a comment):
///   name modular
///   params x y
///   form 0 1            (one row of the flat Gram per line)
///   form -1 0
///   vector 1, x + i*y   (coordinates of one F-frame vector)
///   sample 0, 1
inline HodgeFamily parse_family(const std::string& text) {
    HodgeFamily fam;
    std::vector<std::vector<std::string>> form_rows, vectors;
    std::vector<std::string> sample;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto sp = line.find_first_of(" \t");
        std::string key = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : detail::trim(line.substr(sp));
        if (key == "name") {
            fam.name = rest;
        } else if (key == "params") {
            fam.params.names = detail::split_ws(rest);
        } else if (key == "form") {
            form_rows.push_back(detail::split_ws(rest));
        } else if (key == "vector") {
            vectors.push_back(detail::split(rest, ','));
        } else if (key == "sample") {
            sample = detail::split(rest, ',');
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown keyword '" + key + "'");
        }
    }
    const std::size_t g = vectors.size();
    if (g == 0) throw ParseError("family has no frame vectors");
    if (form_rows.size() != 2 * g) throw ParseError("flat Gram must have 2g rows");
    ParameterSpace none;
    fam.genus = g;
    fam.flat_gram = RFMatrix(2 * g, 2 * g);
    for (std::size_t r = 0; r < 2 * g; ++r) {
        if (form_rows[r].size() != 2 * g) throw ParseError("flat Gram row " + std::to_string(r) + " has wrong length");
        for (std::size_t c = 0; c < 2 * g; ++c) fam.flat_gram(r, c) = parse_rational_function(form_rows[r][c], none);
    }
    fam.frame = RFMatrix(2 * g, g);
    for (std::size_t k = 0; k < g; ++k) {
        if (vectors[k].size() != 2 * g) throw ParseError("frame vector " + std::to_string(k + 1) + " needs 2g coordinates");
        for (std::size_t r = 0; r < 2 * g; ++r) fam.frame(r, k) = parse_rational_function(vectors[k][r], fam.params);
    }
    if (sample.size() != fam.params.size()) throw ParseError("sample point needs one value per parameter");
    for (const auto& s : sample) {
        RF v = parse_rational_function(s, none);
        if (!v.is_constant() || !v.constant_value().is_real()) throw ParseError("sample values must be real constants");
        fam.sample.push_back(v.constant_value());
    }
    return fam;
}

inline HodgeFamily load_family(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open family file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_family(ss.str());
}

inline RFMatrix evaluate_at(const RFMatrix& m, const std::vector<GaussianRational>& p) {
    RFMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = RF(m(i, j).evaluate(p));
    return r;
}

inline Matrix<GaussianRational> constant_values(const RFMatrix& m) {
    Matrix<GaussianRational> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).constant_value();
    return r;
}

/// (a, b) = a^T J b on flat coordinate columns.
inline RF flat_pairing(const HodgeFamily& fam, const RFMatrix& a, std::size_t ca, const RFMatrix& b, std::size_t cb) {
    RF s;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < b.rows(); ++c)
            if (!fam.flat_gram(r, c).is_zero()) s += a(r, ca) * fam.flat_gram(r, c) * b(c, cb);
    return s;
}

/// Frame-independent one-form dM as a MatrixForm.
inline MatrixForm differential(const RFMatrix& m, std::size_t n) {
    MatrixForm w = zero_matrix_form(n, 1, m.rows(), m.cols());
    for (std::size_t k = 0; k < n; ++k) w.add({k}, derivative(m, k));
    return w;
}

struct FamilyCertificate {
    bool gram_constant = false;
    bool gram_antisymmetric = false;
    bool gram_nondegenerate = false;
    bool f_isotropic = false;
    bool spans = false;
    bool positive_at_sample = false;
    Matrix<GaussianRational> hermitian_at_sample;  // i (v_b, conj v_a)
    bool ok() const {
        return gram_constant && gram_antisymmetric && gram_nondegenerate && f_isotropic && spans && positive_at_sample;
    }
};

inline RFMatrix adapted_frame(const HodgeFamily& fam) {
    const std::size_t g = fam.genus;
    RFMatrix p(2 * g, 2 * g);
    p.set_block(0, 0, fam.frame);
    p.set_block(0, g, fam.frame.conj());
    return p;
}

inline FamilyCertificate certify_family(const HodgeFamily& fam) {
    const std::size_t g = fam.genus;
    FamilyCertificate c;
    c.gram_constant = true;
    for (std::size_t r = 0; r < 2 * g; ++r)
        for (std::size_t k = 0; k < 2 * g; ++k)
            c.gram_constant = c.gram_constant && fam.flat_gram(r, k).is_constant() &&
                              fam.flat_gram(r, k).constant_value().is_real();
    c.gram_antisymmetric = fam.flat_gram.transpose() == -fam.flat_gram;
    c.gram_nondegenerate = c.gram_constant && !determinant(constant_values(fam.flat_gram)).is_zero();
    c.f_isotropic = (fam.frame.transpose() * fam.flat_gram * fam.frame).is_zero();
    c.spans = !determinant(adapted_frame(fam)).is_zero();
    RFMatrix m = fam.frame.transpose() * fam.flat_gram * fam.frame.conj();  // (v_a, conj v_b)
    Matrix<GaussianRational> h(g, g);
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = 0; b < g; ++b) h(a, b) = GaussianRational::i() * m(b, a).evaluate(fam.sample);
    c.hermitian_at_sample = h;
    c.positive_at_sample = is_positive_definite(h);
    return c;
}

/// Throws the matching error when the family fails its invariants.
inline void require_family(const HodgeFamily& fam) {
    auto c = certify_family(fam);
    if (!c.gram_constant || !c.gram_antisymmetric || !c.gram_nondegenerate)
        throw NotSymplectic(fam.name + ": flat Gram is not a constant real symplectic form");
    if (!c.f_isotropic) throw NotSymplectic(fam.name + ": F is not isotropic");
    if (!c.spans) throw DegenerateFrame(fam.name + ": F + conj(F) does not span");
    if (!c.positive_at_sample) throw NotPositive(fam.name + ": i(v, conj v) is not positive at the sample point");
}

struct ConnectionData {
    std::size_t num_params = 0;
    std::size_t genus = 0;
    RFMatrix P, Pinv;
    RFMatrix G;  // (P_a, P_b)
    RFMatrix M;  // (v_p, conj v_k)
    RFMatrix N;  // (conj v_q, v_k)
    MatrixForm AH, AF, AFbar, sigma, sigma_bar;
    MatrixForm s;      // coefficients of v_p (x) v_q
    MatrixForm s_bar;  // coefficients of conj v_p (x) conj v_q
    bool blocks_reproduce = false;
    bool conj_consistent = false;
    bool sigma_symmetric = false;
    bool s_symmetric = false;
    bool s_inverts_E = false;   // E_F(s) = sigmabar and E_Fbar(sbar) = sigma
    bool tensorial = false;     // sigma(f v_1) = f sigma(v_1) for f = 1 + p_0^2
    bool flat = false;          // curvature of A^H vanishes
};

namespace detail {

inline MatrixForm block_of(const MatrixForm& w, std::size_t r0, std::size_t c0, std::size_t n) {
    return w.map([&](const RFMatrix& m) { return m.block(r0, c0, n, n); });
}

inline MatrixForm times_right(const MatrixForm& w, const RFMatrix& m) {
    return w.map([&](const RFMatrix& c) { return c * m; });
}

}  // namespace detail

inline ConnectionData connection_blocks(const HodgeFamily& fam) {
    require_family(fam);
    const std::size_t g = fam.genus, n = fam.params.size();
    ConnectionData d;
    d.num_params = n;
    d.genus = g;
    d.P = adapted_frame(fam);
    d.Pinv = inverse(d.P);
    d.G = d.P.transpose() * fam.flat_gram * d.P;
    d.M = d.G.block(0, g, g, g);
    d.N = d.G.block(g, 0, g, g);
    d.AH = differential(d.P, n).map([&](const RFMatrix& m) { return d.Pinv * m; });
    d.AF = detail::block_of(d.AH, 0, 0, g);
    d.sigma_bar = detail::block_of(d.AH, 0, g, g);
    d.sigma = detail::block_of(d.AH, g, 0, g);
    d.AFbar = detail::block_of(d.AH, g, g, g);

    MatrixForm back = zero_matrix_form(n, 1, 2 * g, 2 * g);
    for (std::size_t k = 0; k < n; ++k) {
        RFMatrix m(2 * g, 2 * g);
        m.set_block(0, 0, d.AF.coefficient({k}));
        m.set_block(0, g, d.sigma_bar.coefficient({k}));
        m.set_block(g, 0, d.sigma.coefficient({k}));
        m.set_block(g, g, d.AFbar.coefficient({k}));
        back.add({k}, m);
    }
    d.blocks_reproduce = back == d.AH;
    d.conj_consistent = d.AFbar == d.AF.conj() && d.sigma_bar == d.sigma.conj();
    d.flat = curvature(d.AH).is_zero();

    // (sigma(v_k), v_m) = (sigma^T N)_km
    d.sigma_symmetric = true;
    for (const auto& [k, c] : d.sigma.terms()) d.sigma_symmetric = d.sigma_symmetric && is_symmetric(RFMatrix(c.transpose() * d.N));

    const RF h(GaussianRational(make_rational(1, 2)));
    d.s_bar = detail::times_right(d.sigma, inverse(d.N)).map([&](const RFMatrix& m) { return h * m; });
    d.s = detail::times_right(d.sigma_bar, inverse(d.M)).map([&](const RFMatrix& m) { return h * m; });
    d.s_symmetric = true;
    for (const auto* w : {&d.s, &d.s_bar})
        for (const auto& [k, c] : w->terms()) d.s_symmetric = d.s_symmetric && is_symmetric(c);

    // E_F(s)(conj v_k) = 2 sum s_pq (v_q, conj v_k) v_p
    const RF two(2);
    d.s_inverts_E = detail::times_right(d.s, d.M).map([&](const RFMatrix& m) { return two * m; }) == d.sigma_bar &&
                    detail::times_right(d.s_bar, d.N).map([&](const RFMatrix& m) { return two * m; }) == d.sigma;

    // Tensoriality: project d(f v_1) onto Fbar and compare with f sigma(v_1).
    const RF f = n ? RF(1) + RF::variable(0) * RF::variable(0) : RF(1);
    RFMatrix fv = fam.frame.block(0, 0, 2 * g, 1);
    for (std::size_t r = 0; r < 2 * g; ++r) fv(r, 0) = f * fv(r, 0);
    d.tensorial = true;
    for (std::size_t k = 0; k < n; ++k) {
        RFMatrix proj = (d.Pinv * derivative(fv, k)).block(g, 0, g, 1);
        RFMatrix expect = d.sigma.coefficient({k}).block(0, 0, g, 1);
        for (std::size_t r = 0; r < g; ++r) expect(r, 0) = f * expect(r, 0);
        d.tensorial = d.tensorial && proj == expect;
    }
    return d;
}

/// The Fbar-projection of nabla^H on the F-frame.
inline MatrixForm second_fundamental_form(const HodgeFamily& fam) { return connection_blocks(fam).sigma; }

/// Operators on Sym Fbar with rational-function coefficients.
class FockBundle {
public:
    explicit FockBundle(const ConnectionData& d) : d_(d), g_(d.genus) {
        alg_.pairing = [this](int a, int b) { return d_.G(index(a), index(b)); };
        alg_.annihilator = [](int a) { return a > 0; };
    }

    const HeisenbergAlgebra<RF>& algebra() const { return alg_; }
    const ConnectionData& data() const { return d_; }
    std::size_t genus() const { return g_; }

    /// Sorted creator words of grade <= cap, each with coefficient 1.
    std::vector<RFState> probes(std::size_t cap) const {
        std::vector<RFState> out;
        Word w;
        std::function<void(int)> rec = [&](int lo) {
            out.push_back(RFState::basis(w));
            if (w.size() == cap) return;
            for (int a = lo; a <= -1; ++a) {
                w.push_back(a);
                rec(a);
                w.pop_back();
            }
        };
        rec(-static_cast<int>(g_));
        return out;
    }

    /// Endomorphism of Fbar (columns = images of conj v_k) acting as a derivation.
    RFState derivation(const RFMatrix& a, const RFState& v) const {
        RFState out;
        for (const auto& [w, c] : v.terms()) {
            for (std::size_t k = 0; k < w.size(); ++k) {
                if (k > 0 && w[k] == w[k - 1]) continue;
                std::size_t mult = 1;
                while (k + mult < w.size() && w[k + mult] == w[k]) ++mult;
                const std::size_t col = static_cast<std::size_t>(-w[k] - 1);
                for (std::size_t r = 0; r < g_; ++r) {
                    if (a(r, col).is_zero()) continue;
                    Word n = w;
                    n[k] = -static_cast<int>(r) - 1;
                    std::sort(n.begin(), n.end());
                    out.add(std::move(n), c * a(r, col) * RF(static_cast<long>(mult)));
                }
            }
        }
        return out;
    }

    /// rho(sum t_pq x_p x_q) with x_p = v_p (sign = +1) or conj v_p (sign = -1).
    RFState quadratic(const RFMatrix& t, int sign, const RFState& v) const {
        RFState out;
        for (std::size_t q = 0; q < g_; ++q) {
            RFState partial;
            bool any = false;
            for (std::size_t p = 0; p < g_; ++p) any = any || !t(p, q).is_zero();
            if (!any) continue;
            RFState vq = apply_generator(alg_, sign * static_cast<int>(q + 1), v);
            for (std::size_t p = 0; p < g_; ++p)
                if (!t(p, q).is_zero()) out += t(p, q) * apply_generator(alg_, sign * static_cast<int>(p + 1), vq);
        }
        return out;
    }

    RFState partial(std::size_t k, const RFState& v) const {
        return v.map_coefficients([k](const RF& c) { return c.derivative(k); });
    }

    /// nabla^Fbar_k = d_k + D(A^Fbar_k)
    RFState nabla_fbar(std::size_t k, const RFState& v) const {
        return partial(k, v) + derivation(d_.AFbar.coefficient({k}), v);
    }

    RFState rho_s(std::size_t k, const RFState& v) const { return quadratic(d_.s.coefficient({k}), 1, v); }
    RFState rho_s_bar(std::size_t k, const RFState& v) const { return quadratic(d_.s_bar.coefficient({k}), -1, v); }

    /// nabla^FF_k = nabla^Fbar_k + rho(s_k + sbar_k)
    RFState nabla(std::size_t k, const RFState& v) const { return nabla_fbar(k, v) + rho_s(k, v) + rho_s_bar(k, v); }

    RFState curvature(std::size_t i, std::size_t j, const RFState& v) const {
        return nabla(i, nabla(j, v)) - nabla(j, nabla(i, v));
    }

    /// <conj v_a, conj v_b> = i (v_b, conj v_a) at a point.
    Matrix<GaussianRational> creator_gram_at(const std::vector<GaussianRational>& p) const {
        Matrix<GaussianRational> h(g_, g_);
        for (std::size_t a = 0; a < g_; ++a)
            for (std::size_t b = 0; b < g_; ++b) h(a, b) = GaussianRational::i() * d_.M(b, a).evaluate(p);
        return h;
    }

    /// Linear in v, antilinear in w; coefficients evaluated at p.
    GaussianRational inner_product_at(const RFState& v, const RFState& w, const std::vector<GaussianRational>& p) const {
        Matrix<GaussianRational> h = creator_gram_at(p);
        GaussianRational s(0);
        for (const auto& [u, c] : v.terms())
            for (const auto& [x, e] : w.terms()) {
                if (u.size() != x.size()) continue;
                Matrix<GaussianRational> m(u.size(), u.size());
                for (std::size_t i = 0; i < u.size(); ++i)
                    for (std::size_t j = 0; j < u.size(); ++j)
                        m(i, j) = h(static_cast<std::size_t>(-u[i] - 1), static_cast<std::size_t>(-x[j] - 1));
                s += c.evaluate(p) * e.evaluate(p).conj() * permanent(m);
            }
        return s;
    }

private:
    std::size_t index(int a) const {
        return a > 0 ? static_cast<std::size_t>(a - 1) : g_ + static_cast<std::size_t>(-a - 1);
    }

    const ConnectionData& d_;
    std::size_t g_;
    HeisenbergAlgebra<RF> alg_;
};

struct IdentityCheck {
    std::string id;
    bool holds = false;
    std::string witness;  // first offending entry when it fails
};

struct Theorem31Report {
    std::string family;
    std::vector<std::string> param_names;
    std::size_t probe_cap = 0;
    std::size_t probes = 0;
    ScalarForm omega;           // scalar curvature read off the probes
    ScalarForm stated;          // -1/2 trace(sigma ^ sigmabar)
    ScalarForm proof_value;     // -1/2 trace(sigmabar ^ sigma)
    ScalarForm half_det;        // 1/2 curvature of det(F, nabla^F)
    std::vector<IdentityCheck> checks;

    const IdentityCheck* find(const std::string& id) const {
        for (const auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }
    bool holds(const std::string& id) const {
        auto* c = find(id);
        return c && c->holds;
    }
    bool all_hold() const {
        return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
    }
    void require() const {
        for (const auto& c : checks)
            if (!c.holds) throw IdentityFailed(family + ": " + c.id + " at " + c.witness);
    }
};

namespace detail {

inline std::string key_name(const WedgeKey& k, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t j = 0; j < k.size(); ++j) s += (j ? "^d" : "d") + names.at(k[j]);
    return s;
}

/// First nonzero matrix entry of a form, or "" when the form vanishes.
inline std::string first_entry(const MatrixForm& w, const std::vector<std::string>& names) {
    for (const auto& [k, m] : w.terms())
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (!m(r, c).is_zero())
                    return key_name(k, names) + " entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                           ") = " + m(r, c).str(names);
    return "";
}

inline std::string first_entry(const ScalarForm& w, const std::vector<std::string>& names) {
    for (const auto& [k, c] : w.terms()) return key_name(k, names) + " = " + c.str(names);
    return "";
}

inline std::string first_entry(const RFState& v, const std::vector<std::string>& names) {
    for (const auto& [w, c] : v.terms()) {
        std::string s = "word [";
        for (std::size_t j = 0; j < w.size(); ++j) s += (j ? " " : "") + std::to_string(w[j]);
        return s + "] coefficient " + c.str(names);
    }
    return "";
}

inline ScalarForm scaled(const ScalarForm& w, const RF& c) {
    return w.map([&](const RF& x) { return c * x; });
}

}  // namespace detail

/// Exact certification of the curvature theorem and its supporting identities
/// on Fock probes of grade <= probe_cap.
inline Theorem31Report verify_theorem31(const HodgeFamily& fam, std::size_t probe_cap = 4) {
    const ConnectionData d = connection_blocks(fam);
    const FockBundle fb(d);
    const auto& names = fam.params.names;
    const std::size_t n = d.num_params;
    const RF half(GaussianRational(make_rational(1, 2)));
    Theorem31Report rep;
    rep.family = fam.name;
    rep.param_names = names;
    rep.probe_cap = probe_cap;
    auto probes = fb.probes(probe_cap);
    rep.probes = probes.size();
    auto check = [&](std::string id, bool ok, std::string witness) {
        rep.checks.push_back({std::move(id), ok, ok ? "" : std::move(witness)});
    };
    auto check_form = [&](std::string id, const auto& diff) {
        check(std::move(id), diff.is_zero(), detail::first_entry(diff, names));
    };

    check("frame.blocks", d.blocks_reproduce, "block reassembly differs from A^H");
    check("frame.flat", d.flat, "curvature of A^H");
    check("frame.conjugation", d.conj_consistent, "A^Fbar or sigmabar is not the conjugate block");
    check("sigma.symmetric", d.sigma_symmetric, "(sigma(v_k), v_m) is not symmetric");
    check("sigma.tensorial", d.tensorial, "sigma(f v_1) differs from f sigma(v_1)");
    check("s.symmetric", d.s_symmetric, "s or sbar is not symmetric");
    check("s.inverts_E", d.s_inverts_E, "E_F(s) differs from sigmabar");

    // (dagger)
    check_form("dagger.first", curvature(d.AFbar) + wedge(d.sigma, d.sigma_bar));
    check_form("dagger.second", d.sigma_bar.d() + wedge(d.AF, d.sigma_bar) + wedge(d.sigma_bar, d.AFbar));

    const ScalarForm tr_ssb = trace(wedge(d.sigma, d.sigma_bar));
    const ScalarForm tr_sbs = trace(wedge(d.sigma_bar, d.sigma));
    const ScalarForm det_curv = trace(curvature(d.AF));
    rep.stated = detail::scaled(tr_ssb, -half);
    rep.proof_value = detail::scaled(tr_sbs, -half);
    rep.half_det = detail::scaled(det_curv, half);
    check_form("trace.antisymmetry", tr_ssb + tr_sbs);
    check_form("det.curvature", det_curv + tr_sbs);

    // Scalar curvature: read on the vacuum, then tested on every probe.
    rep.omega = ScalarForm(n, 2, RF());
    bool scalar = true;
    std::string scalar_witness;
    const RFState vac = RFState::vacuum();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            RFState ov = fb.curvature(i, j, vac);
            RF c = ov.coefficient({});
            rep.omega.add({i, j}, c);
            for (const auto& p : probes) {
                RFState diff = fb.curvature(i, j, p) - c * p;
                if (!diff.is_zero() && scalar) {
                    scalar = false;
                    scalar_witness = detail::key_name({i, j}, names) + " on probe: " + detail::first_entry(diff, names);
                }
            }
        }
    check("curvature.scalar", scalar, scalar_witness);
    check_form("theorem.stated_scalar", rep.omega - rep.stated);
    check_form("theorem.half_det", rep.omega - rep.half_det);
    check_form("theorem.proof_scalar", rep.omega - rep.proof_value);

    // Lemma: d s + A^Fbar ^ s + s ^ A^Fbar = 0 as operators, i.e.
    // [nabla^Fbar_i, rho(s_j)] - [nabla^Fbar_j, rho(s_i)] = 0, and the same for sbar.
    for (int which = 0; which < 2; ++which) {
        auto rho = [&](std::size_t k, const RFState& v) { return which == 0 ? fb.rho_s(k, v) : fb.rho_s_bar(k, v); };
        bool ok = true;
        std::string wit;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j)
                for (const auto& p : probes) {
                    RFState r = fb.nabla_fbar(i, rho(j, p)) - rho(j, fb.nabla_fbar(i, p)) - fb.nabla_fbar(j, rho(i, p)) +
                                rho(i, fb.nabla_fbar(j, p));
                    if (!r.is_zero()) {
                        ok = false;
                        wit = detail::key_name({i, j}, names) + ": " + detail::first_entry(r, names);
                        break;
                    }
                }
        check(which == 0 ? "lemma.s_parallel" : "lemma.sbar_parallel", ok, wit);
    }

    // Lemma: -sigma^sigmabar + s^sbar + sbar^s = -1/2 trace(sigmabar ^ sigma) on Sym Fbar.
    {
        const MatrixForm ssb = wedge(d.sigma, d.sigma_bar);
        bool ok = true;
        std::string wit;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                const RF scalar_ij = rep.proof_value.coefficient({i, j});
                const RFMatrix e = ssb.coefficient({i, j});
                for (const auto& p : probes) {
                    RFState lhs = fb.derivation(-e, p);
                    lhs += fb.rho_s(i, fb.rho_s_bar(j, p)) - fb.rho_s(j, fb.rho_s_bar(i, p));
                    lhs += fb.rho_s_bar(i, fb.rho_s(j, p)) - fb.rho_s_bar(j, fb.rho_s(i, p));
                    RFState r = lhs - scalar_ij * p;
                    if (!r.is_zero()) {
                        ok = false;
                        wit = detail::key_name({i, j}, names) + ": " + detail::first_entry(r, names);
                        break;
                    }
                }
            }
        check("lemma.trace", ok, wit);
    }

    // Unitarity: rho(s_k + sbar_k) is skew-Hermitian at the sample point.
    {
        auto small = fb.probes(std::min<std::size_t>(probe_cap, 3));
        bool ok = true;
        std::string wit;
        for (std::size_t k = 0; k < n && ok; ++k)
            for (const auto& v : small) {
                RFState xv = fb.rho_s(k, v) + fb.rho_s_bar(k, v);
                for (const auto& w : small) {
                    RFState xw = fb.rho_s(k, w) + fb.rho_s_bar(k, w);
                    GaussianRational t = fb.inner_product_at(xv, w, fam.sample) + fb.inner_product_at(v, xw, fam.sample);
                    if (!t.is_zero()) {
                        ok = false;
                        wit = "d" + names.at(k) + ": " + detail::first_entry(v, names) + " vs " + detail::first_entry(w, names);
                        break;
                    }
                }
                if (!ok) break;
            }
        check("unitarity.sample", ok, wit);
    }
    return rep;
}

struct USectionReport {
    MatrixForm u;             // coefficients of e_-i (x) e_-j
    bool symmetric = false;
    bool E_is_sigma = false;  // (E_F(u) e_k, e_l) = (sigma e_k, e_l)
    bool extension_in_fbar = false;
    bool equals_s_bar = false;      // only meaningful when extension_in_fbar
    bool proposition_s_bar = false;  // nabla^FF = nabla^H + rho(sbar) on probes
    bool proposition_u_scalar = false;  // with u instead, the members differ by a scalar
    ScalarForm u_shift;       // that scalar 1-form
};

/// ext: 2g x 2g flat coordinates, columns e_1..e_g then e_-1..e_-g.
inline USectionReport u_section(const HodgeFamily& fam, const RFMatrix& ext, std::size_t probe_cap = 2) {
    const ConnectionData d = connection_blocks(fam);
    const std::size_t g = d.genus, n = d.num_params;
    if (ext.rows() != 2 * g || ext.cols() != 2 * g) throw NotSymplecticFrame("extension frame must be 2g x 2g");
    for (std::size_t a = 0; a < 2 * g; ++a)
        for (std::size_t b = 0; b < 2 * g; ++b) {
            RF want;
            if (a < g && b == a + g) want = RF(1);
            if (a >= g && b + g == a) want = RF(-1);
            if (flat_pairing(fam, ext, a, ext, b) != want) throw NotSymplecticFrame("(e_i, e_j) != sign(i) delta");
        }
    const RFMatrix coords = d.Pinv * ext;  // columns in the adapted frame
    if (!coords.block(g, 0, g, g).is_zero()) throw NotSymplecticFrame("e_1..e_g must lie in F");

    USectionReport rep;
    const RF half(GaussianRational(make_rational(1, 2)));
    rep.u = zero_matrix_form(n, 1, g, g);
    for (std::size_t k = 0; k < n; ++k) {
        RFMatrix de = derivative(ext, k);
        RFMatrix uk(g, g);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j) uk(i, j) = half * flat_pairing(fam, de, j, ext, i);
        rep.u.add({k}, uk);
    }
    rep.symmetric = true;
    for (const auto& [k, c] : rep.u.terms()) rep.symmetric = rep.symmetric && is_symmetric(c);

    // (E_F(u) e_k, e_l) = 2 U_lk against (sigma e_k, e_l).
    rep.E_is_sigma = true;
    for (std::size_t k = 0; k < n; ++k) {
        RFMatrix uk = rep.u.coefficient({k});
        RFMatrix de = derivative(ext, k);
        RFMatrix fbar_part = d.P.block(0, g, 2 * g, g) * (d.Pinv * de).block(g, 0, g, 2 * g);
        for (std::size_t a = 0; a < g; ++a)
            for (std::size_t b = 0; b < g; ++b)
                rep.E_is_sigma = rep.E_is_sigma && RF(2) * uk(b, a) == flat_pairing(fam, fbar_part, a, ext, b);
    }

    // u in conj v (x) conj v coordinates when every e_-i lies in Fbar.
    rep.extension_in_fbar = coords.block(0, g, g, g).is_zero();
    if (rep.extension_in_fbar) {
        const RFMatrix C = coords.block(g, g, g, g);
        MatrixForm u_vbar = rep.u.map([&](const RFMatrix& m) { return C * m * C.transpose(); });
        rep.equals_s_bar = u_vbar == d.s_bar;
    }

    // Proposition on creator probes with constant coefficients.
    const FockBundle fb(d);
    const auto& alg = fb.algebra();
    auto label_of = [&](std::size_t idx) { return idx < g ? static_cast<int>(idx + 1) : -static_cast<int>(idx - g + 1); };
    auto apply_vector = [&](const RFMatrix& col, const RFState& v) {
        RFState out;
        for (std::size_t a = 0; a < 2 * g; ++a)
            if (!col(a, 0).is_zero()) out += col(a, 0) * apply_generator(alg, label_of(a), v);
        return out;
    };
    rep.proposition_s_bar = true;
    rep.proposition_u_scalar = true;
    rep.u_shift = ScalarForm(n, 1, RF());
    auto probes = fb.probes(probe_cap);
    for (std::size_t k = 0; k < n; ++k) {
        const RFMatrix AHk = d.AH.coefficient({k});
        const RFMatrix uk = rep.u.coefficient({k});
        // rho(u_k) v_o with e_-i written in the adapted frame
        RFState u_vac;
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j)
                if (!uk(i, j).is_zero())
                    u_vac += uk(i, j) * apply_vector(coords.block(0, g + i, 2 * g, 1),
                                                     apply_vector(coords.block(0, g + j, 2 * g, 1), RFState::vacuum()));
        RFState sbar_vac = fb.rho_s_bar(k, RFState::vacuum());
        bool have_shift = false;
        RF shift;
        for (const auto& p : probes) {
            const Word w = p.terms().begin()->first;  // creators, applied right to left
            RFState rhs_h;
            for (std::size_t pos = 0; pos < w.size(); ++pos) {
                // letters after pos act first on v_o, then nabla^H of letter pos, then the rest
                RFState cur = RFState::vacuum();
                for (std::size_t q = w.size(); q-- > pos + 1;) cur = apply_generator(alg, w[q], cur);
                cur = apply_vector(AHk.block(0, g + static_cast<std::size_t>(-w[pos] - 1), 2 * g, 1), cur);
                for (std::size_t q = pos; q-- > 0;) cur = apply_generator(alg, w[q], cur);
                rhs_h += cur;
            }
            auto prefix = [&](RFState cur) {
                for (std::size_t q = w.size(); q-- > 0;) cur = apply_generator(alg, w[q], cur);
                return cur;
            };
            RFState lhs = fb.nabla(k, p);
            if (lhs != rhs_h + prefix(sbar_vac)) rep.proposition_s_bar = false;
            RFState diff = lhs - rhs_h - prefix(u_vac);
            if (!have_shift) {
                shift = diff.coefficient(w);
                have_shift = true;
            }
            if (diff != shift * p) rep.proposition_u_scalar = false;
        }
        rep.u_shift.add({k}, shift);
    }
    return rep;
}

}  // namespace focklab
