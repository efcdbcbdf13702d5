#pragma once

// Fock representation of a finite-dimensional symplectic space H = F + F'
// with a polarized weight one Hodge structure.
//
// Coordinates on H are taken in the order [e_1..e_g, e_-1..e_-g] and the
// Gram rule is (e_a, e_b) = level * a * [a + b = 0]. Labels a > 0 span F and
// kill the vacuum; labels a < 0 span F' and act by multiplication on Sym F'.
// Tensors in H (x) H are square matrices: alpha = sum alpha_pq e_p (x) e_q.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "focklab/heisenberg.hpp"
#include "focklab/matrix.hpp"

namespace focklab {

using Scalar = GaussianRational;
using ScalarMatrix = Matrix<Scalar>;
using HVector = std::vector<Scalar>;
using Operator = UElement<Scalar>;
using FockState = FockVector<Scalar>;

/// Permanent by Ryser's inclusion-exclusion formula.
template <class S>
S permanent(const Matrix<S>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("permanent of non-square matrix");
    if (n == 0) return S(1);
    if (n > 16) throw DegreeOverflow("permanent beyond 16x16");
    S total(0);
    for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
        S prod(1);
        for (std::size_t i = 0; i < n && !is_zero(prod); ++i) {
            S row(0);
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (1UL << j)) row += a(i, j);
            prod *= row;
        }
        const int bits = __builtin_popcountl(mask);
        if ((n - static_cast<std::size_t>(bits)) % 2)
            total -= prod;
        else
            total += prod;
    }
    return total;
}

/// Which constant sits in front of sqrt(-1)(w, zbar) on F-bar.
enum class Normalization { MainText, Footnote };

/// Basis change adapted to (F, F'): columns are e_1..e_g followed by a
/// basis f_-1..f_-g of an isotropic complement F'.
struct IsotropicComplement {
    ScalarMatrix basis;
};

class SymplecticSpace {
public:
    /// Hodge structure whose Hermitian Gram sqrt(-1)(e_i, conj e_k) on F is
    /// the real symmetric positive definite matrix `hermitian`.
    SymplecticSpace(int g, const ScalarMatrix& hermitian, Rational level = Rational(1)) : g_(g), level_(std::move(level)) {
        if (g < 1) throw DimensionMismatch("genus must be positive");
        const auto n = static_cast<std::size_t>(g);
        if (hermitian.rows() != n || hermitian.cols() != n) throw DimensionMismatch("Hermitian Gram must be g x g");
        if (!is_symmetric(hermitian)) throw NotSymmetric("Hermitian Gram must be real symmetric");
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (!hermitian(r, c).is_real()) throw NotSymmetric("Hermitian Gram must be real symmetric");
        if (sgn(level_) <= 0) throw NotPositive("level must be positive");
        if (!is_positive_definite(hermitian)) throw NotPositive("Hermitian Gram is not positive definite");
        build_gram();
        // conj(e_i) = sum_j M_ji e_-j with M = -i Delta^-1 S, Delta = diag(level * i).
        ScalarMatrix delta_inv(n, n);
        for (std::size_t k = 0; k < n; ++k) delta_inv(k, k) = Scalar(Rational(1) / (level_ * static_cast<long>(k + 1)));
        ScalarMatrix m = (-Scalar::i()) * (delta_inv * hermitian);
        ScalarMatrix c(2 * n, 2 * n);
        c.set_block(n, 0, m);
        // conj is an involution: conj(e_-j) = sum_i N_ij e_i with N = conj(M)^-1.
        c.set_block(0, n, inverse(m.conj()));
        conj_ = c;
        finish();
    }

    /// Default structure e_-i = sqrt(-1) conj(e_i).
    static SymplecticSpace standard(int g, Rational level = Rational(1)) {
        const auto n = static_cast<std::size_t>(g);
        ScalarMatrix s(n, n);
        for (std::size_t k = 0; k < n; ++k) s(k, k) = Scalar(level * static_cast<long>(k + 1));
        return SymplecticSpace(g, s, level);
    }

    int genus() const { return g_; }
    std::size_t dim() const { return 2 * static_cast<std::size_t>(g_); }
    const Rational& level() const { return level_; }

    int label(std::size_t idx) const {
        const auto n = static_cast<std::size_t>(g_);
        return idx < n ? static_cast<int>(idx + 1) : -static_cast<int>(idx - n + 1);
    }
    std::size_t index(int label) const {
        if (label == 0 || std::abs(label) > g_) throw DimensionMismatch("label out of range: " + std::to_string(label));
        return label > 0 ? static_cast<std::size_t>(label - 1) : static_cast<std::size_t>(g_ - label - 1);
    }

    HVector basis_vector(int label) const {
        HVector v(dim(), Scalar(0));
        v[index(label)] = Scalar(1);
        return v;
    }

    Scalar pairing(int a, int b) const { return a + b == 0 ? Scalar(level_ * static_cast<long>(a)) : Scalar(0); }
    const ScalarMatrix& gram() const { return gram_; }
    const HeisenbergAlgebra<Scalar>& algebra() const { return alg_; }

    Scalar form(const HVector& a, const HVector& b) const {
        Scalar s(0);
        for (std::size_t p = 0; p < dim(); ++p) {
            if (is_zero(a[p])) continue;
            for (std::size_t q = 0; q < dim(); ++q)
                if (!is_zero(b[q])) s += a[p] * gram_(p, q) * b[q];
        }
        return s;
    }

    /// Column j holds conj(basis_j).
    const ScalarMatrix& conjugation() const { return conj_; }

    HVector conj(const HVector& a) const {
        HVector c(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) c[k] = focklab::conj(a[k]);
        return conj_ * c;
    }

    /// sqrt(-1)(e_i, conj e_k) for i, k in 1..g.
    ScalarMatrix hermitian_gram() const {
        const auto n = static_cast<std::size_t>(g_);
        ScalarMatrix h(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) h(i, k) = Scalar::i() * form(basis_vector(label(i)), conj(basis_vector(label(k))));
        return h;
    }

    /// <e_-a, e_-b> on F' = F-bar, for a, b in 1..g, main-text normalization.
    const ScalarMatrix& creator_gram() const { return creator_gram_; }

    // --- E: H (x) H -> End(H), E(a (x) b)(x) = 2 (b, x) a -------------------

    ScalarMatrix E_map(const ScalarMatrix& alpha) const {
        check_square(alpha);
        if (!is_symmetric(alpha)) throw NotSymmetric("E is applied to symmetric tensors");
        return Scalar(2) * (alpha * gram_);
    }

    ScalarMatrix E_inverse(const ScalarMatrix& a) const {
        check_square(a);
        ScalarMatrix alpha = Scalar(make_rational(1, 2)) * (a * gram_inv_);
        if (!is_symmetric(alpha)) throw NotSymplectic("endomorphism is not in sp(H)");
        return alpha;
    }

    bool in_sp(const ScalarMatrix& a) const {
        check_square(a);
        return (a.transpose() * gram_ + gram_ * a).is_zero();
    }

    /// Restriction of E(alpha) to a map F' -> F (alpha in F (x) F).
    ScalarMatrix E_F(const ScalarMatrix& alpha) const {
        const auto n = static_cast<std::size_t>(g_);
        return E_map(alpha).block(0, n, n, n);
    }
    /// Restriction of E(alpha) to a map F -> F' (alpha in F' (x) F').
    ScalarMatrix E_Fbar(const ScalarMatrix& alpha) const {
        const auto n = static_cast<std::size_t>(g_);
        return E_map(alpha).block(n, 0, n, n);
    }

    /// conj(a_1 (x) ... (x) a_n) = conj(a_n) (x) ... (x) conj(a_1), on H (x) H.
    ScalarMatrix conj_tensor(const ScalarMatrix& alpha) const {
        check_square(alpha);
        return conj_ * alpha.conj().transpose() * conj_.transpose();
    }

    // --- normal ordering, tau and tau-hat -----------------------------------

    /// Projector: identity on F(x)F, F'(x)F, F'(x)F', transposition on F(x)F'.
    ScalarMatrix normal_order(const ScalarMatrix& alpha) const {
        check_square(alpha);
        const auto n = static_cast<std::size_t>(g_);
        ScalarMatrix out = alpha;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = n; q < 2 * n; ++q) {
                out(q, p) += alpha(p, q);
                out(p, q) = Scalar(0);
            }
        return out;
    }

    Operator vector_operator(const HVector& a) const {
        Operator u;
        for (std::size_t p = 0; p < dim(); ++p)
            if (!is_zero(a[p])) u += Operator::generator(label(p), a[p]);
        return u;
    }

    /// Image of alpha in U(H-hat), times hbar^hbar.
    Operator hat(const ScalarMatrix& alpha, int hbar = 0) const {
        check_square(alpha);
        Operator u;
        for (std::size_t p = 0; p < dim(); ++p)
            for (std::size_t q = 0; q < dim(); ++q)
                if (!is_zero(alpha(p, q))) u += Operator::product(alg_, {label(p), label(q)}, hbar, alpha(p, q));
        return u;
    }

    /// hat(alpha) for alpha given in the coordinates of an adapted basis P.
    Operator hat_in_basis(const ScalarMatrix& alpha_b, const ScalarMatrix& p, int hbar = 0) const {
        Operator u;
        for (std::size_t a = 0; a < dim(); ++a)
            for (std::size_t b = 0; b < dim(); ++b) {
                if (is_zero(alpha_b(a, b))) continue;
                Operator left = vector_operator(p.column_vector(a));
                Operator right = vector_operator(p.column_vector(b));
                Operator prod = multiply(alg_, left, right);
                for (const auto& [m, c] : prod.terms()) u.add(Monomial{m.labels, m.hbar + hbar}, alpha_b(a, b) * c);
            }
        return u;
    }

    Operator tau(const ScalarMatrix& a) const { return hat(E_inverse(a), -1); }

    Operator tau_hat(const ScalarMatrix& a) const { return hat(normal_order(E_inverse(a)), -1); }

    /// tau-hat relative to another isotropic complement F'.
    Operator tau_hat(const ScalarMatrix& a, const IsotropicComplement& fp) const {
        check_complement(fp);
        ScalarMatrix pinv = inverse(fp.basis);
        ScalarMatrix alpha_b = pinv * E_inverse(a) * pinv.transpose();
        return hat_in_basis(normal_order(alpha_b), fp.basis, -1);
    }

    /// trace of A restricted to F' and projected along F onto F'.
    Scalar trace_on_complement(const ScalarMatrix& a) const {
        const auto n = static_cast<std::size_t>(g_);
        return a.block(n, n, n, n).trace();
    }
    Scalar trace_on_complement(const ScalarMatrix& a, const IsotropicComplement& fp) const {
        check_complement(fp);
        const auto n = static_cast<std::size_t>(g_);
        return (inverse(fp.basis) * a * fp.basis).block(n, n, n, n).trace();
    }

    /// The explicit sum (1/2 hbar) sum (D e_i, e_j)/(level^2 i j) :e_-i e_-j:
    /// over all labels i, j; an independent route to tau_hat.
    Operator tau_hat_by_display(const ScalarMatrix& d) const {
        check_square(d);
        Operator u;
        const Scalar half_l2 = Scalar(Rational(1) / (2 * level_ * level_));
        for (std::size_t pi = 0; pi < dim(); ++pi)
            for (std::size_t pj = 0; pj < dim(); ++pj) {
                const int i = label(pi), j = label(pj);
                Scalar c = form(d * basis_vector(i), basis_vector(j));
                if (is_zero(c)) continue;
                c = half_l2 * c / Scalar(static_cast<long>(i) * j);
                // :e_-i e_-j: puts the F' letter (negative label) first.
                int x = -i, y = -j;
                if (x > 0 && y < 0) std::swap(x, y);
                u += Operator::product(alg_, {x, y}, -1, c);
            }
        return u;
    }

    /// Second complement spanned by f_-i = e_-i + sum_j c_ji e_j with
    /// c_ik = k s_ik for symmetric s; isotropic for every symmetric s.
    IsotropicComplement complement_from_symmetric(const ScalarMatrix& s) const {
        const auto n = static_cast<std::size_t>(g_);
        if (s.rows() != n || s.cols() != n) throw DimensionMismatch("s must be g x g");
        if (!is_symmetric(s)) throw NotSymmetric("complement parameter must be symmetric");
        ScalarMatrix p = ScalarMatrix::identity(2 * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) p(i, n + k) = Scalar(static_cast<long>(k + 1)) * s(i, k);
        IsotropicComplement fp{p};
        check_complement(fp);
        return fp;
    }

    // --- Fock space Sym F' ----------------------------------------------------

    FockState rho(const Operator& u, const FockState& v) const { return rho_apply(alg_, u, v); }
    FockState rho_via_algebra(const Operator& u, const FockState& v) const { return rho_apply_via_algebra(alg_, u, v); }

    /// Sorted creator words of the given length.
    std::vector<Word> fock_basis(std::size_t degree) const {
        std::vector<Word> out;
        Word w;
        std::function<void(int)> rec = [&](int lo) {
            if (w.size() == degree) {
                out.push_back(w);
                return;
            }
            for (int a = lo; a <= -1; ++a) {
                w.push_back(a);
                rec(a);
                w.pop_back();
            }
        };
        rec(-g_);
        return out;
    }

    /// <u, w> on basis words: the permanent of <e_{u_i}, e_{w_j}>.
    Scalar word_inner_product(const Word& u, const Word& w) const {
        if (u.size() != w.size()) return Scalar(0);
        ScalarMatrix m(u.size(), u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j)
                m(i, j) = creator_gram_(static_cast<std::size_t>(-u[i] - 1), static_cast<std::size_t>(-w[j] - 1));
        return permanent(m);
    }

    /// Linear in v, antilinear in w.
    Scalar inner_product(const FockState& v, const FockState& w) const {
        Scalar s(0);
        for (const auto& [u, c] : v.terms())
            for (const auto& [x, d] : w.terms())
                if (u.size() == x.size()) s += c * focklab::conj(d) * word_inner_product(u, x);
        return s;
    }

    /// Footnote variant <zbar, wbar> = (2 pi)^-1 sqrt(-1)(w, zbar): grade n
    /// picks up (2 pi)^-n.
    PiScaled inner_product(const FockState& v, const FockState& w, Normalization norm) const {
        if (norm == Normalization::MainText) return {inner_product(v, w), 0};
        PiScaled total{Scalar(0), 0};
        for (const auto& [u, c] : v.terms())
            for (const auto& [x, d] : w.terms()) {
                if (u.size() != x.size()) continue;
                const int n = static_cast<int>(u.size());
                Rational two_n(1);
                for (int k = 0; k < n; ++k) two_n /= 2;
                total = total + PiScaled{c * focklab::conj(d) * word_inner_product(u, x) * Scalar(two_n), -n};
            }
        return total;
    }

    ScalarMatrix grade_gram(std::size_t degree) const {
        auto basis = fock_basis(degree);
        ScalarMatrix m(basis.size(), basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j) m(i, j) = word_inner_product(basis[i], basis[j]);
        return m;
    }

    /// <rho(a) v, w> == <v, rho(sqrt(-1) conj a) w>
    bool adjoint_check(const HVector& a, const FockState& v, const FockState& w) const {
        Scalar lhs = inner_product(rho(vector_operator(a), v), w);
        HVector b = conj(a);
        for (auto& x : b) x = Scalar::i() * x;
        Scalar rhs = inner_product(v, rho(vector_operator(b), w));
        return lhs == rhs;
    }

    /// x_1..x_k v_o -> sum_i x_1..A(x_i)..x_k v_o, products taken in U(H-hat).
    FockState endomorphism_action(const ScalarMatrix& a, const FockState& v) const {
        check_square(a);
        FockState out;
        for (const auto& [w, c] : v.terms())
            for (std::size_t i = 0; i < w.size(); ++i) {
                Operator prod(c);
                for (std::size_t j = 0; j < w.size(); ++j) {
                    Operator x = j == i ? vector_operator(a * basis_vector(w[j])) : Operator::generator(w[j]);
                    prod = multiply(alg_, prod, x);
                }
                out += rho(prod, FockState::vacuum());
            }
        return out;
    }

    /// Action of an endomorphism of F' (g x g, columns = images of e_-k) as
    /// a derivation of Sym F'.
    FockState derivation_action(const ScalarMatrix& m, const FockState& v) const {
        FockState out;
        for (const auto& [w, c] : v.terms())
            for (std::size_t k = 0; k < w.size(); ++k) {
                const auto col = static_cast<std::size_t>(-w[k] - 1);
                for (std::size_t j = 0; j < static_cast<std::size_t>(g_); ++j) {
                    if (is_zero(m(j, col))) continue;
                    Word n = w;
                    n[k] = -static_cast<int>(j + 1);
                    out += FockState::basis(n, c * m(j, col));
                }
            }
        return out;
    }

    struct BracketTT {
        ScalarMatrix endomorphism;  // E_Fbar(conj alpha) E_F(beta) on F'
        Scalar scalar;              // (1/2) trace of it
    };

    /// [rho(conj alpha), rho(beta)] for alpha, beta in Sym^2 F (g x g).
    BracketTT bracket_TT(const ScalarMatrix& alpha, const ScalarMatrix& beta) const {
        ScalarMatrix ab = conj_tensor(embed_F(alpha));
        ScalarMatrix m = E_Fbar(ab) * E_F(embed_F(beta));
        return {m, Scalar(make_rational(1, 2)) * m.trace()};
    }

    /// Certifies the bracket on v by two routes: composing Fock actions, and
    /// the commutator computed in U(H-hat).
    bool bracket_TT_check(const ScalarMatrix& alpha, const ScalarMatrix& beta, const FockState& v) const {
        BracketTT b = bracket_TT(alpha, beta);
        Operator a_bar = hat(conj_tensor(embed_F(alpha)));
        Operator be = hat(embed_F(beta));
        FockState lhs = rho(a_bar, rho(be, v)) - rho(be, rho(a_bar, v));
        FockState expected = derivation_action(b.endomorphism, v) + b.scalar * v;
        FockState via_algebra = rho(commutator(alg_, a_bar, be), v);
        return lhs == expected && via_algebra == expected;
    }

    /// g x g block into the F (x) F corner.
    ScalarMatrix embed_F(const ScalarMatrix& alpha) const {
        const auto n = static_cast<std::size_t>(g_);
        if (alpha.rows() != n || alpha.cols() != n) throw DimensionMismatch("expected a g x g tensor");
        ScalarMatrix out(2 * n, 2 * n);
        out.set_block(0, 0, alpha);
        return out;
    }

    std::string label_name(int a) const { return a > 0 ? "e" + std::to_string(a) : "e_" + std::to_string(-a); }

private:
    void check_square(const ScalarMatrix& a) const {
        if (a.rows() != dim() || a.cols() != dim()) throw DimensionMismatch("expected a 2g x 2g matrix");
    }

    void check_complement(const IsotropicComplement& fp) const {
        const auto n = static_cast<std::size_t>(g_);
        check_square(fp.basis);
        if (fp.basis.block(0, 0, 2 * n, n) != ScalarMatrix::identity(2 * n).block(0, 0, 2 * n, n))
            throw DimensionMismatch("the first g basis vectors must be e_1..e_g");
        if (rank(fp.basis) != 2 * n) throw NotInvertible("complement is not complementary to F");
        for (std::size_t a = n; a < 2 * n; ++a)
            for (std::size_t b = n; b < 2 * n; ++b)
                if (!is_zero(form(fp.basis.column_vector(a), fp.basis.column_vector(b))))
                    throw NotSymplectic("complement is not isotropic");
    }

    void build_gram() {
        gram_ = ScalarMatrix(dim(), dim());
        for (std::size_t p = 0; p < dim(); ++p)
            for (std::size_t q = 0; q < dim(); ++q) gram_(p, q) = pairing(label(p), label(q));
        gram_inv_ = inverse(gram_);
        alg_.pairing = [lvl = level_](int a, int b) {
            return a + b == 0 ? Scalar(lvl * static_cast<long>(a)) : Scalar(0);
        };
        alg_.annihilator = [](int a) { return a > 0; };
    }

    void finish() {
        for (std::size_t k = 0; k < dim(); ++k)
            if (conj(conj(basis_vector(label(k)))) != basis_vector(label(k)))
                throw std::logic_error("conjugation is not an involution");
        for (std::size_t p = 0; p < dim(); ++p)
            for (std::size_t q = 0; q < dim(); ++q) {
                HVector a = basis_vector(label(p)), b = basis_vector(label(q));
                if (focklab::conj(form(a, b)) != form(conj(a), conj(b)))
                    throw NotSymplectic("form is not real for the conjugation");
            }
        const auto n = static_cast<std::size_t>(g_);
        creator_gram_ = ScalarMatrix(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                HVector za = basis_vector(-static_cast<int>(a + 1));
                HVector wb = conj(basis_vector(-static_cast<int>(b + 1)));
                creator_gram_(a, b) = Scalar::i() * form(wb, za);
            }
        if (!is_positive_definite(creator_gram_)) throw NotPositive("inner product on F-bar is not positive definite");
    }

    int g_;
    Rational level_;
    ScalarMatrix gram_, gram_inv_, conj_, creator_gram_;
    HeisenbergAlgebra<Scalar> alg_;
};

}  // namespace focklab
