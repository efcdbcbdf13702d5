#include <gtest/gtest.h>

#include <random>

#include "focklab/oscillator.hpp"

using namespace focklab;
using Q = GaussianRational;
using Series = LaurentSeries<Q>;
using Vec = FockVector<Q>;

namespace {

Q q(long n, long d = 1) { return Q(make_rational(n, d)); }

const HeisenbergAlgebra<Q>& alg() {
    static const auto a = oscillator_algebra<Q>();
    return a;
}

// rho of an element of K, mode by mode (e_0 acts as 0).
template <class S>
FockVector<S> act_by_series(const LaurentSeries<S>& f, const FockVector<S>& v) {
    static const auto a = oscillator_algebra<S>();
    UElement<S> u;
    for (const auto& [m, c] : f.terms()) u += UElement<S>::generator(m, c);
    return rho_apply(a, u, v);
}

Series random_exact(std::mt19937& rng, int lo, int hi) {
    std::uniform_int_distribution<long> coef(-3, 3);
    std::map<int, Q> t;
    for (int k = lo; k <= hi; ++k) t[k] = Q(coef(rng));
    return Series::from_map(t);
}

// e'_2 = t^2 + lam t^3, e'_-3 = t^-3 - (3 lam / 2) t^-2
template <class S>
ModeBasis<S> transvection(const S& lam) {
    using L = LaurentSeries<S>;
    return ModeBasis<S>({{2, L::from_map({{2, S(1)}, {3, lam}})},
                         {-3, L::from_map({{-3, S(1)}, {-2, S(-3) / S(2) * lam}})}});
}

// e'_-1 = t^-1 + mu t, which mixes a creator with an annihilator.
ModeBasis<Q> mixed(const Q& mu) { return ModeBasis<Q>({{-1, Series::from_map({{-1, Q(1)}, {1, mu}})}}); }

}  // namespace

TEST(Oscillator, EnergyBasisCountsPartitions) {
    const std::size_t partitions[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(energy_basis(n).size(), partitions[n]);
    EXPECT_EQ(energy_basis_upto(8).size(), 67u);
}

TEST(Oscillator, PositiveModesKillVacuum) {
    for (int k = 0; k <= 8; ++k) EXPECT_TRUE(tau_hat_Dk<Q>(k).apply(Vec::vacuum()).is_zero()) << k;
    // tau-hat(D_-2) v_o = -1/2 e_-1 e_-1 v_o
    EXPECT_EQ(tau_hat_Dk<Q>(-2).apply(Vec::vacuum()), Vec::basis({-1, -1}, q(-1, 2)));
}

TEST(Oscillator, ClosedFormMatchesDefiningSum) {
    const ModeBasis<Q> standard;
    for (int n = -5; n <= 5; ++n) {
        auto closed = tau_hat_Dk<Q>(n);
        auto defining = tau_hat_in_basis(Derivation<Q>::D(n), standard);
        for (const auto& w : energy_basis_upto(6)) {
            Vec v = Vec::basis(w);
            EXPECT_EQ(closed.apply(v), defining.apply(v)) << "n=" << n;
        }
    }
}

TEST(Oscillator, CommutatorWithModeIsTheDerivation) {
    // [tau-hat(D_2), e_-3] v_o = D_2(t^-3) v_o = -3 e_-1 v_o
    auto t2 = tau_hat_Dk<Q>(2);
    Vec v = Vec::vacuum();
    Vec lhs = t2.apply(apply_generator(alg(), -3, v)) - apply_generator(alg(), -3, t2.apply(v));
    EXPECT_EQ(lhs, Vec::basis({-1}, Q(-3)));

    std::mt19937 rng(404);
    for (int trial = 0; trial < 6; ++trial) {
        Derivation<Q> d{random_exact(rng, -1, 3), {}};
        auto t = tau_hat_D(d);
        for (int m = -4; m <= 4; ++m) {
            Series f = Series::monomial(Q(1), m);
            for (const auto& w : energy_basis_upto(4)) {
                Vec x = Vec::basis(w);
                Vec got = t.apply(act_by_series(f, x)) - act_by_series(f, t.apply(x));
                EXPECT_EQ(got, act_by_series(apply_derivation(d, f), x)) << "m=" << m;
            }
        }
    }
}

TEST(Oscillator, EulerFieldCountsEnergy) {
    // D_0(t^-k) = -k t^-k, so tau-hat(D_0) is minus the energy.
    auto t0 = tau_hat_Dk<Q>(0);
    for (const auto& w : energy_basis_upto(7)) {
        Vec v = Vec::basis(w);
        EXPECT_EQ(t0.apply(v), Q(-word_energy(w)) * v);
    }
}

TEST(Oscillator, LeibnizExpansionOnCreatorWords) {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        Derivation<Q> d{random_exact(rng, -2, 3), {}};
        auto t = tau_hat_D(d);
        Vec tv = t.apply(Vec::vacuum());
        for (const auto& w : energy_basis_upto(5)) {
            Vec expected;
            for (std::size_t i = 0; i < w.size(); ++i) {
                Vec x = Vec::vacuum();
                for (std::size_t j = 0; j < w.size(); ++j)
                    x = j == i ? act_by_series(apply_derivation(d, Series::monomial(Q(1), w[j])), x)
                               : apply_generator(alg(), w[j], x);
                expected += x;
            }
            Vec tail = tv;
            for (int k : w) tail = apply_generator(alg(), k, tail);
            expected += tail;
            EXPECT_EQ(t.apply(Vec::basis(w)), expected);
        }
    }
}

TEST(Oscillator, SeriesNeedsCoefficientsUpToTwiceEnergy) {
    Derivation<Q> d{Series::from_map({{1, Q(1)}, {2, Q(1)}}, 6), {}};
    auto t = tau_hat_D(d);
    EXPECT_NO_THROW(t.apply(Vec::basis({-1, -1})));
    EXPECT_THROW(t.apply(Vec::basis({-3})), PrecisionExhausted);
}

TEST(Virasoro, ListedBrackets) {
    auto c1 = virasoro_bracket<Q>(1, -1, 6);
    EXPECT_TRUE(c1.holds);
    EXPECT_EQ(c1.central, Q(0));
    auto c2 = virasoro_bracket<Q>(2, -2, 6);
    EXPECT_TRUE(c2.holds);
    EXPECT_EQ(c2.central, q(1, 2));
    auto c3 = virasoro_bracket<Q>(3, -3, 6);
    EXPECT_TRUE(c3.holds);
    EXPECT_EQ(c3.central, Q(2));
    EXPECT_EQ(c3.probes, 30u);
}

TEST(Virasoro, SweepAgainstCubicCentralTerm) {
    for (int k = -4; k <= 4; ++k)
        for (int l = -4; l <= 4; ++l) {
            auto c = virasoro_bracket<Q>(k, l, 5);
            EXPECT_TRUE(c.holds) << k << "," << l;
            EXPECT_EQ(c.central, Q(virasoro_central_formula(k, l))) << k << "," << l;
        }
}

TEST(QuasiSymplectic, StandardAndTransvectedBasesPass) {
    EXPECT_TRUE(check_quasi_symplectic(ModeBasis<Q>(), 6).ok());
    EXPECT_TRUE(check_quasi_symplectic(transvection(q(2, 3)), 6).ok());
    EXPECT_TRUE(check_quasi_symplectic(mixed(Q(5)), 6).ok());
    auto x = RationalFunction::variable(0);
    EXPECT_TRUE(check_quasi_symplectic(transvection(x), 5).ok());
}

TEST(QuasiSymplectic, BrokenBasesFail) {
    auto shifted_unit = ModeBasis<Q>({{0, Series::from_map({{0, Q(1)}, {1, Q(1)}})}});
    auto r = check_quasi_symplectic(shifted_unit, 4);
    EXPECT_FALSE(r.ok());
    EXPECT_FALSE(r.unit_and_positive);

    auto doubled = ModeBasis<Q>({{1, Series::monomial(Q(2), 1)}});
    r = check_quasi_symplectic(doubled, 4);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.unit_and_positive);
    EXPECT_FALSE(r.pairing);

    // transvection without the compensating e_-3
    auto half = ModeBasis<Q>({{2, Series::from_map({{2, Q(1)}, {3, Q(1)}})}});
    EXPECT_FALSE(check_quasi_symplectic(half, 4).pairing);

    auto negative = ModeBasis<Q>({{1, Series::monomial(Q(1), -1)}, {-1, Series::monomial(Q(-1), 1)}});
    EXPECT_FALSE(check_quasi_symplectic(negative, 3).unit_and_positive);
}

TEST(QuasiSymplectic, TauHatShiftsByScalarUnderBasisChange) {
    auto b = transvection(q(2, 3));
    for (int n = -3; n <= 3; ++n) EXPECT_EQ(basis_change_scalar(Derivation<Q>::D(n), b, 4), Q(0)) << n;

    auto m = mixed(Q(5));
    bool some_nonzero = false;
    for (int n = -3; n <= 3; ++n) some_nonzero |= !is_zero(basis_change_scalar(Derivation<Q>::D(n), m, 4));
    EXPECT_TRUE(some_nonzero);
}

TEST(QuasiSymplectic, CentralTermsInSecondBasis) {
    // c' = c - (l - k) phi(D_{k+l}); the shift is a coboundary.
    for (const auto& b : {transvection(q(2, 3)), mixed(Q(5))}) {
        for (int k = -3; k <= 3; ++k)
            for (int l : {-k, 1 - k}) {
                auto tk = tau_hat_in_basis(Derivation<Q>::D(k), b);
                auto tl = tau_hat_in_basis(Derivation<Q>::D(l), b);
                auto tkl = tau_hat_in_basis(Derivation<Q>::D(k + l), b);
                Vec v = Vec::vacuum();
                Vec d = tk.apply(tl.apply(v)) - tl.apply(tk.apply(v)) - Q(l - k) * tkl.apply(v);
                ASSERT_EQ(d, d.coefficient({}) * v);
                Q phi = basis_change_scalar(Derivation<Q>::D(k + l), b, 3);
                EXPECT_EQ(d.coefficient({}), Q(virasoro_central_formula(k, l)) - Q(l - k) * phi) << k << "," << l;
                for (const auto& w : energy_basis_upto(3)) {
                    Vec x = Vec::basis(w);
                    EXPECT_EQ(tk.apply(tl.apply(x)) - tl.apply(tk.apply(x)) - Q(l - k) * tkl.apply(x), d.coefficient({}) * x);
                }
            }
    }
    // the transvection leaves every central term unchanged
    auto b = transvection(q(2, 3));
    for (int k = 1; k <= 3; ++k) {
        auto tk = tau_hat_in_basis(Derivation<Q>::D(k), b);
        auto tm = tau_hat_in_basis(Derivation<Q>::D(-k), b);
        auto t0 = tau_hat_in_basis(Derivation<Q>::D(0), b);
        Vec v = Vec::vacuum();
        Vec d = tk.apply(tm.apply(v)) - tm.apply(tk.apply(v)) + Q(2 * k) * t0.apply(v);
        EXPECT_EQ(d, Q(virasoro_central_formula(k, -k)) * v);
    }
}

TEST(Lift, EulerPlusParameterDerivative) {
    using R = RationalFunction;
    using RVec = FockVector<R>;
    R x = R::variable(0);
    Derivation<R> d{LaurentSeries<R>::monomial(R(1), 1), {{0, R(1)}}};
    RVec psi = RVec::basis({-1}, x);
    RVec got = lift_derivation(d, ModeBasis<R>(), psi);
    EXPECT_EQ(got, RVec::basis({-1}, R(1) - x));
}

TEST(Lift, BasisChangeIsScalarPlusOrderRaisingMotion) {
    using R = RationalFunction;
    using RVec = FockVector<R>;
    R x = R::variable(0);
    auto moving = transvection(x);
    // d/dx of e'_-3 = -3/2 t^-2
    Derivation<R> dx{LaurentSeries<R>(), {{0, R(1)}}};
    EXPECT_EQ(basis_motion(dx, moving, RVec::basis({-3})), RVec::basis({-2}, R(-3) / R(2)));
    EXPECT_TRUE(basis_motion(dx, moving, RVec::vacuum()).is_zero());

    std::vector<RVec> family = {RVec::basis({-3}, x * x), RVec::basis({-3, -1}, x) + RVec::basis({-2, -2}, R(1) + x),
                                RVec::basis({-3, -3}, R(1) / (x + R(1)))};
    for (int n : {-2, 0, 1}) {
        Derivation<R> d{LaurentSeries<R>::monomial(R(1), n + 1), {{0, R(1)}}};
        Derivation<R> vert{d.g, {}};
        R phi = basis_change_scalar(vert, moving, 3);
        EXPECT_TRUE(is_zero(phi));
        for (const auto& psi : family) {
            RVec diff = lift_derivation(d, ModeBasis<R>(), psi) - lift_derivation(d, moving, psi);
            RVec motion = basis_motion(d, moving, psi);
            EXPECT_EQ(diff, motion - phi * psi);
            for (const auto& [w, c] : motion.terms()) EXPECT_LT(word_energy(w), energy(psi));
            // coefficientwise: commutes with multiplication by functions of x
            RVec scaled = lift_derivation(d, ModeBasis<R>(), x * psi) - lift_derivation(d, moving, x * psi);
            EXPECT_EQ(scaled, x * diff);
        }
    }
}

TEST(Lift, CoordinatesRoundTrip) {
    auto b = mixed(Q(5));
    Vec v = Vec::basis({-2, -1, -1}, Q(3)) + Vec::basis({-1}, Q(2));
    Vec back;
    for (const auto& [w, c] : to_basis_coordinates(b, v)) back += c * basis_monomial(b, w);
    EXPECT_EQ(back, v);
}
