#include <gtest/gtest.h>

#include <random>

#include "focklab/laurent.hpp"

using namespace focklab;
using Series = LaurentSeries<GaussianRational>;
using Q = GaussianRational;

namespace {

Q q(long n, long d = 1) { return Q(make_rational(n, d)); }

Series mono(long c, int k, int prec = kExact) { return Series::monomial(Q(c), k, prec); }

Series random_series(std::mt19937& rng, int lo, int hi, int prec) {
    std::uniform_int_distribution<long> coef(-5, 5);
    std::map<int, Q> terms;
    for (int k = lo; k < hi; ++k) terms[k] = Q(coef(rng));
    terms[lo] = Q(1 + (coef(rng) & 3));
    return Series::from_map(terms, prec);
}

}  // namespace

TEST(LaurentSeries, GeometricInverse) {
    Series f = Series::from_map({{0, Q(1)}, {1, Q(-1)}});
    Series g = inv(f, 8);
    EXPECT_EQ(g.prec(), 8);
    for (int k = 0; k < 8; ++k) EXPECT_EQ(g.coeff(k), Q(1));
    EXPECT_TRUE((f * g).agrees_below(Series::constant(Q(1)), 8));
    EXPECT_THROW(inv(f), PrecisionExhausted);
    EXPECT_THROW(inv(Series::zero(5), 5), NotInvertible);
}

TEST(LaurentSeries, InverseTracksWindowForPoles) {
    // f = t^-2 + t^-1 known below t^3; 1/f = t^2 (1 + t)^-1 known below t^7.
    Series f = Series::from_map({{-2, Q(1)}, {-1, Q(1)}}, 3);
    Series g = inv(f);
    EXPECT_EQ(g.prec(), 7);
    EXPECT_EQ(g.coeff(2), Q(1));
    EXPECT_EQ(g.coeff(6), Q(1));
    EXPECT_EQ(g.coeff(5), Q(-1));
}

TEST(LaurentSeries, SquareRootOfOnePlusT) {
    Series f = Series::from_map({{0, Q(1)}, {1, Q(1)}});
    Series s = sqrt_unit(f, 10);
    EXPECT_EQ(s.coeff(0), q(1));
    EXPECT_EQ(s.coeff(1), q(1, 2));
    EXPECT_EQ(s.coeff(2), q(-1, 8));
    EXPECT_EQ(s.coeff(3), q(1, 16));
    EXPECT_TRUE((s * s).agrees_below(f, 10));
}

TEST(LaurentSeries, SquareRootErrors) {
    EXPECT_THROW(sqrt_unit(mono(1, 1), 5), NotASquare);
    EXPECT_THROW(sqrt_unit(mono(2, 0), 5), NotASquare);
    Series s = sqrt_unit(mono(4, -2), 5);
    EXPECT_EQ(s.ord(), -1);
    EXPECT_EQ(s.coeff(-1), Q(2));
}

TEST(LaurentSeries, ComposeWithNegativeMonomial) {
    Series x = compose_monomial(mono(1, 1), -2);
    EXPECT_EQ(x, mono(1, -2));
    EXPECT_THROW(compose_monomial(mono(1, 1, 4), -2), PrecisionExhausted);
    Series f = Series::from_map({{0, Q(1)}, {1, Q(3)}}, 4);
    Series g = compose_monomial(f, 2);
    EXPECT_EQ(g.prec(), 8);
    EXPECT_EQ(g.coeff(2), Q(3));
    EXPECT_EQ(g.coeff(1), Q(0));
}

TEST(LaurentSeries, ResidueOfMonomials) {
    EXPECT_EQ(residue(mono(1, 3) * mono(1, -4)), Q(1));
    for (int k = -4; k <= 4; ++k)
        for (int l = -4; l <= 4; ++l) EXPECT_EQ(residue(mono(1, k) * mono(1, -l - 1)), Q(k == l ? 1 : 0));
    EXPECT_THROW(residue(Series::from_map({{-3, Q(1)}}, -1)), WindowTooNarrow);
    EXPECT_EQ(residue(Series::from_map({{-3, Q(1)}}, 0)), Q(0));
}

TEST(LaurentSeries, ResidueFormOnMonomials) {
    for (int i = -5; i <= 5; ++i)
        for (int j = -5; j <= 5; ++j) {
            // res(t^j * i t^{i-1} dt) = i [i + j = 0]
            Q expected = (i + j == 0) ? Q(i) : Q(0);
            EXPECT_EQ(residue_form(mono(1, i), mono(1, j)), expected) << i << "," << j;
        }
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial)
        EXPECT_EQ(residue_form(Series::constant(Q(1)), random_series(rng, -4, 4, 6)), Q(0));
}

TEST(LaurentSeries, ResidueFormAntisymmetricOffConstants) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        Series f = random_series(rng, -5, 6, 8);
        Series g = random_series(rng, -6, 4, 9);
        // Strip constant terms so the form is antisymmetric.
        f = f - Series::constant(f.coeff(0));
        g = g - Series::constant(g.coeff(0));
        EXPECT_EQ(residue_form(f, g) + residue_form(g, f), Q(0));
    }
}

TEST(LaurentSeries, IntegrateExamples) {
    EXPECT_EQ(integrate(mono(1, 2)), Series::monomial(q(1, 3), 3));
    EXPECT_EQ(integrate(Series::constant(Q(1))), mono(1, 1));
    Series f = Series::from_map({{0, Q(1)}, {2, Q(3)}});
    Series F = integrate(f);
    EXPECT_EQ(F, Series::from_map({{1, Q(1)}, {3, Q(1)}}));
    EXPECT_EQ(derivative(F), f);
    EXPECT_THROW(integrate(mono(2, -1)), NonzeroResidue);
}

TEST(LaurentSeries, IntegrateThenDifferentiateWithinWindow) {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Series f = random_series(rng, -5, 7, 7);
        f = f - Series::monomial(f.coeff(-1), -1);
        Series F = integrate(f);
        EXPECT_EQ(F.prec(), 8);
        EXPECT_TRUE(derivative(F).agrees_below(f, 7));
    }
}

TEST(Derivation, ModeDerivationsShiftDegree) {
    EXPECT_EQ(apply_derivation(Derivation<Q>::D(1), mono(1, 2)), mono(2, 3));
    EXPECT_EQ(apply_derivation(Derivation<Q>::D(0), mono(1, -3)), mono(-3, -3));
    for (int k = -4; k <= 4; ++k)
        for (int i = -4; i <= 4; ++i) EXPECT_EQ(apply_derivation(Derivation<Q>::D(k), mono(1, i)), mono(i, i + k));
}

TEST(Derivation, Leibniz) {
    auto D = Derivation<Q>::D(-1);
    Series f = mono(1, 1), g = mono(1, 2);
    EXPECT_EQ(apply_derivation(D, f * g), apply_derivation(D, f) * g + f * apply_derivation(D, g));
    std::mt19937 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        Derivation<Q> E{random_series(rng, -2, 3, kExact), {}};
        Series a = random_series(rng, -3, 3, kExact), b = random_series(rng, -2, 4, kExact);
        EXPECT_EQ(apply_derivation(E, a * b), apply_derivation(E, a) * b + a * apply_derivation(E, b));
    }
}

TEST(Derivation, HorizontalPartActsOnCoefficients) {
    using RSeries = LaurentSeries<RationalFunction>;
    RationalFunction x = RationalFunction::variable(0);
    RSeries f = RSeries::from_map({{-1, x * x}, {2, x}});
    Derivation<RationalFunction> D{RSeries::monomial(RationalFunction(1), 1), {{0, RationalFunction(1)}}};
    // t d/dt + d/dx
    RSeries expected = RSeries::from_map({{-1, RationalFunction(2) * x - x * x}, {2, RationalFunction(2) * x + 1}});
    EXPECT_EQ(apply_derivation(D, f), expected);
}

TEST(Derivation, SelfAdjointForResiduePairing) {
    EXPECT_TRUE(selfadjoint_check(Derivation<Q>::D(2), mono(1, -3), mono(1, -1)));
    for (int k = -6; k <= 6; ++k)
        for (int a = -4; a <= 4; ++a)
            for (int b = -4; b <= 4; ++b) EXPECT_TRUE(selfadjoint_check(Derivation<Q>::D(k), mono(1, a), mono(1, b)));
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        Derivation<Q> D{random_series(rng, -3, 4, kExact), {}};
        Series a = random_series(rng, -4, 2, kExact);
        EXPECT_TRUE(selfadjoint_check(D, a, a));
        EXPECT_TRUE(selfadjoint_check(D, a, random_series(rng, -2, 3, kExact)));
    }
}

TEST(LaurentSeries, PrecisionSoundnessUnderWiderWindows) {
    // The same computation at prec and prec + 10 agrees on the narrower window.
    std::mt19937 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        std::uniform_int_distribution<long> coef(-4, 4);
        std::map<int, Q> terms;
        for (int k = 0; k < 20; ++k) terms[k] = Q(coef(rng));
        terms[0] = Q(1);
        std::map<int, Q> other;
        for (int k = -2; k < 20; ++k) other[k] = Q(coef(rng));
        other[-2] = Q(2);
        auto run = [&](int prec) {
            Series f = Series::from_map(terms, prec), g = Series::from_map(other, prec);
            Series h = inv(f) * g + sqrt_unit(f) * f - derivative(g) * compose_monomial(f, 2);
            return h;
        };
        Series narrow = run(8), wide = run(18);
        EXPECT_LE(narrow.prec(), wide.prec());
        EXPECT_TRUE(narrow.agrees_below(wide, narrow.prec()));
    }
}

TEST(LaurentSeries, WindowIsReportedWhenExceeded) {
    Series f = Series::from_map({{0, Q(1)}, {1, Q(2)}}, 3);
    EXPECT_THROW(f.coeff(3), WindowTooNarrow);
    Series g = f * mono(1, -5);
    EXPECT_EQ(g.prec(), -2);
    EXPECT_THROW(residue(g), WindowTooNarrow);
}

TEST(SemiLocalSeries, ExactDifferentialsHaveZeroResidueSum) {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        SemiLocalSeries<Q> f;
        f.parts["p"] = random_series(rng, -4, 3, kExact);
        f.parts["q"] = random_series(rng, -2, 5, kExact);
        EXPECT_EQ(derivative(f).residue_sum(), Q(0));
    }
    SemiLocalSeries<Q> w;
    w.parts["p"] = mono(1, -1);
    w.parts["q"] = mono(-1, -1);
    EXPECT_EQ(w.residue_sum(), Q(0));
}

TEST(LaurentSeries, TextRoundTrip) {
    Series f = parse_series("2*t^-2 - 1/3*t + (1+i)*t^3; prec=6");
    EXPECT_EQ(f.prec(), 6);
    EXPECT_EQ(f.coeff(-2), Q(2));
    EXPECT_EQ(f.coeff(1), q(-1, 3));
    EXPECT_EQ(f.coeff(3), Q(1) + Q::i());
    EXPECT_EQ(parse_series(to_string(f)), f);
    EXPECT_EQ(parse_series("t^-2"), mono(1, -2));
    EXPECT_THROW(parse_series("2*s^3"), ParseError);
}
