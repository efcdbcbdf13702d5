#include <gtest/gtest.h>

#include <random>

#include "focklab/expression.hpp"
#include "focklab/forms.hpp"
#include "focklab/matrix.hpp"

using namespace focklab;

namespace {

GaussianRational random_gaussian(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

const ParameterSpace kXY{{"x", "y"}};

RationalFunction rf(const char* s) { return parse_rational_function(s, kXY); }

}  // namespace

TEST(GaussianRational, ConjugateFlipsImaginaryPart) {
    GaussianRational z(Rational(2), Rational(3));
    EXPECT_EQ(conj(z), GaussianRational(Rational(2), Rational(-3)));
    EXPECT_EQ(conj(GaussianRational(make_rational(5, 7))), GaussianRational(make_rational(5, 7)));
}

TEST(GaussianRational, ConjugateIsMultiplicative) {
    GaussianRational z(1, 0), w(2, 0);
    z += GaussianRational::i();
    w -= GaussianRational::i();
    // (1+i)(2-i) = 2 - i + 2i + 1 = 3 + i
    EXPECT_EQ(z * w, GaussianRational(Rational(3), Rational(1)));
    EXPECT_EQ(conj(z * w), conj(z) * conj(w));
}

TEST(GaussianRational, StoredInLowestTerms) {
    GaussianRational z(Rational(6, 4), Rational(-10, 15));
    EXPECT_EQ(z.re().get_den(), 2);
    EXPECT_EQ(z.im().get_den(), 3);
    EXPECT_EQ(parse_gaussian("3/2-2/3*i"), z);
}

TEST(GaussianRational, FieldAxiomsOnSeededTriples) {
    std::mt19937 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_gaussian(rng), b = random_gaussian(rng), c = random_gaussian(rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(conj(conj(a)), a);
        EXPECT_EQ(conj(a * b), conj(a) * conj(b));
        EXPECT_EQ(conj(a + b), conj(a) + conj(b));
        if (!a.is_zero()) {
            EXPECT_EQ(a * a.inverse(), GaussianRational(1));
        }
    }
}

TEST(RationalFunction, ConjugationFixesParameters) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto c1 = random_gaussian(rng), c2 = random_gaussian(rng);
        RationalFunction f = RationalFunction(c1) * rf("x^2 + y") / rf("y + 1");
        RationalFunction g = RationalFunction(c2) * rf("x - 3*y") + rf("1/x");
        EXPECT_EQ(conj(conj(f)), f);
        EXPECT_EQ(conj(f * g), conj(f) * conj(g));
        EXPECT_EQ(conj(f + g), conj(f) + conj(g));
    }
    EXPECT_EQ(conj(rf("x + i*y")), rf("x - i*y"));
}

TEST(RationalFunction, NormalizesCommonFactors) {
    EXPECT_EQ(rf("(x^2 - y^2)/(x + y)"), rf("x - y"));
    EXPECT_EQ(rf("(2*x)/(4*x*y)"), rf("1/(2*y)"));
    EXPECT_EQ(rf("x/y").derivative(1), rf("-x/y^2"));
}

TEST(ExactMatrix, IdentitySolve) {
    auto id = Matrix<GaussianRational>::identity(3);
    std::vector<GaussianRational> b{1, GaussianRational::i(), 5};
    EXPECT_EQ(solve_linear(id, b), b);
}

TEST(ExactMatrix, RankDeficientSolveAndKernel) {
    Matrix<GaussianRational> m(2, 2);
    m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = 1;
    auto x = solve_linear(m, {1, 1});
    EXPECT_EQ(m * x, (std::vector<GaussianRational>{1, 1}));
    auto k = kernel_basis(m);
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0][0] + k[0][1], GaussianRational(0));
    EXPECT_THROW(solve_linear(m, {1, 2}), Inconsistent);
    EXPECT_THROW(inverse(m), NotInvertible);
}

TEST(ExactMatrix, SeededRandomInvertibleSystems) {
    std::mt19937 rng(99);
    int solved = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix<GaussianRational> m(5, 5);
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t c = 0; c < 5; ++c) m(r, c) = random_gaussian(rng);
        std::vector<GaussianRational> b(5);
        for (auto& v : b) v = random_gaussian(rng);
        if (determinant(m).is_zero()) continue;
        auto x = solve_linear(m, b);
        EXPECT_EQ(m * x, b);
        EXPECT_EQ(inverse(m) * m, Matrix<GaussianRational>::identity(5));
        ++solved;
    }
    EXPECT_GT(solved, 15);
}

TEST(ExactMatrix, DeterminantMatchesCofactorExpansion) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix<GaussianRational> m(3, 3);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) m(r, c) = random_gaussian(rng);
        GaussianRational cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        EXPECT_EQ(determinant(m), cof);
    }
}

TEST(ExactMatrix, RationalFunctionEntries) {
    Matrix<RationalFunction> m(2, 2);
    m(0, 0) = rf("x");
    m(0, 1) = rf("y");
    m(1, 0) = rf("1");
    m(1, 1) = rf("x + y");
    EXPECT_EQ(determinant(m), rf("x^2 + x*y - y"));
    EXPECT_EQ(inverse(m) * m, Matrix<RationalFunction>::identity(2));
}

TEST(Forms, ExteriorDerivativeExamples) {
    const std::size_t n = 2;
    const RationalFunction zero;
    ScalarForm x_dy = ScalarForm::differential(n, 1, rf("x"), zero);
    ScalarForm dxdy(n, 2, zero);
    dxdy.add({0, 1}, rf("1"));
    EXPECT_EQ(x_dy.d(), dxdy);

    ScalarForm f = ScalarForm::function(n, rf("x^2*y"), zero);
    EXPECT_TRUE(f.d().d().is_zero());

    // d(y^-1 dx) = -y^-2 dy^dx = y^-2 dx^dy
    ScalarForm w = ScalarForm::differential(n, 0, rf("1/y"), zero);
    ScalarForm expected(n, 2, zero);
    expected.add({0, 1}, rf("1/y^2"));
    EXPECT_EQ(w.d(), expected);
}

TEST(Forms, TopDegreeDerivativeIsZero) {
    ScalarForm top(2, 2, RationalFunction());
    top.add({0, 1}, rf("x*y"));
    EXPECT_TRUE(top.d().is_zero());
    EXPECT_EQ(top.d().degree(), 3);
}

TEST(Forms, DSquaredVanishesOnSeededFunctions) {
    std::mt19937 rng(11);
    const char* pieces[] = {"x", "y", "x*y", "1/(x+1)", "y^2/(x - y + 2)", "x^3"};
    for (int trial = 0; trial < 30; ++trial) {
        RationalFunction f = RationalFunction(random_gaussian(rng)) * rf(pieces[rng() % 6]) +
                             RationalFunction(random_gaussian(rng)) * rf(pieces[rng() % 6]);
        auto w = ScalarForm::function(2, f, RationalFunction());
        EXPECT_TRUE(w.d().d().is_zero());
    }
}

TEST(Forms, LeibnizRule) {
    const RationalFunction zero;
    auto f = ScalarForm::function(2, rf("x^2 + y"), zero);
    auto w = ScalarForm::differential(2, 1, rf("x/(y+1)"), zero);
    auto lhs = wedge(f, w).d();
    auto rhs = wedge(f.d(), w) + wedge(f, w.d());
    EXPECT_EQ(lhs, rhs);
}

TEST(Forms, WedgeIsAntisymmetricOnOneForms) {
    const RationalFunction zero;
    auto a = ScalarForm::differential(2, 0, rf("y"), zero) + ScalarForm::differential(2, 1, rf("x"), zero);
    auto b = ScalarForm::differential(2, 0, rf("1"), zero) + ScalarForm::differential(2, 1, rf("x*y"), zero);
    EXPECT_EQ(wedge(a, b), -wedge(b, a));
    EXPECT_TRUE(wedge(a, a).is_zero());
}

TEST(Forms, ConjugationCommutesWithD) {
    const RationalFunction zero;
    auto w = ScalarForm::differential(2, 0, rf("i*x/y"), zero) + ScalarForm::differential(2, 1, rf("x - i"), zero);
    EXPECT_EQ(w.conj().d(), w.d().conj());
    EXPECT_EQ(w.conj().conj(), w);
}
