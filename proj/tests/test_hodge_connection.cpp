#include <gtest/gtest.h>

#include <random>

#include "focklab/hodge_connection.hpp"

using namespace focklab;
using Q = GaussianRational;

namespace {

const char* kModular = R"(
name modular
params x y
form 0 1
form -1 0
vector 1, x + i*y
sample 0, 1
)";

const char* kConstant = R"(
name constant
params x y
form 0 1
form -1 0
vector 1, i
sample 0, 0
)";

std::string family_dir() { return FOCKLAB_FAMILY_DIR; }

RF half() { return RF(Q(make_rational(1, 2))); }

RF parse(const HodgeFamily& fam, const std::string& s) { return parse_rational_function(s, fam.params); }

}  // namespace

TEST(HodgeFamilyTest, ParsesAndCertifiesModular) {
    auto fam = parse_family(kModular);
    EXPECT_EQ(fam.name, "modular");
    EXPECT_EQ(fam.genus, 1u);
    EXPECT_EQ(fam.params.names, (std::vector<std::string>{"x", "y"}));
    auto c = certify_family(fam);
    EXPECT_TRUE(c.ok());
    // i (v, conj v) = i (tau bar - tau) = 2y, which is 2 at y = 1
    EXPECT_EQ(c.hermitian_at_sample(0, 0), Q(2));
}

TEST(HodgeFamilyTest, FileFamiliesLoad) {
    for (const char* f : {"modular.family", "siegel2.family"}) {
        auto fam = load_family(family_dir() + "/" + f);
        EXPECT_TRUE(certify_family(fam).ok()) << f;
    }
}

TEST(HodgeFamilyTest, RejectsBadFamilies) {
    EXPECT_THROW(parse_family("name x\nparams x\nform 0 1\nform -1 0\nvector 1, x\nsample 0\nbogus 1\n"), ParseError);
    EXPECT_THROW(parse_family("params x\nform 0 1\nvector 1, x\nsample 0\n"), ParseError);
    EXPECT_THROW(parse_family("params x y\nform 0 1\nform -1 0\nvector 1, x + i*y\nsample 0, i\n"), ParseError);
    // real frame: F and its conjugate coincide
    EXPECT_THROW(connection_blocks(parse_family("params x y\nform 0 1\nform -1 0\nvector 1, x\nsample 0, 1\n")),
                 DegenerateFrame);
    // lower half plane
    EXPECT_THROW(connection_blocks(parse_family("params x y\nform 0 1\nform -1 0\nvector 1, x - i*y\nsample 0, 1\n")),
                 NotPositive);
    EXPECT_THROW(connection_blocks(parse_family("params x y\nform 0 1\nform 1 0\nvector 1, x + i*y\nsample 0, 1\n")),
                 NotSymplectic);
    // g = 2 with a non-isotropic frame
    EXPECT_THROW(connection_blocks(parse_family("params x y\nform 0 0 1 0\nform 0 0 0 1\nform -1 0 0 0\nform 0 -1 0 0\n"
                                                "vector 1, 0, x + i*y, 1\nvector 0, 1, 0, x + i*y\nsample 0, 1\n")),
                 NotSymplectic);
}

TEST(SecondFundamentalForm, ModularAgainstProjectionOfB) {
    auto fam = parse_family(kModular);
    auto d = connection_blocks(fam);
    EXPECT_TRUE(d.blocks_reproduce);
    EXPECT_TRUE(d.flat);
    EXPECT_TRUE(d.conj_consistent);
    EXPECT_TRUE(d.sigma_symmetric);
    EXPECT_TRUE(d.tensorial);
    EXPECT_TRUE(d.s_inverts_E);
    // dv = dtau b and b = (v - vbar)/(tau - taubar): the Fbar coefficient is 1/(taubar - tau)
    const RF tau = parse(fam, "x + i*y"), taubar = parse(fam, "x - i*y");
    const RF coeff = RF(1) / (taubar - tau);
    MatrixForm sigma = second_fundamental_form(fam);
    EXPECT_EQ(sigma.coefficient({0})(0, 0), coeff);
    EXPECT_EQ(sigma.coefficient({1})(0, 0), RF(Q::i()) * coeff);
    // sbar = (1/2) sigma / (vbar, v), with (vbar, v) = tau - taubar
    EXPECT_EQ(d.s_bar.coefficient({0})(0, 0), half() * coeff / (tau - taubar));
    EXPECT_EQ(d.s.coefficient({0})(0, 0), d.s_bar.coefficient({0})(0, 0).conj());
}

TEST(SecondFundamentalForm, ConstantFamilyVanishes) {
    auto d = connection_blocks(parse_family(kConstant));
    EXPECT_TRUE(d.sigma.is_zero());
    EXPECT_TRUE(d.AH.is_zero());
    EXPECT_TRUE(d.s.is_zero());
}

TEST(SecondFundamentalForm, GenusTwoSymmetry) {
    auto fam = load_family(family_dir() + "/siegel2.family");
    auto d = connection_blocks(fam);
    EXPECT_TRUE(d.sigma_symmetric);
    // (sigma(v_1), v_2) - (sigma(v_2), v_1), entry by entry
    for (std::size_t k = 0; k < 4; ++k) {
        RFMatrix sn = d.sigma.coefficient({k}).transpose() * d.N;
        EXPECT_EQ(sn(0, 1) - sn(1, 0), RF(0)) << k;
    }
    EXPECT_FALSE(d.sigma.is_zero());
}

TEST(Curvature, Examples) {
    // flat frame
    auto d = connection_blocks(parse_family(kModular));
    EXPECT_TRUE(curvature(d.AH).is_zero());
    // x dy -> dx ^ dy
    MatrixForm w = zero_matrix_form(2, 1, 1, 1);
    RFMatrix x(1, 1);
    x(0, 0) = RF::variable(0);
    w.add({1}, x);
    MatrixForm c = curvature(w);
    EXPECT_EQ(c.coefficient({0, 1})(0, 0), RF(1));
    EXPECT_EQ(c.terms().size(), 1u);
    // first identity for the modular family
    EXPECT_EQ(curvature(d.AFbar), -wedge(d.sigma, d.sigma_bar));
}

TEST(Theorem, ModularFamily) {
    auto fam = parse_family(kModular);
    auto r = verify_theorem31(fam, 4);
    EXPECT_EQ(r.probes, 5u);
    for (const char* id : {"dagger.first", "dagger.second", "curvature.scalar", "theorem.half_det", "theorem.proof_scalar",
                           "lemma.s_parallel", "lemma.sbar_parallel", "lemma.trace", "trace.antisymmetry",
                           "det.curvature", "unitarity.sample"})
        EXPECT_TRUE(r.holds(id)) << id;
    // a single dx^dy term with coefficient c / y^2 for a constant c
    ASSERT_EQ(r.omega.terms().size(), 1u);
    const RF c = r.omega.coefficient({0, 1}) * RF::variable(1) * RF::variable(1);
    EXPECT_TRUE(c.is_constant());
    EXPECT_TRUE(c.constant_value().re() == 0);
    EXPECT_FALSE(c.is_zero());
    // the printed scalar -1/2 trace(sigma ^ sigmabar) has the opposite sign
    EXPECT_EQ(r.stated, -r.omega);
    EXPECT_FALSE(r.holds("theorem.stated_scalar"));
    EXPECT_THROW(r.require(), IdentityFailed);
}

TEST(Theorem, ConstantFamilyAllZero) {
    auto r = verify_theorem31(parse_family(kConstant), 4);
    EXPECT_TRUE(r.all_hold());
    EXPECT_TRUE(r.omega.is_zero());
    EXPECT_TRUE(r.stated.is_zero());
    EXPECT_TRUE(r.half_det.is_zero());
    EXPECT_NO_THROW(r.require());
}

TEST(Theorem, GenusTwoFamily) {
    auto r = verify_theorem31(load_family(family_dir() + "/siegel2.family"), 4);
    EXPECT_EQ(r.probes, 15u);
    for (const auto& c : r.checks)
        if (c.id != "theorem.stated_scalar") {
            EXPECT_TRUE(c.holds) << c.id << " " << c.witness;
        }
    EXPECT_FALSE(r.omega.is_zero());
    EXPECT_EQ(r.omega, r.half_det);
}

// Seeded Moebius reparametrizations v = (c tau + d) a + (a tau + b) b, rescaled by a
// holomorphic factor: the identities hold and the curvature only depends on F.
TEST(Theorem, SeededModularReparametrizations) {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> dist(-3, 3);
    int tried = 0;
    while (tried < 4) {
        int a = dist(rng), b = dist(rng), c = dist(rng), e = dist(rng);
        if (a * e - b * c <= 0) continue;
        int k = 1 + (tried % 3);
        const std::string t = "(x + i*y)";
        std::string scale = "(" + t + " + " + std::to_string(k) + ")";
        std::string text = "params x y\nform 0 1\nform -1 0\nvector " + scale + "*(" + std::to_string(c) + "*" + t + " + (" +
                           std::to_string(e) + ")), " + scale + "*(" + std::to_string(a) + "*" + t + " + (" +
                           std::to_string(b) + "))\nsample 0, 1\n";
        auto fam = parse_family(text);
        if (!certify_family(fam).ok()) continue;
        ++tried;
        auto r = verify_theorem31(fam, 3);
        for (const auto& chk : r.checks)
            if (chk.id != "theorem.stated_scalar") {
                EXPECT_TRUE(chk.holds) << text << chk.id << " " << chk.witness;
            }
        // same F as the unscaled frame
        std::string plain = "params x y\nform 0 1\nform -1 0\nvector " + std::to_string(c) + "*" + t + " + (" +
                            std::to_string(e) + "), " + std::to_string(a) + "*" + t + " + (" + std::to_string(b) +
                            ")\nsample 0, 1\n";
        EXPECT_EQ(r.omega, verify_theorem31(parse_family(plain), 2).omega) << text;
    }
}

TEST(USection, ModularRecoversSBar) {
    auto fam = parse_family(kModular);
    // e_1 = v, e_-1 = i vbar / (2y), so that (e_1, e_-1) = 1
    RFMatrix ext(2, 2);
    ext(0, 0) = RF(1);
    ext(1, 0) = parse(fam, "x + i*y");
    ext(0, 1) = parse(fam, "i/(2*y)");
    ext(1, 1) = parse(fam, "i*(x - i*y)/(2*y)");
    auto u = u_section(fam, ext);
    EXPECT_TRUE(u.symmetric);
    EXPECT_TRUE(u.E_is_sigma);
    EXPECT_TRUE(u.extension_in_fbar);
    EXPECT_TRUE(u.equals_s_bar);
    EXPECT_TRUE(u.proposition_s_bar);
    EXPECT_TRUE(u.proposition_u_scalar);
    EXPECT_TRUE(u.u_shift.is_zero());
    // u = (1/2)(de_1, e_1) e_-1 (x) e_-1, nonzero
    EXPECT_FALSE(u.u.is_zero());
}

TEST(USection, OtherExtensionDiffersByScalar) {
    auto fam = parse_family(kModular);
    // e_-1 = b is symplectic but not in Fbar
    RFMatrix ext(2, 2);
    ext(0, 0) = RF(1);
    ext(1, 0) = parse(fam, "x + i*y");
    ext(1, 1) = RF(1);
    auto u = u_section(fam, ext);
    EXPECT_TRUE(u.symmetric);
    EXPECT_TRUE(u.E_is_sigma);
    EXPECT_FALSE(u.extension_in_fbar);
    EXPECT_TRUE(u.proposition_s_bar);
    EXPECT_TRUE(u.proposition_u_scalar);
    EXPECT_FALSE(u.u_shift.is_zero());
}

TEST(USection, ConstantFamilyAndErrors) {
    auto fam = parse_family(kConstant);
    RFMatrix ext(2, 2);
    ext(0, 0) = RF(1);
    ext(1, 0) = RF(Q::i());
    ext(0, 1) = RF(Q(make_rational(1, 2)) * Q::i());
    ext(1, 1) = RF(Q(make_rational(1, 2)));
    auto u = u_section(fam, ext);
    EXPECT_TRUE(u.u.is_zero());
    EXPECT_TRUE(u.proposition_s_bar);
    RFMatrix bad = ext;
    bad(1, 1) = RF(1);
    EXPECT_THROW(u_section(fam, bad), NotSymplecticFrame);
    RFMatrix not_f(2, 2);
    not_f(0, 0) = RF(1);
    not_f(1, 1) = RF(1);
    EXPECT_THROW(u_section(fam, not_f), NotSymplecticFrame);
}

TEST(USection, GenusTwoIdentityExtension) {
    auto fam = load_family(family_dir() + "/siegel2.family");
    auto d = connection_blocks(fam);
    // e_-k in Fbar: solve (e_k, e_-l) = delta with e_-l = sum conj(v_m) C_ml
    RFMatrix Minv = inverse(d.M);
    RFMatrix ext(4, 4);
    ext.set_block(0, 0, fam.frame);
    ext.set_block(0, 2, fam.frame.conj() * Minv);
    auto u = u_section(fam, ext);
    EXPECT_TRUE(u.symmetric);
    EXPECT_TRUE(u.E_is_sigma);
    EXPECT_TRUE(u.equals_s_bar);
    EXPECT_TRUE(u.proposition_s_bar);
    EXPECT_TRUE(u.proposition_u_scalar);
}
