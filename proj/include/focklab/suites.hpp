#pragma once

// Named verification suites and printable computations shared by the
// fock_lab tool and the acceptance runner. Reports are deterministic given
// the parameters and the seed: records are sorted by id, and the wall time
// only enters the JSON on request.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "focklab/fock_finite.hpp"
#include "focklab/fock_subalgebra.hpp"
#include "focklab/geometry.hpp"
#include "focklab/hodge_connection.hpp"
#include "focklab/oscillator.hpp"

#ifndef FOCKLAB_FAMILY_DIR
#define FOCKLAB_FAMILY_DIR "families"
#endif

namespace focklab {

enum class Status { Pass, Fail, Skipped };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

struct CheckRecord {
    std::string id;
    std::string anchor;
    Status status = Status::Skipped;
    std::string witness;
};

/// Check id (without a "[...]" instance tag) -> anchor in the source text.
/// Anchors are the LaTeX labels of the statements; unlabelled statements are
/// keyed to the labelled result whose proof contains them.
inline const std::map<std::string, std::string>& paper_map() {
    static const std::map<std::string, std::string> m{
        {"adjoint.basis", "lemma:adjoint"},
        {"adjoint.quadratic_unitary", "cor:adjoint"},
        {"connection.curvature.scalar", "thm:Fconnection"},
        {"connection.dagger.first", "thm:Fconnection"},
        {"connection.dagger.second", "thm:Fconnection"},
        {"connection.det.curvature", "thm:Fconnection"},
        {"connection.family", "sect:phs"},
        {"connection.frame.blocks", "thm:Fconnection"},
        {"connection.frame.conjugation", "thm:Fconnection"},
        {"connection.frame.flat", "thm:Fconnection"},
        {"connection.lemma.s_parallel", "thm:Fconnection"},
        {"connection.lemma.sbar_parallel", "thm:Fconnection"},
        {"connection.lemma.trace", "thm:Fconnection"},
        {"connection.s.inverts_E", "thm:Fconnection"},
        {"connection.s.symmetric", "thm:Fconnection"},
        {"connection.sigma.symmetric", "thm:Fconnection"},
        {"connection.sigma.tensorial", "thm:Fconnection"},
        {"connection.theorem.half_det", "thm:Fconnection"},
        {"connection.theorem.proof_scalar", "thm:Fconnection"},
        {"connection.theorem.stated_scalar", "thm:Fconnection"},
        {"connection.trace.antisymmetry", "thm:Fconnection"},
        {"connection.u_section.E_is_sigma", "thm:Fconnection/proposition"},
        {"connection.u_section.equals_sbar", "thm:Fconnection/proposition"},
        {"connection.u_section.proposition", "thm:Fconnection/proposition"},
        {"connection.u_section.symmetric", "thm:Fconnection/proposition"},
        {"connection.unitarity.sample", "cor:adjoint"},
        {"fock.bracket_TT", "lemma:Tbracket"},
        {"fock.heisenberg_relation", "sect:phs"},
        {"fock.inner_product_positive", "sect:phs"},
        {"fock.tau_hat_deviation", "lemma:taudeviation"},
        {"fock.tau_homomorphism", "lemma:bracket"},
        {"fock_type.holomorphic_isotropic", "lemma:residue"},
        {"fock_type.rank", "prop:fockiso"},
        {"fock_type.residue_gram", "lemma:residue"},
        {"fock_type.surrogates", "prop:fockiso"},
        {"hyperelliptic.certificate", "prop:fockiso"},
        {"hyperelliptic.closure_witness", "lemma:residue/example"},
        {"hyperelliptic.model", "lemma:residue/example"},
        {"hyperelliptic.scalar_action", "prop:A"},
        {"virasoro.cocycle", "lemma:chat"},
        {"virasoro.spot_central", "lemma:chat"},
        {"wzw.direct_symmetric", "thm:fockiso"},
        {"wzw.scaled_identity", "thm:fockiso"},
        {"wzw.sign_identity", "thm:fockiso"},
        {"wzw.symmetric", "thm:fockiso"},
    };
    return m;
}

inline std::string anchor_for(const std::string& id) {
    const std::string base = id.substr(0, id.find('['));
    auto it = paper_map().find(base);
    if (it == paper_map().end()) throw std::logic_error("check id without anchor: " + id);
    return it->second;
}

struct SuiteParams {
    std::map<std::string, std::string> values;
    std::uint64_t seed = 1729;
    int prec = 40;

    bool has(const std::string& k) const { return values.count(k) != 0; }
    std::string get(const std::string& k, const std::string& def) const {
        auto it = values.find(k);
        return it == values.end() ? def : it->second;
    }
    int get_int(const std::string& k, int def) const {
        auto it = values.find(k);
        if (it == values.end()) return def;
        try {
            std::size_t used = 0;
            int v = std::stoi(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(k);
            return v;
        } catch (const std::exception&) {
            throw InvalidParams("parameter " + k + " must be an integer, got '" + it->second + "'");
        }
    }
};

/// "0,-1,0,1" or "[0, -1, 0, 1]" -> coefficients, constant term first.
inline std::vector<GaussianRational> parse_coefficients(std::string s) {
    for (char& c : s)
        if (c == '[' || c == ']') c = ' ';
    std::vector<GaussianRational> out;
    ParameterSpace none;
    for (const auto& tok : detail::split(s, ',')) {
        if (tok.empty()) throw InvalidParams("empty coefficient in '" + s + "'");
        try {
            RF v = parse_rational_function(tok, none);
            out.push_back(v.constant_value());
        } catch (const ParseError& e) {
            throw InvalidParams(std::string("bad coefficient: ") + e.what());
        }
    }
    if (out.empty()) throw InvalidParams("no coefficients");
    return out;
}

inline std::string poly_name(const std::vector<GaussianRational>& f) {
    std::string s;
    for (std::size_t k = f.size(); k-- > 0;) {
        if (f[k].is_zero()) continue;
        std::string c = to_string(f[k]);
        std::string mono = k == 0 ? "" : (k == 1 ? "x" : "x^" + std::to_string(k));
        std::string term;
        if (mono.empty())
            term = c;
        else if (c == "1")
            term = mono;
        else if (c == "-1")
            term = "-" + mono;
        else
            term = c + "*" + mono;
        if (!s.empty() && term[0] != '-') s += "+";
        s += term;
    }
    return s.empty() ? "0" : s;
}

struct SuiteReport {
    std::string suite;
    std::map<std::string, std::string> params;
    std::vector<CheckRecord> checks;
    double wall_seconds = 0;  // kept out of JSON unless asked for, see to_json

    void add(const std::string& id, Status st, const std::string& witness = "") {
        checks.push_back({id, anchor_for(id), st, st == Status::Pass ? "" : witness});
    }
    void add(const std::string& id, bool ok, const std::string& witness = "") {
        add(id, ok ? Status::Pass : Status::Fail, witness);
    }
    void finish() {
        std::stable_sort(checks.begin(), checks.end(),
                         [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
    }
    std::size_t count(Status s) const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [s](const CheckRecord& c) { return c.status == s; }));
    }
    bool passed() const { return count(Status::Fail) == 0; }
    const CheckRecord* find(const std::string& id) const {
        for (const auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }

    nlohmann::json to_json(bool with_wall_time = false) const {
        nlohmann::json j;
        j["schema"] = "fock-lab/1";
        j["suite"] = suite;
        j["params"] = params;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"id", c.id}, {"anchor", c.anchor}, {"status", to_string(c.status)}, {"witness", c.witness}});
        j["summary"] = {{"pass", count(Status::Pass)}, {"fail", count(Status::Fail)}, {"skipped", count(Status::Skipped)}};
        if (with_wall_time) j["wall_time_seconds"] = wall_seconds;
        return j;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << "suite " << suite << "\n";
        for (const auto& [k, v] : params) out << "  " << k << " = " << v << "\n";
        for (const auto& c : checks) {
            out << (c.status == Status::Pass ? "PASS " : c.status == Status::Fail ? "FAIL " : "SKIP ") << c.id << "  ("
                << c.anchor << ")";
            if (!c.witness.empty()) out << "  " << c.witness;
            out << "\n";
        }
        out << count(Status::Pass) << " passed, " << count(Status::Fail) << " failed, " << count(Status::Skipped)
            << " skipped\n";
        return out.str();
    }
};

namespace suites {

using Q = GaussianRational;

inline Q random_gaussian(std::mt19937_64& rng, long span = 3) {
    std::uniform_int_distribution<long> c(-span, span);
    long re = c(rng), im = c(rng);
    return {Rational(re), Rational(im)};
}

inline ScalarMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
    ScalarMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c) m(r, c) = m(c, r) = random_gaussian(rng);
    return m;
}

inline std::vector<FockState> probes_upto(const SymplecticSpace& h, std::size_t grade) {
    std::vector<FockState> out;
    for (std::size_t d = 0; d <= grade; ++d)
        for (const auto& w : h.fock_basis(d)) out.push_back(FockState::basis(w));
    return out;
}

inline std::string tag(const std::string& s) { return "[" + s + "]"; }

inline void fock_basics(SuiteReport& r, const SuiteParams& p) {
    const int gmax = p.get_int("gmax", 3);
    const auto grade = static_cast<std::size_t>(p.get_int("grade", 4));
    r.params["gmax"] = std::to_string(gmax);
    r.params["grade"] = std::to_string(grade);
    std::mt19937_64 rng(p.seed);
    for (int g = 1; g <= gmax; ++g) {
        const auto h = SymplecticSpace::standard(g);
        const std::string t = tag("g=" + std::to_string(g));
        const auto probes = probes_upto(h, std::min<std::size_t>(grade, 3));

        bool ok = true;
        std::string wit;
        for (int a = -g; a <= g && ok; ++a)
            for (int b = -g; b <= g && ok; ++b) {
                if (!a || !b) continue;
                auto ea = Operator::generator(a), eb = Operator::generator(b);
                for (const auto& v : probes)
                    if (h.rho(ea, h.rho(eb, v)) - h.rho(eb, h.rho(ea, v)) != h.pairing(a, b) * v) {
                        ok = false;
                        wit = "labels " + std::to_string(a) + "," + std::to_string(b);
                        break;
                    }
            }
        r.add("fock.heisenberg_relation" + t, ok, wit);

        ok = true;
        wit.clear();
        for (std::size_t d = 0; d <= grade && ok; ++d)
            if (!is_positive_definite(h.grade_gram(d))) {
                ok = false;
                wit = "grade " + std::to_string(d);
            }
        r.add("fock.inner_product_positive" + t, ok, wit);

        std::vector<ScalarMatrix> gens;
        for (std::size_t a = 0; a < h.dim(); ++a)
            for (std::size_t b = a; b < h.dim(); ++b) {
                ScalarMatrix alpha(h.dim(), h.dim());
                alpha(a, b) = alpha(b, a) = Q(1);
                gens.push_back(h.E_map(alpha));
            }
        bool hom = true, dev = true;
        std::string hom_wit, dev_wit;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            const auto& A = gens[i];
            if (dev && h.tau_hat(A) - h.tau(A) != Operator(Q(make_rational(-1, 2)) * h.trace_on_complement(A))) {
                dev = false;
                dev_wit = "generator " + std::to_string(i);
            }
            for (std::size_t j = 0; j < gens.size() && hom; ++j) {
                const auto& B = gens[j];
                if (commutator(h.algebra(), h.tau(A), h.tau(B)) != h.tau(A * B - B * A)) {
                    hom = false;
                    hom_wit = "generators " + std::to_string(i) + "," + std::to_string(j);
                }
            }
        }
        r.add("fock.tau_homomorphism" + t, hom, hom_wit);
        r.add("fock.tau_hat_deviation" + t, dev, dev_wit);

        ok = true;
        wit.clear();
        const auto n = static_cast<std::size_t>(g);
        const auto bracket_probes = probes_upto(h, grade);
        for (int trial = 0; trial < 3 && ok; ++trial) {
            ScalarMatrix a = random_symmetric(rng, n), b = random_symmetric(rng, n);
            for (const auto& v : bracket_probes)
                if (!h.bracket_TT_check(a, b, v)) {
                    ok = false;
                    wit = "trial " + std::to_string(trial) + " alpha " + to_string(a) + " beta " + to_string(b);
                    break;
                }
        }
        r.add("fock.bracket_TT" + t, ok, wit);
    }
}

inline void adjoint(SuiteReport& r, const SuiteParams& p) {
    const int gmax = p.get_int("gmax", 3);
    const auto grade = static_cast<std::size_t>(p.get_int("grade", 4));
    r.params["gmax"] = std::to_string(gmax);
    r.params["grade"] = std::to_string(grade);
    std::mt19937_64 rng(p.seed + 1);
    for (int g = 1; g <= gmax; ++g) {
        const auto h = SymplecticSpace::standard(g);
        const std::string t = tag("g=" + std::to_string(g));
        const auto probes = probes_upto(h, grade);
        bool ok = true;
        std::string wit;
        for (int a = -g; a <= g && ok; ++a) {
            if (!a) continue;
            const HVector va = h.basis_vector(a);
            for (std::size_t i = 0; i < probes.size() && ok; ++i)
                for (std::size_t j = 0; j < probes.size(); ++j)
                    if (!h.adjoint_check(va, probes[i], probes[j])) {
                        ok = false;
                        wit = "label " + std::to_string(a) + " probes " + std::to_string(i) + "," + std::to_string(j);
                        break;
                    }
        }
        r.add("adjoint.basis" + t, ok, wit);

        ok = true;
        wit.clear();
        ScalarMatrix s = h.embed_F(random_symmetric(rng, static_cast<std::size_t>(g)));
        Operator x = h.hat(s + h.conj_tensor(s));
        const auto small = probes_upto(h, std::min<std::size_t>(grade, 3));
        for (std::size_t i = 0; i < small.size() && ok; ++i)
            for (std::size_t j = 0; j < small.size(); ++j)
                if (h.inner_product(h.rho(x, small[i]), small[j]) != -h.inner_product(small[i], h.rho(x, small[j]))) {
                    ok = false;
                    wit = "probes " + std::to_string(i) + "," + std::to_string(j);
                    break;
                }
        r.add("adjoint.quadratic_unitary" + t, ok, wit);
    }
}

inline void virasoro(SuiteReport& r, const SuiteParams& p) {
    const int kmax = p.get_int("kmax", 6);
    const int grade = p.get_int("grade", 8);
    r.params["kmax"] = std::to_string(kmax);
    r.params["grade"] = std::to_string(grade);
    bool ok = true;
    std::string wit;
    for (int k = -kmax; k <= kmax && ok; ++k)
        for (int l = -kmax; l <= kmax; ++l) {
            auto c = virasoro_bracket<Q>(k, l, grade);
            if (!c.holds || c.central != Q(virasoro_central_formula(k, l))) {
                ok = false;
                wit = "(k,l)=(" + std::to_string(k) + "," + std::to_string(l) + ") central " + to_string(c.central) +
                      (c.holds ? "" : ", not scalar on probes");
                break;
            }
        }
    r.add("virasoro.cocycle", ok, wit);
    auto spot = virasoro_bracket<Q>(2, -2, grade);
    r.add("virasoro.spot_central", spot.holds && spot.central == Q(make_rational(1, 2)),
          "central " + to_string(spot.central));
}

struct CurveSpec {
    std::vector<Q> f;
    int g = 1;
    int window = 40;
    int degree_bound = 14;
    std::string name;
};

inline std::vector<CurveSpec> curves(const SuiteParams& p) {
    std::vector<std::vector<Q>> fs;
    if (p.has("f"))
        fs.push_back(parse_coefficients(p.get("f", "")));
    else
        fs = {{Q(0), Q(-1), Q(0), Q(1)}, {Q(0), Q(-1), Q(0), Q(0), Q(0), Q(1)}};
    std::vector<CurveSpec> out;
    for (auto& f : fs) {
        CurveSpec c;
        c.g = p.get_int("g", (static_cast<int>(f.size()) - 2) / 2);
        c.window = p.get_int("N", p.prec);
        c.degree_bound = p.get_int("deg", 2 * c.g + 12);
        c.name = poly_name(f);
        c.f = std::move(f);
        out.push_back(std::move(c));
    }
    return out;
}

inline void echo_curves(SuiteReport& r, const std::vector<CurveSpec>& cs) {
    std::string names, gs, degs;
    for (const auto& c : cs) {
        names += (names.empty() ? "" : ";") + c.name;
        gs += (gs.empty() ? "" : ";") + std::to_string(c.g);
        degs += (degs.empty() ? "" : ";") + std::to_string(c.degree_bound);
    }
    r.params["f"] = names;
    r.params["g"] = gs;
    r.params["N"] = std::to_string(cs.front().window);
    r.params["deg"] = degs;
}

inline void fock_type(SuiteReport& r, const SuiteParams& p) {
    auto cs = curves(p);
    echo_curves(r, cs);
    for (const auto& c : cs) {
        const std::string t = tag(c.name);
        auto d = curve_fock_data(build_model(c.f, c.g, c.window), c.degree_bound);
        auto cert = certify_curve(d);
        r.add("fock_type.surrogates" + t, cert.fock.fock_type(),
              "ft1=" + std::to_string(cert.fock.ft1_evidence) + " ft2=" + std::to_string(cert.fock.ft2_meets_O) +
                  std::to_string(cert.fock.ft2_stable) + " ft3=" + std::to_string(cert.fock.ft3));
        r.add("fock_type.rank" + t, cert.rank_b_over_a == 2 * c.g, "rank " + std::to_string(cert.rank_b_over_a));
        r.add("fock_type.residue_gram" + t, cert.gram_antisymmetric && cert.gram_nondegenerate,
              "gram " + to_string(cert.gram));
        r.add("fock_type.holomorphic_isotropic" + t, cert.holomorphic_isotropic && cert.a_orthogonal_to_b,
              "gram " + to_string(cert.gram));
    }
}

inline void hyperelliptic(SuiteReport& r, const SuiteParams& p) {
    auto cs = curves(p);
    echo_curves(r, cs);
    for (const auto& c : cs) {
        const std::string t = tag(c.name);
        auto m = build_model(c.f, c.g, c.window);
        LaurentSeries<Q> fx;
        for (std::size_t k = 0; k < c.f.size(); ++k) fx += LaurentSeries<Q>::monomial(c.f[k], -2 * static_cast<int>(k));
        LaurentSeries<Q> y2 = m.y * m.y;
        r.add("hyperelliptic.model" + t, y2.agrees_below(fx, y2.prec()), "y^2 - f(x) nonzero below t^" + std::to_string(y2.prec()));
        auto d = curve_fock_data(m, c.degree_bound);
        r.add("hyperelliptic.certificate" + t, certify_curve(d).ok());

        auto w = closure_falsifier(d);
        if (!w.found) {
            r.add("hyperelliptic.closure_witness" + t, Status::Skipped,
                  "no witness among " + std::to_string(w.pairs_tried) + " pairs");
        } else {
            bool stable = closure_witness_stable(m, c.degree_bound);
            r.add("hyperelliptic.closure_witness" + t, stable,
                  w.u_label + " * " + w.v_label + " at window " + std::to_string(w.window) + (stable ? "" : ", not stable"));
        }

        // tau-hat(2y d/dx) on covariants
        const int pole = 2 * c.g + 3, window = std::min(c.degree_bound - 2, d.a.window() - 1);
        // 2y d/dx = D_{1-2g} up to units raises energy by 2g - 1
        const int probe_energy = 4, energy = probe_energy + 2 * c.g - 1;
        try {
            auto q = build_quotient(d.a, pole, window, d.phi_negative());
            std::vector<FockVector<Q>> probes;
            for (const auto& wd : energy_basis_upto(probe_energy))
                if (!wd.empty()) probes.push_back(FockVector<Q>::basis(wd));
            auto s = scalar_action(d.a, q, vertical_derivation(m), probes, energy);
            r.add("hyperelliptic.scalar_action" + t, s.probes == probes.size(),
                  "scalar " + to_string(s.scalar) + " on " + std::to_string(s.probes) + " probes");
        } catch (const FockError& e) {
            r.add("hyperelliptic.scalar_action" + t, false, e.what());
        }
    }
}

inline std::string family_path(const std::string& name) {
    if (name.find('/') != std::string::npos || name.find(".family") != std::string::npos) return name;
    return std::string(FOCKLAB_FAMILY_DIR) + "/" + name + ".family";
}

inline void connection(SuiteReport& r, const SuiteParams& p) {
    const std::string list = p.get("family", "modular,siegel2");
    const auto cap = static_cast<std::size_t>(p.get_int("grade", 4));
    r.params["family"] = list;
    r.params["grade"] = std::to_string(cap);
    for (const auto& name : detail::split(list, ',')) {
        HodgeFamily fam = load_family(family_path(name));
        const std::string t = tag(fam.name.empty() ? name : fam.name);
        auto cert = certify_family(fam);
        r.add("connection.family" + t, cert.ok(), "family invariants fail");
        if (!cert.ok()) continue;
        auto rep = verify_theorem31(fam, cap);
        const auto& names = fam.params.names;
        for (const auto& c : rep.checks) {
            std::string wit = c.witness;
            if (c.id == "theorem.stated_scalar")
                wit = "curvature " + to_string(rep.omega, names) + " vs stated " + to_string(rep.stated, names);
            r.add("connection." + c.id + t, c.holds, wit);
        }
        // extension e_-k = conj(v) M^-1 inside Fbar
        auto d = connection_blocks(fam);
        const std::size_t g = fam.genus;
        RFMatrix ext(2 * g, 2 * g);
        ext.set_block(0, 0, fam.frame);
        ext.set_block(0, g, fam.frame.conj() * inverse(d.M));
        auto u = u_section(fam, ext);
        r.add("connection.u_section.symmetric" + t, u.symmetric);
        r.add("connection.u_section.E_is_sigma" + t, u.E_is_sigma);
        r.add("connection.u_section.equals_sbar" + t, u.extension_in_fbar && u.equals_s_bar);
        r.add("connection.u_section.proposition" + t, u.proposition_s_bar && u.proposition_u_scalar && u.u_shift.is_zero());
    }
}

inline void wzw(SuiteReport& r, const SuiteParams& p) {
    auto cs = curves(p);
    echo_curves(r, cs);
    const int trials = p.get_int("trials", 6);
    r.params["trials"] = std::to_string(trials);
    std::mt19937_64 rng(p.seed + 2);
    std::uniform_int_distribution<long> coef(-6, 6);
    for (const auto& c : cs) {
        const std::string t = tag(c.name);
        auto d = curve_fock_data(build_model(c.f, c.g, c.window), c.degree_bound);
        std::vector<Derivation<Q>> ders{Derivation<Q>::D(-2), vertical_derivation(d.model)};
        for (int k = 0; k < trials; ++k) {
            std::map<int, Q> gm;
            for (int e = -7; e <= 3; ++e) gm[e] = Q(coef(rng));
            ders.push_back(Derivation<Q>{LaurentSeries<Q>::from_map(gm), {}});
        }
        bool sym = true, dsym = true, lit = true, scaled = true;
        std::string lit_wit;
        for (std::size_t k = 0; k < ders.size(); ++k) {
            auto w = wzw_gram(ders[k], d.omega_closed);
            sym = sym && w.symmetric;
            dsym = dsym && w.direct_symmetric;
            scaled = scaled && w.scaled_identity;
            if (lit && !w.literal_identity) {
                lit = false;
                auto [i, j] = w.literal_failures.front();  // 1-based
                const auto a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(j - 1);
                lit_wit = "derivation " + std::to_string(k) + " entry (" + std::to_string(i) + "," +
                          std::to_string(j) + "): res(e_j d(De_i)) = " + to_string(w.direct(a, b)) +
                          ", -res(<D,w_i> w_j) = " + to_string(-w.pairing(a, b));
            }
        }
        r.add("wzw.symmetric" + t, sym);
        r.add("wzw.direct_symmetric" + t, dsym);
        r.add("wzw.sign_identity" + t, lit, lit_wit);
        r.add("wzw.scaled_identity" + t, scaled);
    }
}

}  // namespace suites

namespace suites {

// Bad curve data and unparsable input surface as InvalidParams.
template <class F>
void as_invalid_params(F&& f) {
    try {
        f();
    } catch (const RepeatedRoots& e) {
        throw InvalidParams(e.what());
    } catch (const WrongDegree& e) {
        throw InvalidParams(e.what());
    } catch (const ParseError& e) {
        throw InvalidParams(e.what());
    }
}

}  // namespace suites

namespace suites {

inline const std::map<std::string, std::set<std::string>>& suite_keys() {
    static const std::set<std::string> curve{"f", "g", "N", "deg"};
    static const std::map<std::string, std::set<std::string>> k{
        {"fock-basics", {"gmax", "grade"}},
        {"adjoint", {"gmax", "grade"}},
        {"virasoro", {"kmax", "grade"}},
        {"fock-type", curve},
        {"hyperelliptic", curve},
        {"connection", {"family", "grade"}},
        {"wzw-gram", {"f", "g", "N", "deg", "trials"}},
    };
    return k;
}

inline std::set<std::string> all_keys() {
    std::set<std::string> out;
    for (const auto& [n, ks] : suite_keys()) out.insert(ks.begin(), ks.end());
    return out;
}

inline void check_keys(const SuiteParams& p, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : p.values)
        if (!allowed.count(k)) throw InvalidParams("unknown parameter '" + k + "'");
}

}  // namespace suites

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"fock-basics", "adjoint", "virasoro", "fock-type",
                                            "hyperelliptic", "connection", "wzw-gram", "all"};
    return n;
}

inline SuiteReport run_suite(const std::string& name, const SuiteParams& p) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport r;
    r.suite = name;
    r.params["seed"] = std::to_string(p.seed);
    r.params["prec"] = std::to_string(p.prec);
    for (const auto& [k, v] : p.values) r.params["param." + k] = v;
    auto run_one = [&](const std::string& n, SuiteReport& into) {
        if (n == "fock-basics") return suites::fock_basics(into, p);
        if (n == "adjoint") return suites::adjoint(into, p);
        if (n == "virasoro") return suites::virasoro(into, p);
        if (n == "fock-type") return suites::fock_type(into, p);
        if (n == "hyperelliptic") return suites::hyperelliptic(into, p);
        if (n == "connection") return suites::connection(into, p);
        if (n == "wzw-gram") return suites::wzw(into, p);
        throw UnknownSuite(n);
    };
    if (name != "all" && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
        throw UnknownSuite(name);
    suites::check_keys(p, name == "all" ? suites::all_keys() : suites::suite_keys().at(name));
    suites::as_invalid_params([&] {
        if (name == "all") {
            for (const auto& n : suite_names()) {
                if (n == "all") continue;
                SuiteReport part;
                run_one(n, part);
                for (auto& c : part.checks) r.checks.push_back(std::move(c));
                for (const auto& [k, v] : part.params) r.params[n + "." + k] = v;
            }
        } else {
            run_one(name, r);
        }
    });
    r.finish();
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// --- printable computations ---------------------------------------------------

namespace suites {

/// "ē1 ē1", "ebar1", "e_2" (= e_-2) or "e1", applied right to left to v_o.
inline FockState parse_state(const SymplecticSpace& h, const std::string& text) {
    FockState v = FockState::vacuum();
    auto toks = detail::split_ws(text);
    for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
        std::string tok = *it;
        HVector x;
        auto num = [&](std::size_t from) {
            try {
                std::size_t used = 0;
                int k = std::stoi(tok.substr(from), &used);
                if (used + from != tok.size() || k < 1 || k > h.genus()) throw std::invalid_argument(tok);
                return k;
            } catch (const std::exception&) {
                throw InvalidParams("bad letter '" + tok + "'");
            }
        };
        if (tok.rfind("\xC4\x93", 0) == 0)  // UTF-8 e-macron
            x = h.conj(h.basis_vector(num(2)));
        else if (tok.rfind("ebar", 0) == 0)
            x = h.conj(h.basis_vector(num(4)));
        else if (tok.rfind("e_", 0) == 0)
            x = h.basis_vector(-num(2));
        else if (tok.rfind("e", 0) == 0)
            x = h.basis_vector(num(1));
        else
            throw InvalidParams("bad letter '" + tok + "'");
        v = h.rho(h.vector_operator(x), v);
    }
    return v;
}

inline std::string mode_name(int a) { return a > 0 ? "e" + std::to_string(a) : "e_" + std::to_string(-a); }

}  // namespace suites

inline const std::vector<std::string>& compute_names() {
    static const std::vector<std::string> n{"inner-product", "tau-hat", "wzw-gram", "phi-basis", "quotient-basis"};
    return n;
}

inline std::string compute(const std::string& name, const SuiteParams& p) {
    using Q = GaussianRational;
    std::ostringstream out;
    if (std::find(compute_names().begin(), compute_names().end(), name) == compute_names().end())
        throw UnknownSuite("unknown computation: " + name);
    static const std::map<std::string, std::set<std::string>> keys{
        {"inner-product", {"g", "v", "w"}},
        {"tau-hat", {"k", "grade"}},
        {"wzw-gram", {"f", "g", "N", "deg", "k"}},
        {"phi-basis", {"f", "g", "N", "deg"}},
        {"quotient-basis", {"f", "g", "N", "deg"}},
    };
    suites::check_keys(p, keys.at(name));
    suites::as_invalid_params([&] {
        if (name == "inner-product") {
            const int g = p.get_int("g", 1);
            const auto h = SymplecticSpace::standard(g);
            FockState v = suites::parse_state(h, p.get("v", "")), w = suites::parse_state(h, p.get("w", ""));
            out << to_string(h.inner_product(v, w)) << "\n";
        } else if (name == "tau-hat") {
            const int k = p.get_int("k", 2), grade = p.get_int("grade", 3);
            out << to_string(mode_quadratic<Q>(k, grade), suites::mode_name) << "\n";
        } else if (name == "wzw-gram" || name == "phi-basis" || name == "quotient-basis") {
            auto cs = suites::curves(p);
            const auto& c = cs.front();
            auto m = build_model(c.f, c.g, c.window);
            if (name == "phi-basis") {
                auto d = curve_fock_data(m, c.degree_bound);
                for (const auto& [k, s] : d.phi) out << "phi_" << k << " = " << to_string(s) << "\n";
            } else if (name == "quotient-basis") {
                auto d = curve_fock_data(m, c.degree_bound);
                auto q = build_quotient(d.a, 2 * c.g + 3, std::min(c.degree_bound - 2, d.a.window() - 1), d.phi_negative());
                for (int i = -q.genus; i <= q.genus; ++i)
                    if (i) out << "e_" << i << " = " << to_string(q.element(i)) << "\n";
                out << "gram = " << to_string(q.gram()) << "\n";
            } else {
                auto d = curve_fock_data(m, c.degree_bound);
                Derivation<Q> D = p.has("k") ? Derivation<Q>::D(p.get_int("k", -2)) : vertical_derivation(m);
                auto w = wzw_gram(D, d.omega_closed);
                out << "gram = " << to_string(w.gram) << "\n";
                out << "pairing = " << to_string(w.pairing) << "\n";
                out << "direct = " << to_string(w.direct) << "\n";
                out << "symmetric = " << (w.symmetric ? "true" : "false") << "\n";
                out << "sign_identity = " << (w.literal_identity ? "true" : "false") << "\n";
                out << "scaled_identity = " << (w.scaled_identity ? "true" : "false") << "\n";
            }
        }
    });
    return out.str();
}

}  // namespace focklab
