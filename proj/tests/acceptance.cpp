// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion N   only N; exit status 0 iff it passes

#include <cstring>
#include <functional>
#include <iostream>

#include "focklab/suites.hpp"

using namespace focklab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SuiteParams with(std::map<std::string, std::string> kv) {
    SuiteParams p;
    p.values = std::move(kv);
    return p;
}

// All records whose id starts with one of the prefixes must pass; skipped counts as not passing.
Outcome require(const SuiteReport& r, const std::vector<std::string>& prefixes) {
    Outcome o{true, ""};
    std::size_t seen = 0;
    for (const auto& c : r.checks) {
        bool match = false;
        for (const auto& pre : prefixes) match = match || c.id.rfind(pre, 0) == 0;
        if (!match) continue;
        ++seen;
        if (c.status != Status::Pass) {
            o.pass = false;
            o.detail += (o.detail.empty() ? "" : "; ") + c.id + " " + to_string(c.status) +
                        (c.witness.empty() ? "" : ": " + c.witness);
        }
    }
    if (seen == 0) {
        o.pass = false;
        o.detail = "no matching checks";
    }
    if (o.pass) o.detail = std::to_string(seen) + " checks";
    return o;
}

Outcome criterion(int n) {
    switch (n) {
        case 1:
            return require(run_suite("virasoro", with({{"kmax", "6"}, {"grade", "8"}})),
                           {"virasoro.cocycle", "virasoro.spot_central"});
        case 2:
            return require(run_suite("adjoint", with({{"gmax", "3"}, {"grade", "4"}})), {"adjoint."});
        case 3:
            return require(run_suite("fock-basics", with({{"gmax", "3"}, {"grade", "4"}})),
                           {"fock.tau_homomorphism", "fock.tau_hat_deviation"});
        case 4:
            return require(run_suite("fock-basics", with({{"gmax", "3"}, {"grade", "4"}})), {"fock.bracket_TT"});
        case 5:
            return require(run_suite("connection", with({{"family", "modular,siegel2"}, {"grade", "4"}})),
                           {"connection."});
        case 6:
            return require(run_suite("fock-type", with({{"N", "40"}})), {"fock_type."});
        case 7:
            return require(run_suite("hyperelliptic", with({{"N", "40"}})), {"hyperelliptic.closure_witness"});
        case 8:
            return require(run_suite("hyperelliptic", with({{"N", "40"}})), {"hyperelliptic.scalar_action"});
        case 9:
            return require(run_suite("wzw-gram", SuiteParams{}), {"wzw.symmetric", "wzw.sign_identity"});
        case 10: {
            const std::string a = run_suite("all", SuiteParams{}).to_json().dump(2);
            const std::string b = run_suite("all", SuiteParams{}).to_json().dump(2);
            return {a == b, a == b ? std::to_string(a.size()) + " bytes identical" : "reports differ"};
        }
    }
    return {false, "no such criterion"};
}

const char* title(int n) {
    static const char* t[] = {"",
                              "Virasoro cocycle |k|,|l| <= 6 on grade <= 8, spot value 1/2",
                              "adjunction of rho(a) for g <= 3, grade <= 4",
                              "tau homomorphism and tau-hat deviation for g <= 3",
                              "bracket of quadratic operators for g <= 3, grade <= 4",
                              "Fock connection curvature, dagger identities and lemmas (modular, siegel2)",
                              "Fock-type certificates for x^3-x and x^5-x, N = 40",
                              "non-closure witness stable under N -> N+10",
                              "covariant scalar action of a vertical derivation",
                              "WZW Gram symmetry and sign identity",
                              "byte-identical JSON for run_suite(all)"};
    return n >= 1 && n <= 10 ? t[n] : "?";
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }
    if (which.empty())
        for (int n = 1; n <= 10; ++n) which.push_back(n);
    bool all = true;
    for (int n : which) {
        Outcome o;
        try {
            o = criterion(n);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << title(n) << " (" << o.detail
                  << ")" << std::endl;
    }
    return all ? 0 : 1;
}
