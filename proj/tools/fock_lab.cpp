// fock_lab: run verification suites or print single exact computations.
//
//   fock_lab --suite virasoro --param kmax=6 --param grade=8
//   fock_lab --suite all --json report.json
//   fock_lab --compute inner-product --param g=1 --param "v=ē1 ē1" --param "w=ē1 ē1"
//
// Exit codes: 0 all checks pass, 1 a check failed (or a computation broke
// down), 2 usage error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "focklab/suites.hpp"

namespace {

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
}

bool is_usage_error(const focklab::FockError& e) {
    using namespace focklab;
    return dynamic_cast<const UnknownSuite*>(&e) || dynamic_cast<const InvalidParams*>(&e) ||
           dynamic_cast<const ParseError*>(&e) || dynamic_cast<const RepeatedRoots*>(&e) ||
           dynamic_cast<const WrongDegree*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace focklab;
    CLI::App app{"Exact checks for Fock spaces, oscillator algebras and the Fock connection"};
    std::string suite, comp, json_path;
    std::vector<std::string> raw_params;
    std::uint64_t seed = SuiteParams{}.seed;
    int prec = SuiteParams{}.prec;
    bool wall_time = false;

    auto* s = app.add_option("--suite", suite, "one of: " + join(suite_names()));
    auto* c = app.add_option("--compute", comp, "one of: " + join(compute_names()));
    s->excludes(c);
    app.add_option("--param", raw_params, "key=value, repeatable")->allow_extra_args(false);
    app.add_option("--json", json_path, "write the report as JSON to this file ('-' for stdout)");
    app.add_option("--seed", seed, "seed for randomized probes");
    app.add_option("--prec", prec, "default series window N")->check(CLI::PositiveNumber);
    app.add_flag("--wall-time", wall_time, "include the wall time in the JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (suite.empty() == comp.empty()) {
        std::cerr << "fock_lab: give exactly one of --suite or --compute\n";
        return 2;
    }

    SuiteParams params;
    params.seed = seed;
    params.prec = prec;
    for (const auto& kv : raw_params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "fock_lab: --param expects key=value, got '" << kv << "'\n";
            return 2;
        }
        params.values[kv.substr(0, eq)] = kv.substr(eq + 1);
    }

    auto emit_json = [&](const nlohmann::json& j) {
        if (json_path.empty()) return;
        if (json_path == "-") {
            std::cout << j.dump(2) << "\n";
            return;
        }
        std::ofstream out(json_path);
        if (!out) throw InvalidParams("cannot write " + json_path);
        out << j.dump(2) << "\n";
    };

    try {
        if (!suite.empty()) {
            SuiteReport r = run_suite(suite, params);
            if (json_path != "-") std::cout << r.to_text() << "wall time " << r.wall_seconds << " s\n";
            emit_json(r.to_json(wall_time));
            return r.passed() ? 0 : 1;
        }
        const std::string text = compute(comp, params);
        if (json_path != "-") std::cout << text;
        nlohmann::json j;
        j["schema"] = "fock-lab/1";
        j["compute"] = comp;
        j["params"] = params.values;
        j["params"]["seed"] = std::to_string(seed);
        j["params"]["prec"] = std::to_string(prec);
        j["result"] = text;
        emit_json(j);
        return 0;
    } catch (const FockError& e) {
        std::cerr << "fock_lab: " << e.what() << "\n";
        return is_usage_error(e) ? 2 : 1;
    }
}
