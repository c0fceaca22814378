// lepsim: run scenarios and sweeps, self-validate, regenerate pinned values.
//
// Exit codes: 0 success, 1 configuration or input error, 2 failed check.

#include "lep/config.hpp"
#include "lep/experiments.hpp"
#include "lep/pinning.hpp"
#include "lep/validation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kCheckFailed = 2;

void print_check(const lep::CheckResult& r) {
    fmt::print("{} {} ({:.2f} s): {}\n", r.passed ? "PASS" : "FAIL", r.name, r.seconds, r.detail);
}

int cmd_run(const std::string& config, const std::string& out) {
    const lep::Scenario s = lep::load_config(config);
    const auto result = lep::run_scenario(s);
    const std::filesystem::path dir = out.empty() ? std::filesystem::path("out") / s.name : std::filesystem::path(out);
    for (const auto& p : lep::write_scenario(result, dir)) fmt::print("wrote {}\n", p.string());
    for (const auto& run : result.runs) {
        if (!run.trace) {
            fmt::print("{:<12} error: {}\n", run.kind.id(), run.error);
            continue;
        }
        const auto& t = *run.trace;
        fmt::print("{:<12} rounds {:>3}  F {:.6f}  R {:.6g}  {}\n", run.kind.id(), t.rows.size() - 1,
                   t.final_fidelity(), t.final_resources(), lep::to_string(t.end));
    }
    if (result.verdict)
        fmt::print("winner: {} ({})\n", result.verdict->winner, result.verdict->status);
    return kOk;
}

int cmd_sweep(const std::string& config, const std::string& out) {
    const lep::Scenario s = lep::load_config(config);
    if (!s.sweep) throw lep::ConfigError(config, 0, "sweep needs sweep.pw, sweep.pz and sweep.z_qubits");
    if (s.mode == lep::Mode::Trace) throw lep::ConfigError(config, 0, "sweep needs a fixed_fidelity or fixed_resources mode");
    if (s.sweep->pw.size() * s.sweep->pz.size() > 100)
        fmt::print(stderr, "note: {} cells; fine grids can take a long time\n", s.sweep->pw.size() * s.sweep->pz.size());
    const auto result = lep::run_sweep(s);
    const std::filesystem::path dir = out.empty() ? std::filesystem::path("out") / s.name : std::filesystem::path(out);
    for (const auto& p : lep::write_sweep(result, dir)) fmt::print("wrote {}\n", p.string());
    int errors = 0;
    for (const auto& c : result.cells) errors += c.status == "error";
    fmt::print("{} cells, {} with errors\n", result.cells.size(), errors);
    return kOk;
}

int cmd_validate(int scenarios) {
    bool ok = true;
    lep::OracleSuiteOptions opt;
    opt.scenarios = scenarios;
    const auto oracle = lep::oracle_equivalence_suite(opt);
    print_check(oracle);
    ok = ok && oracle.passed;
    for (const auto& r : lep::invariant_suite()) {
        print_check(r);
        ok = ok && r.passed;
    }
    return ok ? kOk : kCheckFailed;
}

int cmd_pin(const std::string& out, const std::string& check) {
    const lep::PinTable fresh = lep::compute_pins();
    if (check.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw lep::Error("cannot write " + out);
        f << fresh.to_json();
        fmt::print("wrote {} ({} entries)\n", out, fresh.entries().size());
        return kOk;
    }
    const lep::PinTable stored = lep::PinTable::load(check);
    int mismatches = 0;
    for (const auto& e : fresh.entries()) {
        const lep::PinEntry* old = stored.find(e.description);
        bool same = old && old->values.size() == e.values.size();
        for (std::size_t i = 0; same && i < e.values.size(); ++i)
            same = std::abs(old->values[i] - e.values[i]) <= 1e-10;
        if (!same) {
            ++mismatches;
            fmt::print("MISMATCH {} {}\n", e.key(), e.description);
        }
    }
    fmt::print("{} entries checked, {} mismatches\n", fresh.entries().size(), mismatches);
    return mismatches == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator for localized and recurrence purification of graph states"};
    app.require_subcommand(1);

    std::string config, out, check;
    int scenarios = 200;

    auto* run = app.add_subcommand("run", "run every strategy of a scenario and write traces");
    run->add_option("config", config, "scenario file")->required();
    run->add_option("-o,--out", out, "output directory (default out/<name>)");

    auto* sweep = app.add_subcommand("sweep", "evaluate a (p_w, p_z) grid and write the winner map");
    sweep->add_option("config", config, "scenario file with sweep axes")->required();
    sweep->add_option("-o,--out", out, "output directory (default out/<name>)");

    auto* validate = app.add_subcommand("validate", "oracle equivalence and property suites");
    validate->add_option("--scenarios", scenarios, "random oracle scenarios")->check(CLI::PositiveNumber);

    auto* pin = app.add_subcommand("pin", "recompute pinned reference values");
    pin->add_option("-o,--out", out, "where to write the table")->default_val("pinned.json");
    pin->add_option("--check", check, "compare against an existing table instead of writing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return cmd_run(config, out);
        if (*sweep) return cmd_sweep(config, out);
        if (*validate) return cmd_validate(scenarios);
        if (*pin) return cmd_pin(out.empty() ? "pinned.json" : out, check);
    } catch (const lep::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kConfigError;
    }
    return kOk;
}
