#include "lep/experiments.hpp"

#include <fmt/format.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace lep {

using nlohmann::ordered_json;

std::string format_number(double v) { return fmt::format("{:.15g}", v); }

double emitted(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

namespace {

StrategyValue value_of(const Scenario& s, const StrategyRun& run) {
    StrategyValue out{run.kind.id(), "error", std::nullopt};
    if (!run.trace) return out;
    const auto points = run.trace->points();
    InterpolationResult r;
    if (s.mode == Mode::FixedFidelity) {
        r = interpolate_to_fidelity(points, s.target);
        if (r.status != InterpolationStatus::Unreachable) out.value = emitted(r.value);
    } else {
        r = interpolate_to_resources(points, s.target);
        out.value = emitted(r.value);
    }
    out.status = to_string(r.status);
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << content;
}

ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json cell_json(const WinnerCell& c, Mode mode) {
    ordered_json j;
    j["index"] = c.index;
    j["p_w"] = emitted(c.pw);
    j["p_z"] = emitted(c.pz);
    j["f0"] = emitted(c.f0);
    j["winner"] = c.winner;
    j["value"] = optional_number(c.value);
    if (mode == Mode::FixedResources) j["gain"] = optional_number(c.gain);
    j["status"] = c.status;
    if (!c.error.empty()) j["error"] = c.error;
    ordered_json per = ordered_json::object();
    for (const auto& v : c.values)
        per[v.id] = {{"status", v.status}, {"value", optional_number(v.value)}};
    j["strategies"] = per;
    return j;
}

}  // namespace

std::vector<StrategyRun> run_strategies(const Scenario& s) {
    const StrategyContext ctx = s.context();
    const StopRule stop = s.stop_rule();
    std::vector<StrategyRun> runs;
    for (const auto& kind : s.strategies) {
        StrategyRun run{kind, std::nullopt, {}};
        try {
            run.trace = run_strategy(ctx, kind, stop);
        } catch (const Error& e) {
            run.error = e.what();
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

std::string rederive_winner(Mode mode, double target, double f0,
                            const std::vector<StrategyValue>& values) {
    if (mode == Mode::FixedFidelity && f0 >= target) return "same";
    const StrategyValue* best = nullptr;
    for (const auto& v : values) {
        if (!v.value) continue;
        if (!best) {
            best = &v;
            continue;
        }
        const bool better = mode == Mode::FixedFidelity ? *v.value < *best->value : *v.value > *best->value;
        if (better) best = &v;
    }
    return best ? best->id : "none";
}

WinnerCell judge(const Scenario& s, double f0, const std::vector<StrategyRun>& runs) {
    if (s.mode == Mode::Trace) throw InvalidArgument("trace mode has no winner");
    WinnerCell c;
    c.f0 = f0;
    if (s.mode == Mode::FixedResources && s.target < static_cast<double>(s.graph.edge_count())) {
        c.status = "error";
        c.winner = "none";
        c.error = "total resources below the cost of the main state";
        return c;
    }
    for (const auto& run : runs) c.values.push_back(value_of(s, run));
    c.winner = rederive_winner(s.mode, s.target, f0, c.values);
    if (c.winner == "same") {
        c.status = "same";
        c.value = emitted(static_cast<double>(s.graph.edge_count()));
    } else if (c.winner == "none") {
        c.status = s.mode == Mode::FixedFidelity ? "unreachable" : "error";
    } else {
        c.status = "ok";
        for (const auto& v : c.values)
            if (v.id == c.winner) c.value = v.value;
        if (s.mode == Mode::FixedResources) c.gain = emitted(relative_gain(f0, *c.value));
    }
    return c;
}

ScenarioResult run_scenario(const Scenario& s) {
    ScenarioResult r;
    r.scenario = s;
    r.initial_fidelity = fidelity(prepare_initial(s.graph, s.noise));
    r.runs = run_strategies(s);
    if (s.mode != Mode::Trace) {
        r.verdict = judge(s, r.initial_fidelity, r.runs);
    }
    return r;
}

WinnerCell evaluate_cell(const Scenario& base, double pw, double pz, int index) {
    WinnerCell c;
    try {
        const Scenario cell = base.at_cell(pw, pz);
        const double f0 = fidelity(prepare_initial(cell.graph, cell.noise));
        c = judge(cell, f0, run_strategies(cell));
    } catch (const Error& e) {
        c.status = "error";
        c.winner = "none";
        c.error = e.what();
    }
    c.index = index;
    c.pw = pw;
    c.pz = pz;
    return c;
}

SweepResult run_sweep(const Scenario& s) {
    if (!s.sweep) throw InvalidArgument("scenario has no sweep axes");
    if (s.mode == Mode::Trace) throw InvalidArgument("sweeps need fixed_fidelity or fixed_resources mode");
    const auto& axes = *s.sweep;
    const int npz = static_cast<int>(axes.pz.size());
    const int total = static_cast<int>(axes.pw.size()) * npz;
    SweepResult r;
    r.scenario = s;
    r.cells.resize(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i)
        r.cells[static_cast<std::size_t>(i)] =
            evaluate_cell(s, axes.pw[static_cast<std::size_t>(i / npz)], axes.pz[static_cast<std::size_t>(i % npz)], i);
    return r;
}

std::string file_stem(const StrategyKind& k) {
    std::string id = k.id();
    for (char& c : id)
        if (c == ':') c = '_';
    return id;
}

std::string trace_csv(const StrategyTrace& t) {
    std::string out = "round,action,fidelity,success_prob,resources\n";
    for (const auto& row : t.rows)
        out += fmt::format("{},{},{},{},{}\n", row.round, row.action_label(), format_number(row.fidelity),
                           format_number(row.success_prob), format_number(row.resources));
    return out;
}

std::string summary_json(const ScenarioResult& r) {
    const Scenario& s = r.scenario;
    ordered_json j;
    j["name"] = s.name;
    j["graph"] = s.graph.describe();
    j["noise"] = s.noise.describe();
    j["mode"] = to_string(s.mode);
    if (s.mode != Mode::Trace) j["target"] = s.target;
    j["cap"] = s.cap;
    j["prepurify"] = to_string(s.prepurify);
    j["initial_fidelity"] = emitted(r.initial_fidelity);
    ordered_json list = ordered_json::array();
    for (const auto& run : r.runs) {
        ordered_json e;
        e["id"] = run.kind.id();
        if (!run.trace) {
            e["status"] = "error";
            e["error"] = run.error;
        } else {
            const StrategyTrace& t = *run.trace;
            e["status"] = "ok";
            e["rounds"] = static_cast<int>(t.rows.size()) - 1;
            e["final_fidelity"] = emitted(t.final_fidelity());
            e["max_fidelity"] = emitted(t.max_fidelity());
            e["final_resources"] = emitted(t.final_resources());
            e["end"] = to_string(t.end);
            e["saturated"] = t.saturated();
            e["unsuccessful"] = t.end == TraceEnd::ResourceCap;
            e["trace"] = "trace_" + file_stem(run.kind) + ".csv";
        }
        list.push_back(std::move(e));
    }
    j["strategies"] = std::move(list);
    if (r.verdict) j["verdict"] = cell_json(*r.verdict, s.mode);
    return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& r) {
    const Scenario& s = r.scenario;
    const bool tr = s.mode == Mode::FixedResources;
    std::string out = tr ? "index,p_w,p_z,f0,winner,value,gain,status" : "index,p_w,p_z,f0,winner,value,status";
    for (const auto& k : s.strategies) out += fmt::format(",{0},{0}_status", k.id());
    out += '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& c : r.cells) {
        out += fmt::format("{},{},{},{},{},{}", c.index, format_number(c.pw), format_number(c.pz),
                           format_number(c.f0), c.winner, opt(c.value));
        if (tr) out += "," + opt(c.gain);
        out += "," + c.status;
        for (std::size_t i = 0; i < s.strategies.size(); ++i) {
            if (i < c.values.size()) out += fmt::format(",{},{}", opt(c.values[i].value), c.values[i].status);
            else out += ",,error";
        }
        out += '\n';
    }
    return out;
}

std::string sweep_json(const SweepResult& r) {
    const Scenario& s = r.scenario;
    ordered_json j;
    j["name"] = s.name;
    j["graph"] = s.graph.describe();
    j["mode"] = to_string(s.mode);
    j["target"] = s.target;
    j["gate"] = s.noise.gate;
    j["z_qubits"] = s.sweep->z_qubits;
    ordered_json ids = ordered_json::array();
    for (const auto& k : s.strategies) ids.push_back(k.id());
    j["strategies"] = ids;
    ordered_json pw = ordered_json::array(), pz = ordered_json::array();
    for (double v : s.sweep->pw) pw.push_back(emitted(v));
    for (double v : s.sweep->pz) pz.push_back(emitted(v));
    j["p_w"] = pw;
    j["p_z"] = pz;
    ordered_json cells = ordered_json::array();
    for (const auto& c : r.cells) cells.push_back(cell_json(c, s.mode));
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_scenario(const ScenarioResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& run : r.runs) {
        if (!run.trace) continue;
        auto p = dir / ("trace_" + file_stem(run.kind) + ".csv");
        write_file(p, trace_csv(*run.trace));
        written.push_back(p);
    }
    auto p = dir / "summary.json";
    write_file(p, summary_json(r));
    written.push_back(p);
    return written;
}

std::vector<std::filesystem::path> write_sweep(const SweepResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto csv = dir / "sweep.csv";
    auto json = dir / "sweep.json";
    write_file(csv, sweep_csv(r));
    write_file(json, sweep_json(r));
    return {csv, json};
}

}  // namespace lep
