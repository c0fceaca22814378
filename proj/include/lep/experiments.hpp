#pragma once

// Scenario runs and (p_w, p_z) sweeps with winner maps, plus their CSV and
// JSON renderings. Every number written to CSV uses 15 significant digits,
// and winners are chosen from those emitted values so the table alone
// re-derives the winner column.

#include "lep/config.hpp"
#include "lep/resources.hpp"
#include "lep/strategies.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lep {

/// "%.15g"
std::string format_number(double v);
/// Parses back what format_number wrote.
double emitted(double v);

struct StrategyRun {
    StrategyKind kind;
    std::optional<StrategyTrace> trace;  // empty when the strategy failed
    std::string error;
};

/// One strategy's figure of merit under a fixed-fidelity or fixed-resource mode.
struct StrategyValue {
    std::string id;
    std::string status;  // interpolation status, or "error"
    std::optional<double> value;  // R_TF or F_TR as emitted
};

struct WinnerCell {
    int index = 0;
    double pw = 0.0;
    double pz = 0.0;
    double f0 = 0.0;
    std::string winner;  // strategy id, "same", or "none"
    std::optional<double> value;
    std::optional<double> gain;  // percent fidelity gain over f0 (fixed-resources mode)
    std::string status;          // "ok", "same", "unreachable", "error"
    std::string error;
    std::vector<StrategyValue> values;
};

struct ScenarioResult {
    Scenario scenario;
    double initial_fidelity = 0.0;
    std::vector<StrategyRun> runs;
    std::optional<WinnerCell> verdict;  // non-trace modes only
};

struct SweepResult {
    Scenario scenario;
    std::vector<WinnerCell> cells;  // p_w outer, p_z inner
};

std::vector<StrategyRun> run_strategies(const Scenario& s);
ScenarioResult run_scenario(const Scenario& s);
SweepResult run_sweep(const Scenario& s);

/// Cell verdict from completed runs. Ties go to the earlier strategy.
WinnerCell judge(const Scenario& s, double f0, const std::vector<StrategyRun>& runs);
WinnerCell evaluate_cell(const Scenario& base, double pw, double pz, int index);

/// Winner implied by the per-strategy values alone.
std::string rederive_winner(Mode mode, double target, double f0, const std::vector<StrategyValue>& values);

std::string file_stem(const StrategyKind& k);  // "hybrid-1:3" -> "hybrid-1_3"
std::string trace_csv(const StrategyTrace& t);
std::string summary_json(const ScenarioResult& r);
std::string sweep_csv(const SweepResult& r);
std::string sweep_json(const SweepResult& r);

/// Writes trace_<id>.csv per strategy and summary.json; returns the paths.
std::vector<std::filesystem::path> write_scenario(const ScenarioResult& r, const std::filesystem::path& dir);
/// Writes sweep.csv and sweep.json; returns the paths.
std::vector<std::filesystem::path> write_sweep(const SweepResult& r, const std::filesystem::path& dir);

}  // namespace lep
