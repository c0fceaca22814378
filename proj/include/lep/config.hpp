#pragma once

// Scenario files: one `key = value` per line, `#` starts a comment.
// See README.md for the key table.

#include "lep/errors.hpp"
#include "lep/graph.hpp"
#include "lep/protocols.hpp"
#include "lep/state.hpp"
#include "lep/strategies.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lep {

class ConfigError : public Error {
public:
    ConfigError(const std::string& source, int line, const std::string& message);

    int line() const { return line_; }

private:
    int line_;
};

enum class Mode { Trace, FixedFidelity, FixedResources };

const char* to_string(Mode m);

struct SweepAxes {
    std::vector<double> pw;
    std::vector<double> pz;
    std::vector<Vertex> z_qubits;
};

struct Scenario {
    std::string name = "scenario";
    std::string graph_spec;
    Graph graph;
    NoiseSpec noise;
    std::vector<StrategyKind> strategies;
    Mode mode = Mode::Trace;
    double target = 0.0;  // F_T or TR, depending on mode
    double cap = kDefaultResourceCap;
    int max_rounds = 60;
    SubProtocol tcp_first = SubProtocol::P1;
    PrepurifySchedule prepurify = PrepurifySchedule::Adaptive;
    std::optional<SweepAxes> sweep;

    StrategyContext context() const { return {graph, noise, tcp_first, prepurify}; }

    /// Stop rule each strategy runs under for this mode.
    StopRule stop_rule() const;
    /// Same scenario with p_w set uniformly and p_z on the sweep qubits.
    Scenario at_cell(double pw, double pz) const;
};

Scenario parse_config(std::string_view text, const std::string& source = "<config>");
Scenario load_config(const std::filesystem::path& path);

/// "linear 8", "grid 3 4", "ghz 5", "explicit 4 1-2 2-3 3-4".
Graph parse_graph_spec(std::string_view spec);

}  // namespace lep
