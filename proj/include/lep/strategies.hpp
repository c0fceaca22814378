#pragma once

// Round-generating purification strategies: plain recurrence (TCP), the
// greedy localized strategy S-alpha, the two-step look-ahead C-alpha and the
// LEP-then-TCP hybrid. Each produces a StrategyTrace of fidelity and
// cumulative expected channel uses per committed round.

#include "lep/graph.hpp"
#include "lep/protocols.hpp"
#include "lep/resources.hpp"
#include "lep/state.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lep {

/// Minimum fidelity gain that counts as an improvement.
inline constexpr double kStagnationThreshold = 1e-12;

enum class StrategyFamily { Tcp, Single, Combined, Hybrid };

struct StrategyKind {
    StrategyFamily family = StrategyFamily::Tcp;
    int alpha = 0;
    std::optional<int> lep_rounds;  // hybrid only; empty means "auto"

    /// Accepts "tcp", "s-<a>", "c-<a>", "hybrid-<a>[:<rounds>|:auto]".
    static StrategyKind parse(std::string_view text);
    std::string id() const;
    bool is_localized() const { return family != StrategyFamily::Tcp; }

    friend bool operator==(const StrategyKind&, const StrategyKind&) = default;
};

struct StopRule {
    int max_rounds = 60;
    std::optional<double> target_fidelity;  // stop once reached
    std::optional<double> resource_limit;   // stop once cumulative resources reach it
    double resource_cap = kDefaultResourceCap;
    bool halt_on_stagnation = true;
};

struct StrategyContext {
    Graph graph;
    NoiseSpec noise;
    SubProtocol tcp_first = SubProtocol::P1;
    PrepurifySchedule prepurify = PrepurifySchedule::Adaptive;
};

struct StepAction {
    enum class Kind { Localized, Recurrence };
    Kind kind = Kind::Localized;
    Vertex target = 0;
    SubProtocol sub = SubProtocol::P1;

    static StepAction localized(Vertex t) { return {Kind::Localized, t, SubProtocol::P1}; }
    static StepAction recurrence(SubProtocol s) { return {Kind::Recurrence, 0, s}; }
    std::string label() const;

    friend bool operator==(const StepAction&, const StepAction&) = default;
};

struct TraceRow {
    int round = 0;
    std::vector<StepAction> actions;
    double fidelity = 0.0;
    double success_prob = 1.0;
    double resources = 0.0;

    std::string action_label() const;  // "init", "T3", "T1+T2+P1", ...
};

enum class TraceEnd { MaxRounds, ReachedFidelity, ReachedResources, Saturated, ResourceCap };

const char* to_string(TraceEnd e);

struct StrategyTrace {
    std::string strategy;
    std::string graph;
    std::string noise;
    double initial_fidelity = 0.0;
    std::vector<TraceRow> rows;  // rows[0] is the initial state
    TraceEnd end = TraceEnd::MaxRounds;

    std::vector<TracePoint> points() const;
    double max_fidelity() const;
    double final_fidelity() const { return rows.back().fidelity; }
    double final_resources() const { return rows.back().resources; }
    bool saturated() const { return end == TraceEnd::Saturated; }
};

/// Prepared (and pre-purified) auxiliary for one target.
struct Auxiliary {
    Vertex target = 0;
    TargetPartition partition;
    DiagonalState state;
    double edges = 0.0;            // M: edges of the star
    double cost_multiplier = 1.0;  // prod 2/q_k from pre-purification
    std::vector<double> prepurify_probs;
    std::vector<SubProtocol> prepurify_rounds;

    double cost() const { return edges * cost_multiplier; }
};

/// Auxiliaries for every vertex with a nonempty neighborhood. They carry
/// the scenario noise restricted to their physical qubits and depend only
/// on (graph, noise, alpha), so one bank serves a whole strategy run.
class AuxiliaryBank {
public:
    AuxiliaryBank(const Graph& g, const NoiseSpec& noise, int alpha,
                  PrepurifySchedule schedule = PrepurifySchedule::Adaptive);

    const std::vector<Auxiliary>& entries() const { return entries_; }
    const Auxiliary& for_target(Vertex t) const;
    int alpha() const { return alpha_; }
    double gate() const { return gate_; }

private:
    int alpha_;
    double gate_;
    std::vector<Auxiliary> entries_;
};

struct Candidate {
    Vertex target = 0;
    StepOutcome outcome;
    double aux_cost = 0.0;
};

/// Evaluates a localized step for every target without touching `main`;
/// returns the best by fidelity, ties to the lowest label.
Candidate virtual_best_target(const DiagonalState& main, const AuxiliaryBank& bank);
Candidate virtual_best_target(const DiagonalState& main, const NoiseSpec& noise, int alpha,
                              PrepurifySchedule schedule = PrepurifySchedule::Adaptive);

/// All single-step candidates in ascending target order.
std::vector<Candidate> evaluate_all_targets(const DiagonalState& main, const AuxiliaryBank& bank);

StrategyTrace run_tcp(const StrategyContext& ctx, const StopRule& stop);
StrategyTrace run_s_alpha(const StrategyContext& ctx, int alpha, const StopRule& stop);
StrategyTrace run_c_alpha(const StrategyContext& ctx, int alpha, const StopRule& stop);
StrategyTrace run_hybrid(const StrategyContext& ctx, int alpha, std::optional<int> lep_rounds,
                         const StopRule& stop);
StrategyTrace run_strategy(const StrategyContext& ctx, const StrategyKind& kind, const StopRule& stop);

/// Re-applies a trace's recorded actions and returns the fidelity column.
std::vector<double> replay_fidelities(const StrategyContext& ctx, const StrategyTrace& trace,
                                      int alpha);

}  // namespace lep
