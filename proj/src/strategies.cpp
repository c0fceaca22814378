#include "lep/strategies.hpp"

#include "lep/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>

namespace lep {

namespace {

int parse_count(std::string_view text, std::string_view whole) {
    int value = -1;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 0)
        throw InvalidArgument("bad strategy id '" + std::string(whole) + "'");
    return value;
}

}  // namespace

StrategyKind StrategyKind::parse(std::string_view text) {
    StrategyKind k;
    if (text == "tcp") return k;
    if (text.starts_with("s-")) {
        k.family = StrategyFamily::Single;
        k.alpha = parse_count(text.substr(2), text);
        return k;
    }
    if (text.starts_with("c-")) {
        k.family = StrategyFamily::Combined;
        k.alpha = parse_count(text.substr(2), text);
        return k;
    }
    if (text.starts_with("hybrid-")) {
        k.family = StrategyFamily::Hybrid;
        std::string_view rest = text.substr(7);
        const auto colon = rest.find(':');
        k.alpha = parse_count(rest.substr(0, colon), text);
        if (colon != std::string_view::npos) {
            std::string_view rounds = rest.substr(colon + 1);
            if (rounds != "auto") k.lep_rounds = parse_count(rounds, text);
        }
        return k;
    }
    throw InvalidArgument("unknown strategy '" + std::string(text) + "'");
}

std::string StrategyKind::id() const {
    switch (family) {
        case StrategyFamily::Tcp: return "tcp";
        case StrategyFamily::Single: return "s-" + std::to_string(alpha);
        case StrategyFamily::Combined: return "c-" + std::to_string(alpha);
        case StrategyFamily::Hybrid:
            return "hybrid-" + std::to_string(alpha) + ":" +
                   (lep_rounds ? std::to_string(*lep_rounds) : std::string("auto"));
    }
    return "?";
}

std::string StepAction::label() const {
    return kind == Kind::Localized ? "T" + std::to_string(target) : std::string(to_string(sub));
}

std::string TraceRow::action_label() const {
    if (actions.empty()) return "init";
    std::string s;
    for (const auto& a : actions) {
        if (!s.empty()) s += '+';
        s += a.label();
    }
    return s;
}

const char* to_string(TraceEnd e) {
    switch (e) {
        case TraceEnd::MaxRounds: return "max_rounds";
        case TraceEnd::ReachedFidelity: return "reached_fidelity";
        case TraceEnd::ReachedResources: return "reached_resources";
        case TraceEnd::Saturated: return "saturated";
        case TraceEnd::ResourceCap: return "resource_cap";
    }
    return "?";
}

std::vector<TracePoint> StrategyTrace::points() const {
    std::vector<TracePoint> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) pts.push_back({r.fidelity, r.resources});
    return pts;
}

double StrategyTrace::max_fidelity() const {
    double best = 0.0;
    for (const auto& r : rows) best = std::max(best, r.fidelity);
    return best;
}

AuxiliaryBank::AuxiliaryBank(const Graph& g, const NoiseSpec& noise, int alpha, PrepurifySchedule schedule)
    : alpha_(alpha), gate_(noise.gate) {
    if (alpha < 0) throw InvalidArgument("pre-purification count must be nonnegative");
    noise.validate();
    for (Vertex t = 1; t <= g.size(); ++t) {
        if (g.neighbors(t).empty()) continue;
        const StarGraph star = auxiliary_star(g, t);
        const DiagonalState initial = prepare_initial(star.graph, noise.restricted_to(star));
        PrepurifiedAux pre = prepurify_aux(initial, alpha, noise.gate, schedule);
        entries_.push_back(Auxiliary{t, partition_for_target(g, t), std::move(pre.state),
                                     static_cast<double>(star.graph.edge_count()),
                                     pre.cost_multiplier, std::move(pre.success_probs), std::move(pre.rounds)});
    }
    if (entries_.empty()) throw InvalidArgument("graph has no vertex with a neighborhood");
}

const Auxiliary& AuxiliaryBank::for_target(Vertex t) const {
    for (const auto& e : entries_)
        if (e.target == t) return e;
    throw InvalidArgument("no auxiliary for target " + std::to_string(t));
}

std::vector<Candidate> evaluate_all_targets(const DiagonalState& main, const AuxiliaryBank& bank) {
    const auto& entries = bank.entries();
    std::vector<std::optional<Candidate>> slots(entries.size());
    std::vector<std::string> errors(entries.size());
    const auto n = static_cast<std::int64_t>(entries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto& aux = entries[k];
        try {
            slots[k] = Candidate{aux.target, lep_step(main, aux.state, aux.partition, bank.gate()), aux.cost()};
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    std::vector<Candidate> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

Candidate virtual_best_target(const DiagonalState& main, const AuxiliaryBank& bank) {
    std::vector<Candidate> all = evaluate_all_targets(main, bank);
    std::size_t best = 0;
    for (std::size_t i = 1; i < all.size(); ++i)
        if (fidelity(all[i].outcome.state) > fidelity(all[best].outcome.state)) best = i;
    return std::move(all[best]);
}

Candidate virtual_best_target(const DiagonalState& main, const NoiseSpec& noise, int alpha,
                              PrepurifySchedule schedule) {
    return virtual_best_target(main, AuxiliaryBank(main.graph(), noise, alpha, schedule));
}

namespace {

// Accumulates committed rounds and applies the stop rule.
class TraceBuilder {
public:
    TraceBuilder(const StrategyContext& ctx, const StopRule& stop, std::string id)
        : stop_(stop),
          state_(prepare_initial(ctx.graph, ctx.noise)),
          ledger_(static_cast<double>(ctx.graph.edge_count())) {
        trace_.strategy = std::move(id);
        trace_.graph = ctx.graph.describe();
        trace_.noise = ctx.noise.describe();
        trace_.initial_fidelity = fidelity(state_);
        trace_.rows.push_back({0, {}, trace_.initial_fidelity, 1.0, ledger_.current()});
    }

    const DiagonalState& state() const { return state_; }
    const ResourceLedger& ledger() const { return ledger_; }
    double current_fidelity() const { return fidelity(state_); }
    bool halt_on_stagnation() const { return stop_.halt_on_stagnation; }

    bool done() {
        const int rounds = static_cast<int>(trace_.rows.size()) - 1;
        if (stop_.target_fidelity && current_fidelity() >= *stop_.target_fidelity) {
            trace_.end = TraceEnd::ReachedFidelity;
            return true;
        }
        if (stop_.resource_limit && ledger_.current() >= *stop_.resource_limit) {
            trace_.end = TraceEnd::ReachedResources;
            return true;
        }
        if (rounds >= stop_.max_rounds) {
            trace_.end = TraceEnd::MaxRounds;
            return true;
        }
        return false;
    }

    /// Returns false (and records the cap) when the round would exceed the resource cap.
    bool commit(DiagonalState s, ResourceLedger l, std::vector<StepAction> actions, double prob) {
        if (l.current() > stop_.resource_cap) {
            trace_.end = TraceEnd::ResourceCap;
            return false;
        }
        state_ = std::move(s);
        ledger_ = std::move(l);
        trace_.rows.push_back({static_cast<int>(trace_.rows.size()), std::move(actions),
                               fidelity(state_), prob, ledger_.current()});
        return true;
    }

    void saturate() { trace_.end = TraceEnd::Saturated; }

    /// Fidelity `lag` committed rounds ago.
    double fidelity_back(std::size_t lag) const { return trace_.rows[trace_.rows.size() - 1 - lag].fidelity; }
    std::size_t committed() const { return trace_.rows.size() - 1; }

    StrategyTrace finish() { return std::move(trace_); }

private:
    StopRule stop_;
    DiagonalState state_;
    ResourceLedger ledger_;
    StrategyTrace trace_;
};

StepOutcome best_recurrence(const DiagonalState& s, double p_g, SubProtocol& chosen) {
    StepOutcome p1 = tcp_step(s, SubProtocol::P1, p_g);
    StepOutcome p2 = tcp_step(s, SubProtocol::P2, p_g);
    if (fidelity(p2.state) > fidelity(p1.state)) {
        chosen = SubProtocol::P2;
        return p2;
    }
    chosen = SubProtocol::P1;
    return p1;
}

}  // namespace

StrategyTrace run_tcp(const StrategyContext& ctx, const StopRule& stop) {
    two_coloring(ctx.graph);  // fail fast on non-bipartite graphs
    TraceBuilder tb(ctx, stop, "tcp");
    SubProtocol sub = ctx.tcp_first;
    while (!tb.done()) {
        StepOutcome out = tcp_step(tb.state(), sub, ctx.noise.gate);
        ResourceLedger ledger = tcp_round_update(tb.ledger(), out.success_prob);
        if (!tb.commit(std::move(out.state), std::move(ledger), {StepAction::recurrence(sub)},
                       out.success_prob))
            break;
        // A P1/P2 pair redistributes noise between color classes, so
        // progress is judged over a full cycle.
        if (tb.halt_on_stagnation() && tb.committed() >= 2 &&
            tb.fidelity_back(0) <= tb.fidelity_back(2) + kStagnationThreshold) {
            tb.saturate();
            break;
        }
        sub = other(sub);
    }
    return tb.finish();
}

StrategyTrace run_s_alpha(const StrategyContext& ctx, int alpha, const StopRule& stop) {
    const AuxiliaryBank bank(ctx.graph, ctx.noise, alpha, ctx.prepurify);
    TraceBuilder tb(ctx, stop, StrategyKind{StrategyFamily::Single, alpha, {}}.id());
    while (!tb.done()) {
        Candidate best = virtual_best_target(tb.state(), bank);
        if (tb.halt_on_stagnation() &&
            fidelity(best.outcome.state) <= tb.current_fidelity() + kStagnationThreshold) {
            tb.saturate();
            break;
        }
        const Auxiliary& aux = bank.for_target(best.target);
        ResourceLedger ledger =
            lep_round_update(tb.ledger(), aux.edges, aux.cost_multiplier, best.outcome.success_prob);
        if (!tb.commit(std::move(best.outcome.state), std::move(ledger),
                       {StepAction::localized(best.target)}, best.outcome.success_prob))
            break;
    }
    return tb.finish();
}

StrategyTrace run_c_alpha(const StrategyContext& ctx, int alpha, const StopRule& stop) {
    const AuxiliaryBank bank(ctx.graph, ctx.noise, alpha, ctx.prepurify);
    const auto& entries = bank.entries();
    TraceBuilder tb(ctx, stop, StrategyKind{StrategyFamily::Combined, alpha, {}}.id());
    while (!tb.done()) {
        std::vector<Candidate> singles = evaluate_all_targets(tb.state(), bank);
        std::size_t best1 = 0;
        for (std::size_t i = 1; i < singles.size(); ++i)
            if (fidelity(singles[i].outcome.state) > fidelity(singles[best1].outcome.state)) best1 = i;

        // Two-step look-ahead over all ordered pairs (first, second).
        const std::size_t k = entries.size();
        std::vector<double> pair_fidelity(k * k);
        const auto nk = static_cast<std::int64_t>(k * k);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t idx = 0; idx < nk; ++idx) {
            const auto i = static_cast<std::size_t>(idx) / k;
            const auto j = static_cast<std::size_t>(idx) % k;
            const StepOutcome second = lep_step(singles[i].outcome.state, entries[j].state,
                                                entries[j].partition, bank.gate());
            pair_fidelity[static_cast<std::size_t>(idx)] = fidelity(second.state);
        }
        std::size_t best2 = 0;
        for (std::size_t idx = 1; idx < k * k; ++idx)
            if (pair_fidelity[idx] > pair_fidelity[best2]) best2 = idx;

        const double f1 = fidelity(singles[best1].outcome.state);
        const double f2 = pair_fidelity[best2];
        const bool two_step = f2 > f1 + kStagnationThreshold;
        if (tb.halt_on_stagnation() &&
            std::max(f1, f2) <= tb.current_fidelity() + kStagnationThreshold) {
            tb.saturate();
            break;
        }

        if (!two_step) {
            Candidate& c = singles[best1];
            const Auxiliary& aux = entries[best1];
            ResourceLedger ledger =
                lep_round_update(tb.ledger(), aux.edges, aux.cost_multiplier, c.outcome.success_prob);
            if (!tb.commit(std::move(c.outcome.state), std::move(ledger),
                           {StepAction::localized(c.target)}, c.outcome.success_prob))
                break;
            continue;
        }
        const std::size_t i = best2 / k;
        const std::size_t j = best2 % k;
        const Candidate& first = singles[i];
        StepOutcome second =
            lep_step(first.outcome.state, entries[j].state, entries[j].partition, bank.gate());
        ResourceLedger ledger = lep_round_update(tb.ledger(), entries[i].edges,
                                                 entries[i].cost_multiplier, first.outcome.success_prob);
        ledger = lep_round_update(std::move(ledger), entries[j].edges, entries[j].cost_multiplier,
                                  second.success_prob);
        const double prob = first.outcome.success_prob * second.success_prob;
        if (!tb.commit(std::move(second.state), std::move(ledger),
                       {StepAction::localized(entries[i].target), StepAction::localized(entries[j].target)},
                       prob))
            break;
    }
    return tb.finish();
}

StrategyTrace run_hybrid(const StrategyContext& ctx, int alpha, std::optional<int> lep_rounds,
                         const StopRule& stop) {
    two_coloring(ctx.graph);
    const AuxiliaryBank bank(ctx.graph, ctx.noise, alpha, ctx.prepurify);
    const double p_g = ctx.noise.gate;
    const int auto_limit = 4 * ctx.graph.size();
    TraceBuilder tb(ctx, stop, StrategyKind{StrategyFamily::Hybrid, alpha, lep_rounds}.id());

    while (!tb.done()) {
        DiagonalState state = tb.state();
        ResourceLedger ledger = tb.ledger();
        std::vector<StepAction> actions;
        double prob = 1.0;

        const int limit = lep_rounds ? *lep_rounds : auto_limit;
        for (int r = 0; r < limit; ++r) {
            Candidate best = virtual_best_target(state, bank);
            const double f = fidelity(state);
            const double f_lep = fidelity(best.outcome.state);
            if (f_lep <= f + kStagnationThreshold) break;
            const Auxiliary& aux = bank.for_target(best.target);
            ResourceLedger after_lep =
                lep_round_update(ledger, aux.edges, aux.cost_multiplier, best.outcome.success_prob);
            if (!lep_rounds) {
                // Keep pumping while a localized step buys more fidelity per
                // channel use than the recurrence step would.
                SubProtocol sub;
                StepOutcome tcp = best_recurrence(state, p_g, sub);
                const double r_tcp = 2.0 * ledger.current() / tcp.success_prob;
                const double lep_rate = (f_lep - f) / (after_lep.current() - ledger.current());
                const double tcp_rate = (fidelity(tcp.state) - f) / (r_tcp - ledger.current());
                if (!(lep_rate > tcp_rate)) break;
            }
            prob *= best.outcome.success_prob;
            ledger = std::move(after_lep);
            state = std::move(best.outcome.state);
            actions.push_back(StepAction::localized(best.target));
        }

        SubProtocol sub;
        StepOutcome tcp = best_recurrence(state, p_g, sub);
        ledger = tcp_round_update(std::move(ledger), tcp.success_prob);
        prob *= tcp.success_prob;
        actions.push_back(StepAction::recurrence(sub));

        const double before = tb.current_fidelity();
        if (!tb.commit(std::move(tcp.state), std::move(ledger), std::move(actions), prob)) break;
        if (tb.halt_on_stagnation() && tb.current_fidelity() <= before + kStagnationThreshold) {
            tb.saturate();
            break;
        }
    }
    return tb.finish();
}

StrategyTrace run_strategy(const StrategyContext& ctx, const StrategyKind& kind, const StopRule& stop) {
    switch (kind.family) {
        case StrategyFamily::Tcp: return run_tcp(ctx, stop);
        case StrategyFamily::Single: return run_s_alpha(ctx, kind.alpha, stop);
        case StrategyFamily::Combined: return run_c_alpha(ctx, kind.alpha, stop);
        case StrategyFamily::Hybrid: return run_hybrid(ctx, kind.alpha, kind.lep_rounds, stop);
    }
    throw InvalidArgument("unknown strategy family");
}

std::vector<double> replay_fidelities(const StrategyContext& ctx, const StrategyTrace& trace, int alpha) {
    std::optional<AuxiliaryBank> bank;
    DiagonalState state = prepare_initial(ctx.graph, ctx.noise);
    std::vector<double> out{fidelity(state)};
    for (std::size_t r = 1; r < trace.rows.size(); ++r) {
        for (const auto& a : trace.rows[r].actions) {
            if (a.kind == StepAction::Kind::Recurrence) {
                state = tcp_step(state, a.sub, ctx.noise.gate).state;
            } else {
                if (!bank) bank.emplace(ctx.graph, ctx.noise, alpha, ctx.prepurify);
                const Auxiliary& aux = bank->for_target(a.target);
                state = lep_step(state, aux.state, aux.partition, ctx.noise.gate).state;
            }
        }
        out.push_back(fidelity(state));
    }
    return out;
}

}  // namespace lep
