#include "lep/resources.hpp"

#include "lep/errors.hpp"

namespace lep {

namespace {

void require_success_prob(double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw InvalidArgument("success probability must lie in (0,1], got " + std::to_string(p));
}

}  // namespace

ResourceLedger::ResourceLedger(double base) : base_(base), current_(base) {
    if (!(base > 0.0)) throw InvalidArgument("resource base must be positive");
}

ResourceLedger tcp_round_update(ResourceLedger ledger, double success_prob) {
    require_success_prob(success_prob);
    ledger.current_ = 2.0 * ledger.current_ / success_prob;
    ledger.history_.push_back({LedgerRule::Recurrence, 0.0, success_prob, ledger.current_});
    return ledger;
}

ResourceLedger lep_round_update(ResourceLedger ledger, double aux_edges,
                                double prepurify_multiplier, double success_prob) {
    require_success_prob(success_prob);
    if (!(aux_edges >= 1.0)) throw InvalidArgument("auxiliary needs at least one edge");
    if (!(prepurify_multiplier >= 1.0)) throw InvalidArgument("pre-purification multiplier below 1");
    const double added = aux_edges * prepurify_multiplier;
    ledger.current_ = (ledger.current_ + added) / success_prob;
    ledger.history_.push_back({LedgerRule::Localized, added, success_prob, ledger.current_});
    return ledger;
}

const char* to_string(InterpolationStatus s) {
    switch (s) {
        case InterpolationStatus::Interpolated: return "interpolated";
        case InterpolationStatus::Same: return "same";
        case InterpolationStatus::Unreachable: return "unreachable";
        case InterpolationStatus::Capped: return "capped";
    }
    return "?";
}

InterpolationResult interpolate_to_fidelity(std::span<const TracePoint> trace,
                                            double target_fidelity) {
    if (trace.empty()) throw InvalidArgument("empty trace");
    InterpolationResult r;
    if (trace.front().fidelity >= target_fidelity) {
        r.status = InterpolationStatus::Same;
        r.value = trace.front().resources;
        r.round_n = r.round_next = 0;
        return r;
    }
    for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
        const auto& a = trace[n];
        const auto& b = trace[n + 1];
        if (!(a.fidelity <= target_fidelity && target_fidelity <= b.fidelity)) continue;
        r.status = InterpolationStatus::Interpolated;
        r.round_n = static_cast<int>(n);
        r.round_next = static_cast<int>(n + 1);
        r.p = b.fidelity == a.fidelity ? 1.0 : (b.fidelity - target_fidelity) / (b.fidelity - a.fidelity);
        r.value = r.p * a.resources + (1.0 - r.p) * b.resources;
        return r;
    }
    return r;
}

InterpolationResult interpolate_to_resources(std::span<const TracePoint> trace,
                                             double total_resources) {
    if (trace.empty()) throw InvalidArgument("empty trace");
    if (total_resources < trace.front().resources)
        throw InvalidArgument("resource budget is below the cost of preparing the main state");
    InterpolationResult r;
    for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
        const auto& a = trace[n];
        const auto& b = trace[n + 1];
        if (!(a.resources <= total_resources && total_resources <= b.resources)) continue;
        r.status = InterpolationStatus::Interpolated;
        r.round_n = static_cast<int>(n);
        r.round_next = static_cast<int>(n + 1);
        r.p = (b.resources - total_resources) / (b.resources - a.resources);
        r.value = r.p * a.fidelity + (1.0 - r.p) * b.fidelity;
        return r;
    }
    r.status = InterpolationStatus::Capped;
    r.round_n = r.round_next = static_cast<int>(trace.size() - 1);
    r.value = trace.back().fidelity;
    return r;
}

double relative_gain(double from, double to) {
    if (from == 0.0) throw InvalidArgument("relative gain from zero is undefined");
    return (to - from) / from * 100.0;
}

}  // namespace lep
