#pragma once

// Expected channel-use accounting and the two interpolation frameworks
// (fixed target fidelity, fixed total resources) built on probabilistic
// mixing of consecutive rounds.

#include <span>
#include <string>
#include <vector>

namespace lep {

/// Default resource cap; traces exceeding it are declared unsuccessful.
inline constexpr double kDefaultResourceCap = 1e9;

enum class LedgerRule { Recurrence, Localized };

struct LedgerEntry {
    LedgerRule rule;
    double added_cost;    // 0 for recurrence rounds, M * multiplier otherwise
    double success_prob;
    double resources_after;
};

class ResourceLedger {
public:
    /// `base` = channel uses for the main state (its edge count).
    explicit ResourceLedger(double base);

    double base() const { return base_; }
    double current() const { return current_; }
    const std::vector<LedgerEntry>& history() const { return history_; }

private:
    friend ResourceLedger tcp_round_update(ResourceLedger, double);
    friend ResourceLedger lep_round_update(ResourceLedger, double, double, double);

    double base_;
    double current_;
    std::vector<LedgerEntry> history_;
};

/// current <- 2 * current / success_prob
ResourceLedger tcp_round_update(ResourceLedger ledger, double success_prob);

/// current <- (current + aux_edges * prepurify_multiplier) / success_prob
ResourceLedger lep_round_update(ResourceLedger ledger, double aux_edges,
                                double prepurify_multiplier, double success_prob);

struct TracePoint {
    double fidelity;
    double resources;
};

enum class InterpolationStatus { Interpolated, Same, Unreachable, Capped };

const char* to_string(InterpolationStatus s);

struct InterpolationResult {
    InterpolationStatus status = InterpolationStatus::Unreachable;
    double p = 1.0;      // weight of round n in the mixture
    double value = 0.0;  // R_TF or F_TR
    int round_n = -1;
    int round_next = -1;
};

/// Resources needed to reach `target_fidelity` by mixing rounds n and n+1.
/// Uses the first bracketing pair in round order.
InterpolationResult interpolate_to_fidelity(std::span<const TracePoint> trace,
                                            double target_fidelity);

/// Fidelity reachable with `total_resources` by mixing rounds n and n+1.
/// Throws when the budget is below the cost of the main state itself.
InterpolationResult interpolate_to_resources(std::span<const TracePoint> trace,
                                             double total_resources);

/// Percentage change from `from` to `to`.
double relative_gain(double from, double to);

}  // namespace lep
