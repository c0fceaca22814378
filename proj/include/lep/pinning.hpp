#pragma once

// Frozen reference values. `lepsim pin` recomputes them (independently where
// an oracle exists) and writes a JSON table; tests and the acceptance binary
// compare the engine against that table.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lep {

std::uint64_t fnv1a64(std::string_view text);

struct PinEntry {
    std::string description;  // canonical scenario string; the key is its hash
    std::string source;       // how the values were obtained
    std::vector<double> values;

    std::string key() const;
};

class PinTable {
public:
    const std::vector<PinEntry>& entries() const { return entries_; }
    void add(PinEntry e);
    const PinEntry* find(std::string_view description) const;
    /// Throws when missing.
    const std::vector<double>& values(std::string_view description) const;

    std::string to_json() const;
    static PinTable from_json(std::string_view text);
    static PinTable load(const std::filesystem::path& path);

private:
    std::vector<PinEntry> entries_;
};

/// Canonical descriptions of the pinned quantities.
namespace pins {
inline constexpr std::string_view kGridInitialFidelity =
    "initial fidelity | grid 3 4 | white=0.98 z.1=0.9 z.4=0.85 z.9=0.95 z.12=0.98";
inline constexpr std::string_view kEdgeRecurrence =
    "recurrence step P1 | linear 2 | z.1=0.9 gate=0.99 | lambdas, success";
inline constexpr std::string_view kLinear4Localized =
    "localized step T2 | linear 4 | white=0.93 white.3=0.88 z.1=0.8 z.2=0.9 z.4=0.75 gate=0.99 | lambdas, success";
inline constexpr std::string_view kStarPrepurify =
    "prepurify alpha=2 alternating | ghz 2 | z.1=0.7 gate=1 | lambdas, q1, q2";
inline constexpr std::string_view kFig3S1Fidelity = "trace fidelity | linear 8 | z.1=0.7 | s-1 | 4 rounds";
inline constexpr std::string_view kFig3S1Resources = "trace resources | linear 8 | z.1=0.7 | s-1 | 4 rounds";
inline constexpr std::string_view kFig3TcpFidelity = "trace fidelity | linear 8 | z.1=0.7 | tcp | 6 rounds";
inline constexpr std::string_view kFig3TcpResources = "trace resources | linear 8 | z.1=0.7 | tcp | 6 rounds";
inline constexpr std::string_view kFig4S1Fidelity =
    "trace fidelity | linear 8 | white=0.95 z.1=0.81 z.3=0.9 z.6=0.85 gate=0.998 | s-1 | 26 rounds, no halt";
inline constexpr std::string_view kFig4S1Resources =
    "trace resources | linear 8 | white=0.95 z.1=0.81 z.3=0.9 z.6=0.85 gate=0.998 | s-1 | 26 rounds, no halt";
inline constexpr std::string_view kFig4TcpFidelity =
    "trace fidelity | linear 8 | white=0.95 z.1=0.81 z.3=0.9 z.6=0.85 gate=0.998 | tcp | 6 rounds";
inline constexpr std::string_view kFig4FirstTarget =
    "virtual best target | linear 8 | white=0.95 z.1=0.81 z.3=0.9 z.6=0.85 gate=0.998 | alpha=1 | target, fidelity";
inline constexpr std::string_view kCombinedPair =
    "c-0 first round | linear 4 | z.1=0.8 z.3=0.8 gate=0.999 | first target, second target, fidelity";
inline constexpr std::string_view kReplayLinear4 =
    "oracle replay | linear 4 | white=0.97 z.1=0.7 z.3=0.85 gate=0.998 | s-1 | 3 rounds | fidelity";
}  // namespace pins

struct PinOptions {
    /// Abort when an oracle cross-check disagrees with the engine beyond this.
    double tolerance = 1e-10;
};

/// Recomputes every pinned quantity. Values with a dense or closed-form
/// oracle are taken from the oracle; engine traces are only pinned after
/// an oracle replay of the same strategy at reduced size agrees.
PinTable compute_pins(const PinOptions& opt = {});

}  // namespace lep
