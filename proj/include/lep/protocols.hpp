#pragma once

// Single purification steps on diagonal states: the two-colorable
// recurrence step (sub-protocols P1/P2) and the localized step that pumps
// a main state with a small star-shaped auxiliary.
//
// Gate noise: every noisy CNOT depolarizes its control and target before
// the ideal gate. The CNOTs of one multilateral layer act on disjoint qubit
// pairs, so each noise layer commutes past the other gates and the whole
// step equals one front layer of single-qubit white noise followed by the
// ideal MCNOT permutation. The kernels exploit this.

#include "lep/graph.hpp"
#include "lep/state.hpp"

#include <vector>

namespace lep {

enum class SubProtocol { P1, P2 };

inline SubProtocol other(SubProtocol s) {
    return s == SubProtocol::P1 ? SubProtocol::P2 : SubProtocol::P1;
}
const char* to_string(SubProtocol s);

/// Invertible GF(2)-linear map on concatenated (mu | nu) bit strings,
/// stored as the images of the unit vectors.
class Gf2Map {
public:
    explicit Gf2Map(int width);

    int width() const { return static_cast<int>(columns_.size()); }
    BitString apply(BitString x) const;
    void set_column(int bit, BitString image) { columns_[static_cast<std::size_t>(bit)] = image; }
    BitString column(int bit) const { return columns_[static_cast<std::size_t>(bit)]; }

    /// Full rank over GF(2).
    bool invertible() const;

    Gf2Map compose(const Gf2Map& after) const;  // after(this(x))

    static Gf2Map identity(int width);
    friend bool operator==(const Gf2Map&, const Gf2Map&) = default;

private:
    std::vector<BitString> columns_;
};

/// P1: mu_B ^= nu_B, nu_A ^= mu_A. P2: mu_A ^= nu_A, nu_B ^= mu_B.
Gf2Map mcnot_map_tcp(const Graph& g, const TwoColoring& coloring, SubProtocol sub);

/// Main: mu_N(T) ^= nu_N(T). Aux: nu_T ^= mu_T. Everything else fixed.
/// `aux` must be the auxiliary star of the partition.
Gf2Map mcnot_map_lep(const Graph& main, const TargetPartition& part, const StarGraph& aux);

struct StepOutcome {
    DiagonalState state;
    double success_prob;
};

/// White noise p_g on every qubit selected by `qubits`.
DiagonalState apply_gate_noise(const DiagonalState& s, BitString qubits, double p_g);

/// One recurrence round on two identical copies of `s`.
StepOutcome tcp_step(const DiagonalState& s, SubProtocol sub, double p_g);

/// One localized round. `aux` lives on auxiliary_star(main graph, part.target).
StepOutcome lep_step(const DiagonalState& main, const DiagonalState& aux,
                     const TargetPartition& part, double p_g);

/// How pre-purification picks each round's sub-protocol. Adaptive takes
/// whichever of P1/P2 leaves the auxiliary with higher fidelity (P1 on
/// ties); Alternating runs P1, P2, P1, ...
enum class PrepurifySchedule { Adaptive, Alternating };

const char* to_string(PrepurifySchedule s);

struct PrepurifiedAux {
    DiagonalState state;
    double cost_multiplier;             // prod_k 2 / q_k
    std::vector<double> success_probs;  // q_1 .. q_alpha
    std::vector<SubProtocol> rounds;
};

PrepurifiedAux prepurify_aux(const DiagonalState& aux_initial, int alpha, double p_g,
                             PrepurifySchedule schedule = PrepurifySchedule::Adaptive);

}  // namespace lep
