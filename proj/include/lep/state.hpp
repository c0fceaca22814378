#pragma once

// Graph-basis diagonal states. A mixed state that is diagonal in the
// graph-state basis is a probability vector over syndrome bit strings;
// every Pauli channel acts on it by XOR-relabelling indices.

#include "lep/graph.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace lep {

/// Default cap on the joint index width (main + auxiliary qubits).
inline constexpr int kDefaultJointBitCap = 26;

/// Tolerance used when constructing states from external vectors.
inline constexpr double kNormalizationTolerance = 1e-9;

class DiagonalState {
public:
    /// Validates length 2^N, nonnegativity and unit sum.
    DiagonalState(Graph graph, std::vector<double> lambdas);

    const Graph& graph() const { return graph_; }
    int qubits() const { return graph_.size(); }
    std::size_t dimension() const { return lambdas_.size(); }
    std::span<const double> lambdas() const { return lambdas_; }
    double operator[](BitString mu) const { return lambdas_[mu]; }
    double total() const;

    /// One line per nonzero coefficient: "<mu_1..mu_N> <coefficient>".
    std::string dump() const;

    friend bool operator==(const DiagonalState&, const DiagonalState&) = default;

private:
    Graph graph_;
    std::vector<double> lambdas_;
};

/// Product distribution of a main state and an auxiliary state. Index
/// layout is (mu | nu): the main bits occupy the low N_main positions.
class JointState {
public:
    JointState(Graph main, Graph aux, std::vector<double> lambdas);

    const Graph& graph_main() const { return main_; }
    const Graph& graph_aux() const { return aux_; }
    int main_bits() const { return main_.size(); }
    int aux_bits() const { return aux_.size(); }
    std::span<const double> lambdas() const { return lambdas_; }
    std::vector<double>& mutable_lambdas() { return lambdas_; }
    double total() const;

private:
    Graph main_;
    Graph aux_;
    std::vector<double> lambdas_;
};

/// Local noise parameters. Absent entries mean "no noise" (parameter 1).
struct NoiseSpec {
    double white = 1.0;                      // uniform p_w
    std::map<Vertex, double> white_override; // per-qubit p_w^(i)
    std::map<Vertex, double> dephasing;      // p_z^(i)
    double gate = 1.0;                       // p_g

    double white_for(Vertex v) const;

    /// Validates every parameter lies in [0,1].
    void validate() const;

    /// Noise restricted to the physical qubits of `star`, relabelled to its local vertices.
    NoiseSpec restricted_to(const StarGraph& star) const;

    std::string describe() const;
};

DiagonalState pure_graph_state(const Graph& g);

DiagonalState apply_dephasing(const DiagonalState& s, Vertex qubit, double p_z);
DiagonalState apply_white_noise(const DiagonalState& s, Vertex qubit, double p_w);

/// General single-qubit Pauli channel with probabilities (I, X, Y, Z).
DiagonalState apply_pauli_channel(const DiagonalState& s, Vertex qubit,
                                  double p_i, double p_x, double p_y, double p_z);

/// White noise on every qubit (ascending), then dephasing on each entry of
/// `noise.dephasing` (ascending label).
DiagonalState prepare_initial(const Graph& g, const NoiseSpec& noise);

double fidelity(const DiagonalState& s);

JointState joint(const DiagonalState& main, const DiagonalState& aux,
                 int bit_cap = kDefaultJointBitCap);

struct MarginalResult {
    DiagonalState state;
    double success_prob;
};

/// Keeps entries whose `zero_bits` (auxiliary-local mask) are all zero, sums
/// out `drop_bits`, and renormalizes. The two masks must be disjoint and
/// together cover the auxiliary block.
MarginalResult post_select_and_marginalize(const JointState& j, BitString zero_bits,
                                           BitString drop_bits);

void require_probability(double p, const char* what);

}  // namespace lep
