#pragma once

// Brute-force reference simulator on full density matrices. Builds graph
// states from |+> and CZ gates, applies Kraus channels and CNOT unitaries
// gate by gate, and measures single qubits projectively. Used only to
// validate the diagonal engine; shares nothing with it beyond the Graph type.
//
// Dense qubit q is bit q of the computational index. For a graph on
// vertices 1..N placed at offset k, vertex v is dense qubit k + v - 1.

#include "lep/graph.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <vector>

namespace lep::oracle {

inline constexpr int kMaxStateQubits = 13;
inline constexpr int kMaxStepQubits = 12;

using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

class DenseState {
public:
    explicit DenseState(Matrix rho);

    int qubits() const { return qubits_; }
    Eigen::Index dim() const { return rho_.rows(); }
    const Matrix& rho() const { return rho_; }
    Matrix& rho() { return rho_; }

    double trace() const { return rho_.trace().real(); }
    double hermiticity_error() const;
    /// Smallest eigenvalue; only sensible for small states.
    double min_eigenvalue() const;

private:
    int qubits_;
    Matrix rho_;
};

struct KrausChannel {
    std::vector<Matrix2> ops;

    /// max |sum K^dagger K - I|
    double completeness_error() const;
};

KrausChannel white_noise_channel(double p_w);
KrausChannel dephasing_channel(double p_z);
KrausChannel pauli_channel(double p_i, double p_x, double p_y, double p_z);

Eigen::VectorXcd graph_state_vector(const Graph& g);
DenseState dense_graph_state(const Graph& g);

/// `low` occupies the low qubits, `high` the qubits above it.
DenseState tensor(const DenseState& low, const DenseState& high);

void apply_channel(DenseState& s, int qubit, const KrausChannel& channel);
void apply_unitary(DenseState& s, int qubit, const Matrix2& u);
void apply_cnot(DenseState& s, int control, int target);

/// CNOT preceded by depolarizing noise p_g on control and target.
void apply_noisy_cnot(DenseState& s, int control, int target, double p_g);

enum class Basis { X, Z };

struct MeasuredQubit {
    int qubit;
    Basis basis;
};

struct PostSelected {
    DenseState state;  // unmeasured qubits, ascending order
    double success_prob;
};

/// Measures each listed qubit in its basis and keeps the branches whose
/// outcome pattern is accepted. Outcome bit q is set when qubit q read -1.
PostSelected measure_and_postselect(const DenseState& s, const std::vector<MeasuredQubit>& measured,
                                    const std::function<bool(BitString)>& accept);

struct GraphDiagonal {
    std::vector<double> lambdas;  // <mu|rho|mu>
    double off_diag_residual;     // Frobenius norm of rho minus its graph-basis diagonal
};

GraphDiagonal graph_basis_diagonal(const DenseState& rho, const Graph& g);

double fidelity_with_graph_state(const DenseState& rho, const Graph& g);

/// Per-vertex initial noise.
struct DenseNoise {
    std::vector<double> white;         // index v-1
    std::map<Vertex, double> dephasing;
};

/// White noise on every qubit, then dephasing on the listed qubits.
DenseState noisy_graph_state(const Graph& g, const DenseNoise& noise);

enum class Recurrence { P1, P2 };

/// Two-copy recurrence round with explicit noisy CNOTs, X/Z measurements of
/// the second copy and parity post-selection on its stabilizer outcomes.
PostSelected recurrence_step(const DenseState& main, const DenseState& second, const Graph& g,
                             Recurrence sub, double p_g);

/// Localized round: `aux` lives on auxiliary_star(g, target).
PostSelected localized_step(const DenseState& main, const DenseState& aux, const Graph& g,
                            Vertex target, double p_g);

/// Fidelity of the noisy graph state via the stabilizer-group expansion
/// F = 2^-N sum_S prod_i f_i(S_i), where each Pauli channel damps a
/// non-identity Pauli factor multiplicatively. Exact and cheap to N ~ 20.
double stabilizer_group_fidelity(const Graph& g, const DenseNoise& noise);

}  // namespace lep::oracle
