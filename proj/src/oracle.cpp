#include "lep/oracle.hpp"

#include "lep/errors.hpp"

#include <cmath>
#include <complex>

namespace lep::oracle {

namespace {

using cd = std::complex<double>;

Eigen::Index index_bit(int qubit) { return Eigen::Index{1} << qubit; }

Matrix2 pauli_x() { return (Matrix2() << 0, 1, 1, 0).finished(); }
Matrix2 pauli_y() { return (Matrix2() << 0, cd(0, -1), cd(0, 1), 0).finished(); }
Matrix2 pauli_z() { return (Matrix2() << 1, 0, 0, -1).finished(); }
Matrix2 hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return (Matrix2() << h, h, h, -h).finished();
}

// rho <- U_q rho U_q^dagger, applied into `out` (which must be zeroed or
// accumulated into when `accumulate` is set).
void conjugate(const Matrix& rho, int qubit, const Matrix2& u, Matrix& out, bool accumulate) {
    const Eigen::Index d = rho.rows();
    const Eigen::Index m = index_bit(qubit);
    Matrix left(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i & m) continue;
            const cd a = rho(i, c);
            const cd b = rho(i | m, c);
            left(i, c) = u(0, 0) * a + u(0, 1) * b;
            left(i | m, c) = u(1, 0) * a + u(1, 1) * b;
        }
    }
    const cd c00 = std::conj(u(0, 0)), c01 = std::conj(u(0, 1));
    const cd c10 = std::conj(u(1, 0)), c11 = std::conj(u(1, 1));
    for (Eigen::Index j = 0; j < d; ++j) {
        if (j & m) continue;
        for (Eigen::Index r = 0; r < d; ++r) {
            const cd a = left(r, j);
            const cd b = left(r, j | m);
            const cd x = a * c00 + b * c01;
            const cd y = a * c10 + b * c11;
            if (accumulate) {
                out(r, j) += x;
                out(r, j | m) += y;
            } else {
                out(r, j) = x;
                out(r, j | m) = y;
            }
        }
    }
}

void require_size(int qubits, int limit, const char* what) {
    if (qubits > limit)
        throw SizeLimitExceeded(std::string(what) + ": " + std::to_string(qubits) +
                                " qubits exceeds the oracle limit of " + std::to_string(limit));
}

}  // namespace

DenseState::DenseState(Matrix rho) : qubits_(0), rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) throw InvalidArgument("density matrix must be square");
    Eigen::Index d = rho_.rows();
    while (d > 1) {
        if (d & 1) throw InvalidArgument("density matrix dimension must be a power of two");
        d >>= 1;
        ++qubits_;
    }
}

double DenseState::hermiticity_error() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DenseState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double KrausChannel::completeness_error() const {
    Matrix2 sum = Matrix2::Zero();
    for (const auto& k : ops) sum += k.adjoint() * k;
    return (sum - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

KrausChannel pauli_channel(double p_i, double p_x, double p_y, double p_z) {
    KrausChannel ch;
    if (p_i > 0) ch.ops.push_back(std::sqrt(p_i) * Matrix2::Identity());
    if (p_x > 0) ch.ops.push_back(std::sqrt(p_x) * pauli_x());
    if (p_y > 0) ch.ops.push_back(std::sqrt(p_y) * pauli_y());
    if (p_z > 0) ch.ops.push_back(std::sqrt(p_z) * pauli_z());
    return ch;
}

KrausChannel white_noise_channel(double p_w) {
    const double q = (1.0 - p_w) / 4.0;
    return pauli_channel(p_w + q, q, q, q);
}

KrausChannel dephasing_channel(double p_z) { return pauli_channel(p_z, 0.0, 0.0, 1.0 - p_z); }

Eigen::VectorXcd graph_state_vector(const Graph& g) {
    require_size(g.size(), kMaxStateQubits, "graph state");
    const Eigen::Index d = index_bit(g.size());
    Eigen::VectorXcd psi(d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index x = 0; x < d; ++x) {
        // CZ on every edge of |+>^N: phase -1 when both endpoints read 1.
        int parity = 0;
        for (const auto& [a, b] : g.edges())
            parity ^= static_cast<int>(((x >> (a - 1)) & 1) & ((x >> (b - 1)) & 1));
        psi(x) = parity ? -amp : amp;
    }
    return psi;
}

DenseState dense_graph_state(const Graph& g) {
    const Eigen::VectorXcd psi = graph_state_vector(g);
    return DenseState(psi * psi.adjoint());
}

DenseState tensor(const DenseState& low, const DenseState& high) {
    require_size(low.qubits() + high.qubits(), kMaxStepQubits, "tensor product");
    const Eigen::Index dl = low.dim();
    const Eigen::Index dh = high.dim();
    Matrix out(dl * dh, dl * dh);
    for (Eigen::Index jh = 0; jh < dh; ++jh)
        for (Eigen::Index jl = 0; jl < dl; ++jl)
            for (Eigen::Index ih = 0; ih < dh; ++ih)
                for (Eigen::Index il = 0; il < dl; ++il)
                    out(ih * dl + il, jh * dl + jl) = high.rho()(ih, jh) * low.rho()(il, jl);
    return DenseState(std::move(out));
}

void apply_channel(DenseState& s, int qubit, const KrausChannel& channel) {
    Matrix out = Matrix::Zero(s.dim(), s.dim());
    for (const auto& k : channel.ops) conjugate(s.rho(), qubit, k, out, true);
    s.rho() = std::move(out);
}

void apply_unitary(DenseState& s, int qubit, const Matrix2& u) {
    Matrix out(s.dim(), s.dim());
    conjugate(s.rho(), qubit, u, out, false);
    s.rho() = std::move(out);
}

void apply_cnot(DenseState& s, int control, int target) {
    if (control == target) throw InvalidArgument("CNOT control equals target");
    const Eigen::Index cm = index_bit(control);
    const Eigen::Index tm = index_bit(target);
    auto perm = [&](Eigen::Index x) { return (x & cm) ? (x ^ tm) : x; };
    const Eigen::Index d = s.dim();
    Matrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) out(perm(i), perm(j)) = s.rho()(i, j);
    s.rho() = std::move(out);
}

void apply_noisy_cnot(DenseState& s, int control, int target, double p_g) {
    if (p_g != 1.0) {
        const KrausChannel noise = white_noise_channel(p_g);
        apply_channel(s, target, noise);
        apply_channel(s, control, noise);
    }
    apply_cnot(s, control, target);
}

PostSelected measure_and_postselect(const DenseState& s, const std::vector<MeasuredQubit>& measured,
                                    const std::function<bool(BitString)>& accept) {
    DenseState rotated = s;
    Eigen::Index measured_mask = 0;
    for (const auto& m : measured) {
        if (m.basis == Basis::X) apply_unitary(rotated, m.qubit, hadamard());
        measured_mask |= index_bit(m.qubit);
    }
    std::vector<int> kept;
    for (int q = 0; q < s.qubits(); ++q)
        if (!(measured_mask & index_bit(q))) kept.push_back(q);

    auto scatter = [&](Eigen::Index local) {
        Eigen::Index full = 0;
        for (std::size_t k = 0; k < kept.size(); ++k)
            if ((local >> k) & 1) full |= index_bit(kept[k]);
        return full;
    };
    std::vector<Eigen::Index> outcomes;
    for (Eigen::Index o = 0; o < s.dim(); ++o)
        if ((o & ~measured_mask) == 0 && accept(static_cast<BitString>(o))) outcomes.push_back(o);

    const Eigen::Index dk = index_bit(static_cast<int>(kept.size()));
    std::vector<Eigen::Index> full_index(static_cast<std::size_t>(dk));
    for (Eigen::Index r = 0; r < dk; ++r) full_index[static_cast<std::size_t>(r)] = scatter(r);

    Matrix reduced = Matrix::Zero(dk, dk);
    for (Eigen::Index o : outcomes)
        for (Eigen::Index c = 0; c < dk; ++c)
            for (Eigen::Index r = 0; r < dk; ++r)
                reduced(r, c) += rotated.rho()(full_index[static_cast<std::size_t>(r)] | o,
                                               full_index[static_cast<std::size_t>(c)] | o);
    const double prob = reduced.trace().real();
    if (!(prob > 0.0)) throw ImpossiblePostSelection("oracle post-selection keeps zero probability");
    reduced /= prob;
    return {DenseState(std::move(reduced)), prob};
}

GraphDiagonal graph_basis_diagonal(const DenseState& rho, const Graph& g) {
    if (rho.qubits() != g.size()) throw InvalidArgument("state and graph sizes differ");
    require_size(g.size(), 10, "graph-basis projection");
    const Eigen::VectorXcd g0 = graph_state_vector(g);
    const Eigen::Index d = rho.dim();
    // Column mu of `basis` is Z^mu |G>.
    Matrix basis(d, d);
    for (Eigen::Index mu = 0; mu < d; ++mu)
        for (Eigen::Index x = 0; x < d; ++x) {
            const int sign = __builtin_popcountll(static_cast<unsigned long long>(mu & x)) & 1;
            basis(x, mu) = sign ? -g0(x) : g0(x);
        }
    const Matrix m = basis.adjoint() * rho.rho() * basis;
    GraphDiagonal out;
    out.lambdas.resize(static_cast<std::size_t>(d));
    double off = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i == j) out.lambdas[static_cast<std::size_t>(i)] = m(i, i).real();
            else off += std::norm(m(i, j));
        }
    out.off_diag_residual = std::sqrt(off);
    return out;
}

double fidelity_with_graph_state(const DenseState& rho, const Graph& g) {
    const Eigen::VectorXcd psi = graph_state_vector(g);
    return (psi.adjoint() * rho.rho() * psi)(0, 0).real();
}

DenseState noisy_graph_state(const Graph& g, const DenseNoise& noise) {
    DenseState s = dense_graph_state(g);
    for (Vertex v = 1; v <= g.size(); ++v) {
        const double p = noise.white.empty() ? 1.0 : noise.white.at(static_cast<std::size_t>(v - 1));
        if (p != 1.0) apply_channel(s, v - 1, white_noise_channel(p));
    }
    for (const auto& [v, p] : noise.dephasing)
        if (p != 1.0) apply_channel(s, v - 1, dephasing_channel(p));
    return s;
}

PostSelected recurrence_step(const DenseState& main, const DenseState& second, const Graph& g,
                             Recurrence sub, double p_g) {
    const int n = g.size();
    if (main.qubits() != n || second.qubits() != n) throw InvalidArgument("copies must match the graph");
    const TwoColoring coloring = two_coloring(g);
    DenseState joint = tensor(main, second);

    // P1: color A uses the second copy as control, color B the main copy.
    // P2 reverses every direction.
    const BitString second_controls = sub == Recurrence::P1 ? coloring.mask_a : coloring.mask_b;
    for (Vertex v = 1; v <= n; ++v) {
        const int mq = v - 1;
        const int sq = n + v - 1;
        if (second_controls & vertex_bit(v)) apply_noisy_cnot(joint, sq, mq, p_g);
        else apply_noisy_cnot(joint, mq, sq, p_g);
    }

    // The checked color class is measured in X, the other in Z. The product
    // X_v prod_{u in N(v)} Z_u is the stabilizer K_v of the second copy, so
    // "+1 eigenvalue" means even parity of those outcomes.
    const BitString checked = sub == Recurrence::P1 ? coloring.mask_a : coloring.mask_b;
    std::vector<MeasuredQubit> measured;
    for (Vertex v = 1; v <= n; ++v)
        measured.push_back({n + v - 1, (checked & vertex_bit(v)) ? Basis::X : Basis::Z});
    auto accept = [&](BitString outcome) {
        for (Vertex v = 1; v <= n; ++v) {
            if (!(checked & vertex_bit(v))) continue;
            int parity = static_cast<int>((outcome >> (n + v - 1)) & 1U);
            for (Vertex u : g.neighbors(v)) parity ^= static_cast<int>((outcome >> (n + u - 1)) & 1U);
            if (parity) return false;
        }
        return true;
    };
    return measure_and_postselect(joint, measured, accept);
}

PostSelected localized_step(const DenseState& main, const DenseState& aux, const Graph& g,
                            Vertex target, double p_g) {
    const StarGraph star = auxiliary_star(g, target);
    const int n = g.size();
    if (main.qubits() != n || aux.qubits() != star.graph.size())
        throw InvalidArgument("state sizes do not match the graph and its auxiliary star");
    DenseState joint = tensor(main, aux);

    const int aux_center = n;
    apply_noisy_cnot(joint, aux_center, target - 1, p_g);
    for (std::size_t k = 1; k < star.physical.size(); ++k)
        apply_noisy_cnot(joint, star.physical[k] - 1, n + static_cast<int>(k), p_g);

    // Center in X, leaves in Z: the product is the star stabilizer of the center.
    std::vector<MeasuredQubit> measured{{aux_center, Basis::X}};
    for (std::size_t k = 1; k < star.physical.size(); ++k)
        measured.push_back({n + static_cast<int>(k), Basis::Z});
    const int aux_qubits = star.graph.size();
    auto accept = [&](BitString outcome) {
        int parity = 0;
        for (int q = 0; q < aux_qubits; ++q) parity ^= static_cast<int>((outcome >> (n + q)) & 1U);
        return parity == 0;
    };
    return measure_and_postselect(joint, measured, accept);
}

double stabilizer_group_fidelity(const Graph& g, const DenseNoise& noise) {
    const int n = g.size();
    if (n > 24) throw SizeLimitExceeded("stabilizer-group expansion limited to 24 qubits");
    std::vector<BitString> nbr(static_cast<std::size_t>(n));
    for (Vertex v = 1; v <= n; ++v) nbr[static_cast<std::size_t>(v - 1)] = g.neighbor_mask(v);

    double total = 0.0;
    const BitString count = BitString{1} << n;
    for (BitString subset = 0; subset < count; ++subset) {
        // prod_{i in subset} K_i has X on the subset and Z where an odd number
        // of subset members are neighbors.
        double weight = 1.0;
        for (int q = 0; q < n; ++q) {
            const bool x = (subset >> q) & 1U;
            const bool z = __builtin_popcountll(subset & nbr[static_cast<std::size_t>(q)]) & 1;
            if (!x && !z) continue;
            const double pw = noise.white.empty() ? 1.0 : noise.white[static_cast<std::size_t>(q)];
            weight *= pw;
            if (x) {
                auto it = noise.dephasing.find(q + 1);
                if (it != noise.dephasing.end()) weight *= 2.0 * it->second - 1.0;
            }
        }
        total += weight;
    }
    return total / static_cast<double>(count);
}

}  // namespace lep::oracle
