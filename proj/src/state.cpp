#include "lep/state.hpp"

#include "lep/errors.hpp"
#include "lep/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lep {

namespace {

void check_distribution(std::span<const double> v, const char* what) {
    double total = 0.0;
    for (double x : v) {
        if (!(x >= 0.0)) throw InvalidArgument(std::string(what) + ": negative or NaN coefficient");
        total += x;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance)
        throw InvalidArgument(std::string(what) + ": coefficients sum to " + std::to_string(total));
}

DiagonalState mixed(const DiagonalState& s, std::span<const XorTerm> terms) {
    std::vector<double> out(s.dimension());
    kernels::mix_xor(s.lambdas(), out, terms);
    return DiagonalState(s.graph(), std::move(out));
}

}  // namespace

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
}

DiagonalState::DiagonalState(Graph graph, std::vector<double> lambdas)
    : graph_(std::move(graph)), lambdas_(std::move(lambdas)) {
    if (lambdas_.size() != (std::size_t{1} << graph_.size()))
        throw InvalidArgument("state vector length must be 2^N");
    check_distribution(lambdas_, "DiagonalState");
}

double DiagonalState::total() const { return kernels::sum(lambdas_); }

std::string DiagonalState::dump() const {
    std::ostringstream os;
    char buf[64];
    for (std::size_t mu = 0; mu < lambdas_.size(); ++mu) {
        if (lambdas_[mu] == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", lambdas_[mu]);
        os << bit_string(mu, graph_.size()) << ' ' << buf << '\n';
    }
    return os.str();
}

JointState::JointState(Graph main, Graph aux, std::vector<double> lambdas)
    : main_(std::move(main)), aux_(std::move(aux)), lambdas_(std::move(lambdas)) {
    if (lambdas_.size() != (std::size_t{1} << (main_.size() + aux_.size())))
        throw InvalidArgument("joint vector length must be 2^(N_main+N_aux)");
    check_distribution(lambdas_, "JointState");
}

double JointState::total() const { return kernels::sum(lambdas_); }

double NoiseSpec::white_for(Vertex v) const {
    auto it = white_override.find(v);
    return it == white_override.end() ? white : it->second;
}

void NoiseSpec::validate() const {
    require_probability(white, "p_w");
    require_probability(gate, "p_g");
    for (const auto& [v, p] : white_override) require_probability(p, "p_w^(i)");
    for (const auto& [v, p] : dephasing) require_probability(p, "p_z^(i)");
}

NoiseSpec NoiseSpec::restricted_to(const StarGraph& star) const {
    NoiseSpec local;
    local.white = white;
    local.gate = gate;
    for (std::size_t i = 0; i < star.physical.size(); ++i) {
        const Vertex phys = star.physical[i];
        const auto local_label = static_cast<Vertex>(i + 1);
        if (auto it = white_override.find(phys); it != white_override.end())
            local.white_override[local_label] = it->second;
        if (auto it = dephasing.find(phys); it != dephasing.end())
            local.dephasing[local_label] = it->second;
    }
    return local;
}

std::string NoiseSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "white=" << white;
    for (const auto& [v, p] : white_override) os << " white." << v << '=' << p;
    for (const auto& [v, p] : dephasing) os << " z." << v << '=' << p;
    os << " gate=" << gate;
    return os.str();
}

DiagonalState pure_graph_state(const Graph& g) {
    std::vector<double> v(std::size_t{1} << g.size(), 0.0);
    v[0] = 1.0;
    return DiagonalState(g, std::move(v));
}

DiagonalState apply_dephasing(const DiagonalState& s, Vertex qubit, double p_z) {
    require_probability(p_z, "p_z");
    if (!s.graph().contains(qubit)) throw InvalidArgument("dephasing qubit not in graph");
    const std::array<XorTerm, 2> terms{{{0, p_z}, {vertex_bit(qubit), 1.0 - p_z}}};
    return mixed(s, terms);
}

DiagonalState apply_white_noise(const DiagonalState& s, Vertex qubit, double p_w) {
    require_probability(p_w, "p_w");
    const double q = (1.0 - p_w) / 4.0;
    return apply_pauli_channel(s, qubit, p_w + q, q, q, q);
}

DiagonalState apply_pauli_channel(const DiagonalState& s, Vertex qubit,
                                  double p_i, double p_x, double p_y, double p_z) {
    for (double p : {p_i, p_x, p_y, p_z}) require_probability(p, "Pauli channel weight");
    if (std::abs(p_i + p_x + p_y + p_z - 1.0) > 1e-12)
        throw InvalidArgument("Pauli channel weights must sum to 1");
    const auto& g = s.graph();
    const std::array<XorTerm, 4> terms{{
        {0, p_i},
        {pauli_flip_mask(g, qubit, Pauli::X).bits, p_x},
        {pauli_flip_mask(g, qubit, Pauli::Y).bits, p_y},
        {pauli_flip_mask(g, qubit, Pauli::Z).bits, p_z},
    }};
    return mixed(s, terms);
}

DiagonalState prepare_initial(const Graph& g, const NoiseSpec& noise) {
    noise.validate();
    DiagonalState s = pure_graph_state(g);
    for (Vertex v = 1; v <= g.size(); ++v) {
        const double p = noise.white_for(v);
        if (p != 1.0) s = apply_white_noise(s, v, p);
    }
    for (const auto& [v, p] : noise.dephasing) {
        if (!g.contains(v)) throw InvalidArgument("dephasing qubit " + std::to_string(v) + " not in graph");
        if (p != 1.0) s = apply_dephasing(s, v, p);
    }
    return s;
}

double fidelity(const DiagonalState& s) { return s[0]; }

JointState joint(const DiagonalState& main, const DiagonalState& aux, int bit_cap) {
    const int bits = main.qubits() + aux.qubits();
    if (bits > bit_cap)
        throw SizeLimitExceeded("joint state of " + std::to_string(bits) + " bits exceeds cap " +
                                std::to_string(bit_cap));
    const std::size_t dm = main.dimension();
    const std::size_t da = aux.dimension();
    std::vector<double> v(dm * da);
    const auto m = main.lambdas();
    const auto a = aux.lambdas();
    const auto na = static_cast<std::int64_t>(da);
#pragma omp parallel for schedule(static) if (dm * da >= kernels::kParallelThreshold)
    for (std::int64_t j = 0; j < na; ++j) {
        const double w = a[static_cast<std::size_t>(j)];
        double* row = v.data() + static_cast<std::size_t>(j) * dm;
        for (std::size_t i = 0; i < dm; ++i) row[i] = m[i] * w;
    }
    return JointState(main.graph(), aux.graph(), std::move(v));
}

MarginalResult post_select_and_marginalize(const JointState& j, BitString zero_bits,
                                           BitString drop_bits) {
    const BitString aux_all = j.graph_aux().all_mask();
    if ((zero_bits & drop_bits) != 0) throw InvalidArgument("zero_bits and drop_bits overlap");
    if ((zero_bits | drop_bits) != aux_all)
        throw InvalidArgument("zero_bits and drop_bits must cover the auxiliary block");

    const std::size_t dm = std::size_t{1} << j.main_bits();
    const std::size_t da = std::size_t{1} << j.aux_bits();
    const auto lam = j.lambdas();
    std::vector<double> out(dm, 0.0);
    for (std::size_t nu = 0; nu < da; ++nu) {
        if ((nu & zero_bits) != 0) continue;
        const double* row = lam.data() + nu * dm;
        for (std::size_t mu = 0; mu < dm; ++mu) out[mu] += row[mu];
    }
    const double kept = kernels::sum(out);
    if (!(kept > 0.0)) throw ImpossiblePostSelection("post-selection keeps zero probability");
    kernels::scale(out, 1.0 / kept);
    return {DiagonalState(j.graph_main(), std::move(out)), std::min(kept, 1.0)};
}

}  // namespace lep
