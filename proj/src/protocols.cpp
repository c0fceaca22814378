#include "lep/protocols.hpp"

#include "lep/errors.hpp"
#include "lep/kernels.hpp"

#include <algorithm>
#include <array>

namespace lep {

const char* to_string(SubProtocol s) { return s == SubProtocol::P1 ? "P1" : "P2"; }

Gf2Map::Gf2Map(int width) : columns_(static_cast<std::size_t>(width), 0) {
    if (width < 0 || width > 64) throw InvalidArgument("GF(2) map width out of range");
}

Gf2Map Gf2Map::identity(int width) {
    Gf2Map m(width);
    for (int i = 0; i < width; ++i) m.set_column(i, BitString{1} << i);
    return m;
}

BitString Gf2Map::apply(BitString x) const {
    BitString y = 0;
    for (std::size_t i = 0; x != 0; ++i, x >>= 1)
        if (x & 1U) y ^= columns_[i];
    return y;
}

bool Gf2Map::invertible() const {
    std::vector<BitString> rows = columns_;
    int rank = 0;
    for (int bit = 0; bit < width(); ++bit) {
        const BitString pivot_mask = BitString{1} << bit;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(),
                                  [&](BitString r) { return (r & pivot_mask) != 0; });
        if (pivot == rows.end()) continue;
        std::swap(*pivot, rows[static_cast<std::size_t>(rank)]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != static_cast<std::size_t>(rank) && (rows[i] & pivot_mask))
                rows[i] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank == width();
}

Gf2Map Gf2Map::compose(const Gf2Map& after) const {
    if (after.width() != width()) throw InvalidArgument("GF(2) map widths differ");
    Gf2Map m(width());
    for (int i = 0; i < width(); ++i) m.set_column(i, after.apply(column(i)));
    return m;
}

Gf2Map mcnot_map_tcp(const Graph& g, const TwoColoring& coloring, SubProtocol sub) {
    const int n = g.size();
    Gf2Map m = Gf2Map::identity(2 * n);
    // Blocks whose main bit is copied into the second copy, and vice versa.
    const BitString main_to_second = sub == SubProtocol::P1 ? coloring.mask_a : coloring.mask_b;
    const BitString second_to_main = sub == SubProtocol::P1 ? coloring.mask_b : coloring.mask_a;
    for (int i = 0; i < n; ++i) {
        const BitString mu = BitString{1} << i;
        const BitString nu = BitString{1} << (n + i);
        if (main_to_second & mu) m.set_column(i, mu | nu);
        if (second_to_main & mu) m.set_column(n + i, nu | mu);
    }
    return m;
}

namespace {

void require_matching_star(const TargetPartition& part, const StarGraph& aux) {
    if (aux.physical.empty() || aux.center_physical() != part.target)
        throw InvalidArgument("auxiliary star is not centered on the target");
    if (!std::equal(aux.physical.begin() + 1, aux.physical.end(), part.neighbors.begin(),
                    part.neighbors.end()))
        throw InvalidArgument("auxiliary leaves do not match the target neighborhood");
}

}  // namespace

Gf2Map mcnot_map_lep(const Graph& main, const TargetPartition& part, const StarGraph& aux) {
    require_matching_star(part, aux);
    const int n = main.size();
    Gf2Map m = Gf2Map::identity(n + aux.graph.size());
    const BitString mu_t = vertex_bit(part.target);
    const BitString nu_t = BitString{1} << n;
    m.set_column(part.target - 1, mu_t | nu_t);
    for (std::size_t k = 0; k < part.neighbors.size(); ++k) {
        const BitString nu_leaf = BitString{1} << (n + 1 + static_cast<int>(k));
        m.set_column(n + 1 + static_cast<int>(k), nu_leaf | vertex_bit(part.neighbors[k]));
    }
    return m;
}

DiagonalState apply_gate_noise(const DiagonalState& s, BitString qubits, double p_g) {
    require_probability(p_g, "p_g");
    if (p_g == 1.0) return s;
    DiagonalState out = s;
    for (Vertex v = 1; v <= s.qubits(); ++v)
        if (qubits & vertex_bit(v)) out = apply_white_noise(out, v, p_g);
    return out;
}

StepOutcome tcp_step(const DiagonalState& s, SubProtocol sub, double p_g) {
    const TwoColoring coloring = two_coloring(s.graph());
    const DiagonalState noisy = apply_gate_noise(s, s.graph().all_mask(), p_g);

    // The measured copy's parity block must match the main block; the other
    // block of the measured copy is summed out.
    const BitString keep = sub == SubProtocol::P1 ? coloring.mask_a : coloring.mask_b;
    const BitString mix = sub == SubProtocol::P1 ? coloring.mask_b : coloring.mask_a;

    std::vector<double> out(s.dimension());
    const double kept = kernels::parity_convolve(noisy.lambdas(), noisy.lambdas(), keep, mix, out);
    if (!(kept > 0.0)) throw ImpossiblePostSelection("recurrence step keeps zero probability");
    kernels::scale(out, 1.0 / kept);
    // The kept mass of a normalized vector can round a few ulps above one.
    return {DiagonalState(s.graph(), std::move(out)), std::min(kept, 1.0)};
}

StepOutcome lep_step(const DiagonalState& main, const DiagonalState& aux,
                     const TargetPartition& part, double p_g) {
    const Graph& g = main.graph();
    const StarGraph star = auxiliary_star(g, part.target);
    if (aux.graph() != star.graph)
        throw InvalidArgument("auxiliary state does not live on the target's star graph");
    require_matching_star(part, star);

    BitString touched = vertex_bit(part.target);
    std::vector<BitString> leaf_bits;
    for (Vertex v : part.neighbors) {
        touched |= vertex_bit(v);
        leaf_bits.push_back(vertex_bit(v));
    }
    const DiagonalState main_noisy = apply_gate_noise(main, touched, p_g);
    const DiagonalState aux_noisy = apply_gate_noise(aux, aux.graph().all_mask(), p_g);

    std::vector<double> out(main.dimension());
    const double kept = kernels::localized_convolve(main_noisy.lambdas(), aux_noisy.lambdas(),
                                                    vertex_bit(part.target), leaf_bits, out);
    if (!(kept > 0.0)) throw ImpossiblePostSelection("localized step keeps zero probability");
    kernels::scale(out, 1.0 / kept);
    return {DiagonalState(g, std::move(out)), std::min(kept, 1.0)};
}

const char* to_string(PrepurifySchedule s) {
    return s == PrepurifySchedule::Adaptive ? "adaptive" : "alternating";
}

PrepurifiedAux prepurify_aux(const DiagonalState& aux_initial, int alpha, double p_g,
                             PrepurifySchedule schedule) {
    if (alpha < 0) throw InvalidArgument("pre-purification count must be nonnegative");
    PrepurifiedAux result{aux_initial, 1.0, {}, {}};
    SubProtocol next = SubProtocol::P1;
    for (int k = 0; k < alpha; ++k) {
        StepOutcome step = tcp_step(result.state, next, p_g);
        SubProtocol used = next;
        if (schedule == PrepurifySchedule::Adaptive) {
            StepOutcome alt = tcp_step(result.state, SubProtocol::P2, p_g);
            if (fidelity(alt.state) > fidelity(step.state)) {
                step = std::move(alt);
                used = SubProtocol::P2;
            }
        } else {
            next = other(next);
        }
        result.cost_multiplier *= 2.0 / step.success_prob;
        result.success_probs.push_back(step.success_prob);
        result.rounds.push_back(used);
        result.state = std::move(step.state);
    }
    return result;
}

}  // namespace lep
