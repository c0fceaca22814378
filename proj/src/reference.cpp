#include "lep/reference.hpp"

#include "lep/errors.hpp"

namespace lep::reference {

void mix_xor(std::span<const double> in, std::span<double> out, std::span<const XorTerm> terms) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        double acc = 0.0;
        for (const auto& t : terms) acc += t.weight * in[i ^ t.mask];
        out[i] = acc;
    }
}

double parity_convolve(std::span<const double> main, std::span<const double> second,
                       BitString keep, BitString mix, std::span<double> out) {
    double kept = 0.0;
    for (std::size_t o = 0; o < main.size(); ++o) {
        double acc = 0.0;
        for (std::size_t b = 0; b < main.size(); ++b) {
            if ((b & ~mix) != 0) continue;
            acc += main[o ^ b] * second[(o & keep) | b];
        }
        out[o] = acc;
        kept += acc;
    }
    return kept;
}

double localized_convolve(std::span<const double> main, std::span<const double> aux,
                          BitString target_bit, std::span<const BitString> leaf_bits,
                          std::span<double> out) {
    const std::size_t patterns = std::size_t{1} << leaf_bits.size();
    double kept = 0.0;
    for (std::size_t o = 0; o < main.size(); ++o) {
        const BitString center = (o & target_bit) ? 1 : 0;
        double acc = 0.0;
        for (std::size_t m = 0; m < patterns; ++m) {
            BitString spread = 0;
            for (std::size_t k = 0; k < leaf_bits.size(); ++k)
                if ((m >> k) & 1U) spread |= leaf_bits[k];
            acc += main[o ^ spread] * aux[center | (m << 1)];
        }
        out[o] = acc;
        kept += acc;
    }
    return kept;
}

JointState permute(const JointState& j, const Gf2Map& map) {
    if (map.width() != j.main_bits() + j.aux_bits())
        throw InvalidArgument("map width does not match joint state");
    const auto in = j.lambdas();
    std::vector<double> out(in.size(), 0.0);
    for (std::size_t x = 0; x < in.size(); ++x) out[map.apply(x)] = in[x];
    return JointState(j.graph_main(), j.graph_aux(), std::move(out));
}

StepOutcome tcp_step(const DiagonalState& s, SubProtocol sub, double p_g, int bit_cap) {
    const Graph& g = s.graph();
    const TwoColoring coloring = two_coloring(g);
    const DiagonalState noisy = apply_gate_noise(s, g.all_mask(), p_g);
    const JointState mapped = permute(joint(noisy, noisy, bit_cap), mcnot_map_tcp(g, coloring, sub));
    // Second-copy bits are local to the aux block; the parity block must read zero.
    const BitString zero = sub == SubProtocol::P1 ? coloring.mask_a : coloring.mask_b;
    const BitString drop = g.all_mask() & ~zero;
    auto [state, prob] = post_select_and_marginalize(mapped, zero, drop);
    return {std::move(state), prob};
}

StepOutcome lep_step(const DiagonalState& main, const DiagonalState& aux,
                     const TargetPartition& part, double p_g) {
    const Graph& g = main.graph();
    const StarGraph star = auxiliary_star(g, part.target);
    BitString touched = vertex_bit(part.target);
    for (Vertex v : part.neighbors) touched |= vertex_bit(v);
    const DiagonalState main_noisy = apply_gate_noise(main, touched, p_g);
    const DiagonalState aux_noisy = apply_gate_noise(aux, aux.graph().all_mask(), p_g);
    const JointState mapped = permute(joint(main_noisy, aux_noisy), mcnot_map_lep(g, part, star));
    const BitString zero = 1;  // aux center
    const BitString drop = star.graph.all_mask() & ~zero;
    auto [state, prob] = post_select_and_marginalize(mapped, zero, drop);
    return {std::move(state), prob};
}

}  // namespace lep::reference
