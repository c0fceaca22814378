#pragma once

// Data-parallel kernels over probability vectors indexed by syndrome bit
// strings. Each kernel has a serial twin in lep/reference.hpp with the
// same signature; the test suite checks they agree and bench/ compares them.

#include "lep/graph.hpp"

#include <span>
#include <vector>

namespace lep {

/// out[mu] += weight * in[mu ^ mask]
struct XorTerm {
    BitString mask = 0;
    double weight = 0.0;
};

namespace kernels {

/// Vectors shorter than this run single-threaded.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 12;

/// out[mu] = sum_k terms[k].weight * in[mu ^ terms[k].mask]
void mix_xor(std::span<const double> in, std::span<double> out, std::span<const XorTerm> terms);

/// Fused two-copy recurrence step after the MCNOT permutation:
///   out[o] = sum_{b subset of mix} main[o ^ b] * second[(o & keep) | b]
/// Returns the kept (unnormalized) mass. keep and mix partition all bits.
double parity_convolve(std::span<const double> main, std::span<const double> second,
                       BitString keep, BitString mix, std::span<double> out);

/// Fused localized step. `aux` is indexed by the star's local bits (bit 0 =
/// center); `leaf_bits[k]` is the main-graph bit paired with aux leaf k+1.
///   out[o] = sum_{n} main[o ^ spread(n)] * aux[t(o) | n]
/// with t(o) the target bit of o moved to aux bit 0. Returns the kept mass.
double localized_convolve(std::span<const double> main, std::span<const double> aux,
                          BitString target_bit, std::span<const BitString> leaf_bits,
                          std::span<double> out);

void scale(std::span<double> v, double factor);
double sum(std::span<const double> v);

}  // namespace kernels
}  // namespace lep
