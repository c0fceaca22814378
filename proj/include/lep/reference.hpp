#pragma once

// Serial reference implementations. The kernels evaluate the defining sums
// directly, without threads, subset walks or lookup tables. The step
// functions follow the protocol literally (materialize the joint
// distribution, permute it with the MCNOT map, post-select and marginalize)
// instead of using the fused kernels.

#include "lep/kernels.hpp"
#include "lep/protocols.hpp"
#include "lep/state.hpp"

#include <span>

namespace lep::reference {

void mix_xor(std::span<const double> in, std::span<double> out, std::span<const XorTerm> terms);

double parity_convolve(std::span<const double> main, std::span<const double> second,
                       BitString keep, BitString mix, std::span<double> out);

double localized_convolve(std::span<const double> main, std::span<const double> aux,
                          BitString target_bit, std::span<const BitString> leaf_bits,
                          std::span<double> out);

/// new[map(x)] = old[x]
JointState permute(const JointState& j, const Gf2Map& map);

StepOutcome tcp_step(const DiagonalState& s, SubProtocol sub, double p_g,
                     int bit_cap = kDefaultJointBitCap);

StepOutcome lep_step(const DiagonalState& main, const DiagonalState& aux,
                     const TargetPartition& part, double p_g);

}  // namespace lep::reference
