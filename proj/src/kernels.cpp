#include "lep/kernels.hpp"

#include <omp.h>

#include <cstdint>

namespace lep::kernels {

namespace {

constexpr std::size_t kSumBlock = 4096;

// Block partition is fixed so the result does not depend on thread count.
double blocked_sum(std::span<const double> v) {
    const std::size_t blocks = (v.size() + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks, 0.0);
    const auto nblocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static) if (v.size() >= kParallelThreshold)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t hi = std::min(v.size(), lo + kSumBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += v[i];
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace

void mix_xor(std::span<const double> in, std::span<double> out, std::span<const XorTerm> terms) {
    const auto n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static) if (in.size() >= kParallelThreshold)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto mu = static_cast<BitString>(i);
        double acc = 0.0;
        for (const auto& t : terms) acc += t.weight * in[mu ^ t.mask];
        out[static_cast<std::size_t>(i)] = acc;
    }
}

double parity_convolve(std::span<const double> main, std::span<const double> second,
                       BitString keep, BitString mix, std::span<double> out) {
    const auto n = static_cast<std::int64_t>(main.size());
#pragma omp parallel for schedule(static) if (main.size() >= kParallelThreshold)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto o = static_cast<BitString>(i);
        const BitString kept = o & keep;
        double acc = 0.0;
        // Walk every subset b of mix, including the empty one.
        BitString b = mix;
        while (true) {
            acc += main[o ^ b] * second[kept | b];
            if (b == 0) break;
            b = (b - 1) & mix;
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return blocked_sum(out);
}

double localized_convolve(std::span<const double> main, std::span<const double> aux,
                          BitString target_bit, std::span<const BitString> leaf_bits,
                          std::span<double> out) {
    const std::size_t patterns = std::size_t{1} << leaf_bits.size();
    std::vector<BitString> spread(patterns, 0);
    for (std::size_t m = 1; m < patterns; ++m) {
        const auto low = static_cast<std::size_t>(__builtin_ctzll(m));
        spread[m] = spread[m & (m - 1)] | leaf_bits[low];
    }
    const auto n = static_cast<std::int64_t>(main.size());
#pragma omp parallel for schedule(static) if (main.size() >= kParallelThreshold)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto o = static_cast<BitString>(i);
        const BitString center = (o & target_bit) ? 1 : 0;
        double acc = 0.0;
        for (std::size_t m = 0; m < patterns; ++m)
            acc += main[o ^ spread[m]] * aux[center | (static_cast<BitString>(m) << 1)];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return blocked_sum(out);
}

void scale(std::span<double> v, double factor) {
    const auto n = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static) if (v.size() >= kParallelThreshold)
    for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] *= factor;
}

double sum(std::span<const double> v) { return blocked_sum(v); }

}  // namespace lep::kernels
