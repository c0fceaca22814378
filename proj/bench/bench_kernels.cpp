// Parallel kernels and fused steps against their serial references.
//
//   ./build/bench/lep_bench --benchmark_filter=parity

#include "lep/kernels.hpp"
#include "lep/protocols.hpp"
#include "lep/reference.hpp"
#include "lep/state.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

namespace {

using namespace lep;

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& x : v) total += (x = u(rng));
    for (auto& x : v) x /= total;
    return v;
}

DiagonalState noisy_grid() {
    NoiseSpec n;
    n.white = 0.98;
    n.dephasing = {{1, 0.9}, {4, 0.85}, {9, 0.95}, {12, 0.98}};
    n.gate = 0.998;
    return prepare_initial(grid_cluster(3, 4), n);
}

// Thread count as the benchmark argument; 0 means one per processor.
void set_threads(const benchmark::State& state) {
    omp_set_num_threads(state.range(0) > 0 ? static_cast<int>(state.range(0)) : omp_get_num_procs());
}

void BM_MixXor(benchmark::State& state, bool parallel) {
    set_threads(state);
    const std::size_t n = std::size_t{1} << 20;
    const auto in = random_vector(n, 1);
    std::vector<double> out(n);
    const std::vector<XorTerm> terms = {{0, 0.97}, {0x5, 0.01}, {0xa0, 0.01}, {0xa5, 0.01}};
    for (auto _ : state) {
        if (parallel) kernels::mix_xor(in, out, terms);
        else reference::mix_xor(in, out, terms);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_ParityConvolve(benchmark::State& state, bool parallel) {
    set_threads(state);
    const std::size_t n = std::size_t{1} << 16;
    const auto a = random_vector(n, 2);
    const auto b = random_vector(n, 3);
    const BitString mix = 0x5555;  // one color class of a 16-vertex bipartite graph
    std::vector<double> out(n);
    for (auto _ : state) {
        const double kept = parallel ? kernels::parity_convolve(a, b, (n - 1) & ~mix, mix, out)
                                     : reference::parity_convolve(a, b, (n - 1) & ~mix, mix, out);
        benchmark::DoNotOptimize(kept);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_LocalizedConvolve(benchmark::State& state, bool parallel) {
    set_threads(state);
    const std::size_t n = std::size_t{1} << 20;
    const auto main = random_vector(n, 4);
    const auto aux = random_vector(32, 5);
    const std::vector<BitString> leaves = {1u << 1, 1u << 5, 1u << 7, 1u << 11};
    std::vector<double> out(n);
    for (auto _ : state) {
        const double kept = parallel ? kernels::localized_convolve(main, aux, 1u << 6, leaves, out)
                                     : reference::localized_convolve(main, aux, 1u << 6, leaves, out);
        benchmark::DoNotOptimize(kept);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

// Whole recurrence step on the 3x4 grid: the fused kernel against the
// literal 2^24-entry joint permutation.
void BM_TcpStepGrid(benchmark::State& state, bool fused) {
    set_threads(state);
    const auto s = noisy_grid();
    for (auto _ : state) {
        auto out = fused ? tcp_step(s, SubProtocol::P1, 0.998) : reference::tcp_step(s, SubProtocol::P1, 0.998);
        benchmark::DoNotOptimize(out.success_prob);
    }
}

void BM_LepStepGrid(benchmark::State& state, bool fused) {
    set_threads(state);
    const auto s = noisy_grid();
    const Graph g = grid_cluster(3, 4);
    const auto star = auxiliary_star(g, 6);
    const auto aux = apply_dephasing(pure_graph_state(star.graph), 1, 0.9);
    const auto part = partition_for_target(g, 6);
    for (auto _ : state) {
        auto out = fused ? lep_step(s, aux, part, 0.998) : reference::lep_step(s, aux, part, 0.998);
        benchmark::DoNotOptimize(out.success_prob);
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_MixXor, serial, false)->Arg(1);
BENCHMARK_CAPTURE(BM_MixXor, openmp, true)->Arg(1)->Arg(2)->Arg(4)->Arg(0);
BENCHMARK_CAPTURE(BM_ParityConvolve, serial, false)->Arg(1);
BENCHMARK_CAPTURE(BM_ParityConvolve, openmp, true)->Arg(1)->Arg(2)->Arg(4)->Arg(0);
BENCHMARK_CAPTURE(BM_LocalizedConvolve, serial, false)->Arg(1);
BENCHMARK_CAPTURE(BM_LocalizedConvolve, openmp, true)->Arg(1)->Arg(2)->Arg(4)->Arg(0);
BENCHMARK_CAPTURE(BM_TcpStepGrid, reference, false)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TcpStepGrid, fused, true)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LepStepGrid, reference, false)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LepStepGrid, fused, true)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
