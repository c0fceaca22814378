#pragma once

// Hand-rolled generators and comparison helpers for the property tests.

#include "lep/graph.hpp"
#include "lep/state.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace lep::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random probability vector of length n, with a few exact zeros mixed in.
inline std::vector<double> random_distribution(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& x : v) {
        x = uniform_int(rng, 0, 7) == 0 ? 0.0 : uniform(rng, 0.0, 1.0);
        total += x;
    }
    if (total == 0.0) {
        v[0] = 1.0;
        return v;
    }
    for (auto& x : v) x /= total;
    return v;
}

inline DiagonalState random_state(Rng& rng, const Graph& g) {
    return DiagonalState(g, random_distribution(rng, std::size_t{1} << g.size()));
}

/// Random connected bipartite graph: a random tree plus extra even-distance edges.
inline Graph random_bipartite(Rng& rng, int n) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<int> side(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 2; v <= n; ++v) {
        const Vertex p = uniform_int(rng, 1, v - 1);
        side[static_cast<std::size_t>(v)] = 1 - side[static_cast<std::size_t>(p)];
        edges.emplace_back(p, v);
    }
    for (int extra = uniform_int(rng, 0, n); extra > 0; --extra) {
        const Vertex a = uniform_int(rng, 1, n), b = uniform_int(rng, 1, n);
        if (a == b || side[static_cast<std::size_t>(a)] == side[static_cast<std::size_t>(b)]) continue;
        const auto e = std::minmax(a, b);
        if (std::find(edges.begin(), edges.end(), std::pair{e.first, e.second}) != edges.end() ||
            std::find(edges.begin(), edges.end(), std::pair{e.second, e.first}) != edges.end())
            continue;
        edges.emplace_back(e.first, e.second);
    }
    return Graph(n, edges);
}

inline NoiseSpec random_noise(Rng& rng, const Graph& g, bool gate_noise) {
    NoiseSpec n;
    n.white = uniform(rng, 0.85, 1.0);
    for (Vertex v = 1; v <= g.size(); ++v) {
        if (uniform_int(rng, 0, 2) == 0) n.dephasing[v] = uniform(rng, 0.6, 1.0);
        if (uniform_int(rng, 0, 4) == 0) n.white_override[v] = uniform(rng, 0.85, 1.0);
    }
    n.gate = gate_noise ? uniform(rng, 0.97, 1.0) : 1.0;
    return n;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace lep::test
