#pragma once

// Graphs of the target entangled state and the syndrome-bit view of
// Pauli operators acting on them.
//
// Vertices are labelled 1..N. Syndrome bit i (the K_i eigenvalue bit of
// vertex i) lives at bit position i-1 of a BitString, so vertex 1 is the
// least significant bit. Bit strings are displayed as mu_1 mu_2 ... mu_N.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lep {

using Vertex = int;
using BitString = std::uint64_t;

/// Largest vertex count representable in a BitString index.
inline constexpr int kMaxVertices = 63;

constexpr BitString vertex_bit(Vertex v) { return BitString{1} << (v - 1); }

class Graph {
public:
    Graph() = default;

    /// Builds a graph on vertices 1..n. Edges may be given in either
    /// orientation; self-loops, duplicates and out-of-range endpoints throw.
    Graph(int n, std::vector<std::pair<Vertex, Vertex>> edges);

    int size() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Edges normalized to (lo, hi) and sorted lexicographically.
    const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }

    /// Sorted neighbors of v.
    const std::vector<Vertex>& neighbors(Vertex v) const;
    BitString neighbor_mask(Vertex v) const;

    bool contains(Vertex v) const { return v >= 1 && v <= n_; }
    bool adjacent(Vertex a, Vertex b) const;

    /// Mask with one bit per vertex.
    BitString all_mask() const;

    /// Short human-readable descriptor, e.g. "graph(4; 1-2 2-3 3-4)".
    std::string describe() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int n_ = 0;
    std::vector<std::pair<Vertex, Vertex>> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
};

/// Star-shaped auxiliary graph: center relabelled to 1, leaves to 2..k+1 in
/// ascending physical order. `physical[i]` is the main-graph label of local vertex i+1.
struct StarGraph {
    Graph graph;
    std::vector<Vertex> physical;

    Vertex center_physical() const { return physical.front(); }
};

struct TwoColoring {
    std::vector<Vertex> set_a;
    std::vector<Vertex> set_b;
    BitString mask_a = 0;
    BitString mask_b = 0;
};

struct TargetPartition {
    Vertex target = 0;
    std::vector<Vertex> neighbors;
    std::vector<Vertex> rest;
};

enum class Pauli { X, Y, Z };

/// Syndrome bits flipped by a single-qubit Pauli acting on a graph-basis state.
struct FlipMask {
    BitString bits = 0;
    int width = 0;

    /// Rendered as mu_1 ... mu_N, e.g. "1010".
    std::string to_string() const;

    friend bool operator==(const FlipMask&, const FlipMask&) = default;
};

Graph linear_cluster(int n);
Graph grid_cluster(int rows, int cols);
StarGraph ghz_star(Vertex center, std::vector<Vertex> leaves);

/// Auxiliary star for target `t` of `g`: center t, leaves N(t).
StarGraph auxiliary_star(const Graph& g, Vertex t);

/// Deterministic BFS coloring (lowest unvisited label seeds each component
/// into set A). Throws NotTwoColorable on an odd cycle.
TwoColoring two_coloring(const Graph& g);

TargetPartition partition_for_target(const Graph& g, Vertex t);

/// Z_i flips bit i, X_i flips the bits of N(i), Y_i flips both.
/// Phases are dropped: only diagonal mixtures are represented.
FlipMask pauli_flip_mask(const Graph& g, Vertex qubit, Pauli pauli);

/// Renders the low `width` bits of `bits` in display order.
std::string bit_string(BitString bits, int width);

}  // namespace lep
