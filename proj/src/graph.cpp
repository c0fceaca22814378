#include "lep/graph.hpp"

#include "lep/errors.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace lep {

Graph::Graph(int n, std::vector<std::pair<Vertex, Vertex>> edges) : n_(n) {
    if (n < 1) throw InvalidArgument("graph needs at least one vertex");
    if (n > kMaxVertices) throw InvalidArgument("graph has too many vertices");
    for (auto& [a, b] : edges) {
        if (!contains(a) || !contains(b))
            throw InvalidArgument("edge endpoint outside 1.." + std::to_string(n));
        if (a == b) throw InvalidArgument("self-loop on vertex " + std::to_string(a));
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw InvalidArgument("duplicate edge");
    edges_ = std::move(edges);

    adjacency_.assign(static_cast<std::size_t>(n_), {});
    for (const auto& [a, b] : edges_) {
        adjacency_[a - 1].push_back(b);
        adjacency_[b - 1].push_back(a);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

const std::vector<Vertex>& Graph::neighbors(Vertex v) const {
    if (!contains(v)) throw InvalidArgument("vertex " + std::to_string(v) + " not in graph");
    return adjacency_[v - 1];
}

BitString Graph::neighbor_mask(Vertex v) const {
    BitString m = 0;
    for (Vertex u : neighbors(v)) m |= vertex_bit(u);
    return m;
}

bool Graph::adjacent(Vertex a, Vertex b) const {
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

BitString Graph::all_mask() const {
    return n_ >= 64 ? ~BitString{0} : (BitString{1} << n_) - 1;
}

std::string Graph::describe() const {
    std::ostringstream os;
    os << "graph(" << n_ << ";";
    for (const auto& [a, b] : edges_) os << ' ' << a << '-' << b;
    os << ')';
    return os.str();
}

Graph linear_cluster(int n) {
    if (n < 1) throw InvalidArgument("linear cluster needs n >= 1");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

Graph grid_cluster(int rows, int cols) {
    if (rows < 1 || cols < 1) throw InvalidArgument("grid cluster needs positive dimensions");
    auto label = [cols](int r, int c) { return r * cols + c + 1; };
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(label(r, c), label(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(label(r, c), label(r + 1, c));
        }
    }
    return Graph(rows * cols, std::move(edges));
}

StarGraph ghz_star(Vertex center, std::vector<Vertex> leaves) {
    if (leaves.empty()) throw InvalidArgument("star needs at least one leaf");
    std::sort(leaves.begin(), leaves.end());
    if (std::adjacent_find(leaves.begin(), leaves.end()) != leaves.end())
        throw InvalidArgument("duplicate leaf");
    if (std::binary_search(leaves.begin(), leaves.end(), center))
        throw InvalidArgument("star center is also a leaf");

    StarGraph star;
    star.physical.push_back(center);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        star.physical.push_back(leaves[i]);
        edges.emplace_back(1, static_cast<Vertex>(i + 2));
    }
    star.graph = Graph(static_cast<int>(leaves.size() + 1), std::move(edges));
    return star;
}

StarGraph auxiliary_star(const Graph& g, Vertex t) {
    return ghz_star(t, g.neighbors(t));
}

TwoColoring two_coloring(const Graph& g) {
    std::vector<int> color(static_cast<std::size_t>(g.size()), -1);
    for (Vertex seed = 1; seed <= g.size(); ++seed) {
        if (color[seed - 1] >= 0) continue;
        color[seed - 1] = 0;
        std::queue<Vertex> frontier;
        frontier.push(seed);
        while (!frontier.empty()) {
            Vertex v = frontier.front();
            frontier.pop();
            for (Vertex u : g.neighbors(v)) {
                if (color[u - 1] < 0) {
                    color[u - 1] = 1 - color[v - 1];
                    frontier.push(u);
                } else if (color[u - 1] == color[v - 1]) {
                    throw NotTwoColorable("graph is not two-colorable (odd cycle through " +
                                          std::to_string(v) + "-" + std::to_string(u) + ")");
                }
            }
        }
    }
    TwoColoring out;
    for (Vertex v = 1; v <= g.size(); ++v) {
        if (color[v - 1] == 0) {
            out.set_a.push_back(v);
            out.mask_a |= vertex_bit(v);
        } else {
            out.set_b.push_back(v);
            out.mask_b |= vertex_bit(v);
        }
    }
    return out;
}

TargetPartition partition_for_target(const Graph& g, Vertex t) {
    if (!g.contains(t)) throw InvalidArgument("target " + std::to_string(t) + " not in graph");
    TargetPartition p;
    p.target = t;
    p.neighbors = g.neighbors(t);
    for (Vertex v = 1; v <= g.size(); ++v)
        if (v != t && !g.adjacent(t, v)) p.rest.push_back(v);
    return p;
}

FlipMask pauli_flip_mask(const Graph& g, Vertex qubit, Pauli pauli) {
    if (!g.contains(qubit)) throw InvalidArgument("qubit " + std::to_string(qubit) + " not in graph");
    BitString bits = 0;
    switch (pauli) {
        case Pauli::Z: bits = vertex_bit(qubit); break;
        case Pauli::X: bits = g.neighbor_mask(qubit); break;
        case Pauli::Y: bits = vertex_bit(qubit) | g.neighbor_mask(qubit); break;
    }
    return {bits, g.size()};
}

std::string bit_string(BitString bits, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = 0; i < width; ++i)
        if ((bits >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

std::string FlipMask::to_string() const { return bit_string(bits, width); }

}  // namespace lep
