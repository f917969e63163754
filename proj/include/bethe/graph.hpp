#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace bethe {

using Edge = std::pair<int, int>;

/// One (edge, neighbour) incidence seen from a node.
struct Incidence {
    std::size_t edge;
    int neighbour;
    /// true when the node is the first endpoint of the edge.
    bool first;
};

/// Undirected pairwise graph. Edges satisfy i < j, lie in [0, n), are unique
/// and are sorted lexicographically; every per-edge vector in the library is
/// aligned with this order.
class Graph {
public:
    Graph() = default;

    /// Throws InvalidArgument on out-of-range, self, reversed, duplicate or
    /// unsorted edges.
    Graph(int n, std::vector<Edge> edges);

    static Graph full(int n);
    static Graph chain(int n);

    int num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    /// n + |E|, the length of a minimal-coordinate vector.
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(n_) + edges_.size(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    const std::vector<Incidence>& incident(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }
    int degree(int i) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(i)].size()); }

    bool is_forest() const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

/// Sorts and validates an arbitrary edge list (each pair is reordered so that
/// i < j). Returns the permutation applied: result[k] is the input index of
/// sorted edge k.
std::vector<std::size_t> canonicalize_edges(std::vector<Edge>& edges);

}  // namespace bethe
