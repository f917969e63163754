#include "bethe/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bethe/error.hpp"

namespace bethe {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 1) throw InvalidArgument("graph needs at least one node, got " + std::to_string(n));
    adjacency_.resize(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto [i, j] = edges_[e];
        const std::string where = "edge " + std::to_string(e) + " (" + std::to_string(i) + "," + std::to_string(j) + ")";
        if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument(where + " has an endpoint outside [0, n)");
        if (i >= j) throw InvalidArgument(where + " must satisfy i < j");
        if (e > 0) {
            if (edges_[e - 1] == edges_[e]) throw InvalidArgument(where + " is a duplicate");
            if (edges_[e] < edges_[e - 1]) throw InvalidArgument(where + " breaks lexicographic order");
        }
        adjacency_[static_cast<std::size_t>(i)].push_back({e, j, true});
        adjacency_[static_cast<std::size_t>(j)].push_back({e, i, false});
    }
}

Graph Graph::full(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

Graph Graph::chain(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

bool Graph::is_forest() const {
    // union-find cycle check
    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& [i, j] : edges_) {
        const int a = find(i), b = find(j);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
    }
    return true;
}

std::vector<std::size_t> canonicalize_edges(std::vector<Edge>& edges) {
    for (auto& [i, j] : edges)
        if (i > j) std::swap(i, j);
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    std::vector<Edge> sorted;
    sorted.reserve(edges.size());
    for (auto k : order) sorted.push_back(edges[k]);
    edges = std::move(sorted);
    return order;
}

}  // namespace bethe
