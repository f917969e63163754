#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bethe/graph.hpp"
#include "bethe/marginals.hpp"
#include "bethe/rng.hpp"

namespace bethe {

/// Binary pairwise model with energy E(x) = -sum_i h_i x_i - sum_(ij) J_ij x_i x_j
/// over spins x in {-1, +1}^n. J is aligned with graph.edges().
struct IsingModel {
    Graph graph;
    std::vector<double> h;
    std::vector<double> J;

    IsingModel() = default;
    /// Validates shapes and finiteness.
    IsingModel(Graph g, std::vector<double> fields, std::vector<double> couplings);

    int num_nodes() const noexcept { return graph.num_nodes(); }
    std::size_t num_edges() const noexcept { return graph.num_edges(); }

    /// Natural parameters concatenated as (h, J).
    std::vector<double> theta() const;
    static IsingModel from_theta(Graph g, std::span<const double> theta);
};

inline constexpr int kMaxExactNodes = 20;

/// h_i ~ Normal(0, sd sigma_h), J_ij ~ Normal(0, sd sigma_j); all h are drawn
/// before any J.
IsingModel generate_random_ising(const Graph& topology, double sigma_h, double sigma_j, std::uint64_t seed);
IsingModel generate_random_ising(int n, double sigma_h, double sigma_j, std::uint64_t seed);

/// Uniform random recursive tree: node k > 0 attaches to a uniform earlier node.
Graph random_tree(int n, Rng& rng);

double energy(const IsingModel& model, std::span<const int> spins);

struct ExactResult {
    Marginals marginals;
    double log_partition = 0.0;
};

/// Brute-force enumeration of all 2^n states with log-sum-exp stabilisation.
/// Throws CapacityError when n > kMaxExactNodes.
ExactResult exact_inference(const IsingModel& model);
Marginals exact_marginals(const IsingModel& model);
double exact_log_partition(const IsingModel& model);

/// Four fully connected nodes, zero fields, every coupling equal to J.
IsingModel symmetric_four_node(double J);

/// q_ij^{++} of symmetric_four_node(J) in closed form.
double rho_closed_form(double J);

}  // namespace bethe
