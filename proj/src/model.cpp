#include "bethe/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bethe/error.hpp"

namespace bethe {

namespace {

void require_finite(std::span<const double> v, const char* name) {
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!std::isfinite(v[k])) throw InvalidArgument(std::string(name) + "[" + std::to_string(k) + "] is not finite");
}

}  // namespace

IsingModel::IsingModel(Graph g, std::vector<double> fields, std::vector<double> couplings)
    : graph(std::move(g)), h(std::move(fields)), J(std::move(couplings)) {
    if (h.size() != static_cast<std::size_t>(graph.num_nodes()))
        throw ShapeMismatch("h has " + std::to_string(h.size()) + " entries for " + std::to_string(graph.num_nodes()) + " nodes");
    if (J.size() != graph.num_edges())
        throw ShapeMismatch("J has " + std::to_string(J.size()) + " entries for " + std::to_string(graph.num_edges()) + " edges");
    require_finite(h, "h");
    require_finite(J, "J");
}

std::vector<double> IsingModel::theta() const {
    std::vector<double> t(h);
    t.insert(t.end(), J.begin(), J.end());
    return t;
}

IsingModel IsingModel::from_theta(Graph g, std::span<const double> theta) {
    if (theta.size() != g.dimension()) throw ShapeMismatch("theta length does not match graph dimension");
    const auto n = static_cast<std::size_t>(g.num_nodes());
    std::vector<double> h(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> J(theta.begin() + static_cast<std::ptrdiff_t>(n), theta.end());
    return IsingModel(std::move(g), std::move(h), std::move(J));
}

IsingModel generate_random_ising(const Graph& topology, double sigma_h, double sigma_j, std::uint64_t seed) {
    if (!(sigma_h >= 0.0) || !(sigma_j >= 0.0)) throw InvalidArgument("standard deviations must be non-negative");
    Rng rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> h(static_cast<std::size_t>(topology.num_nodes()));
    std::vector<double> J(topology.num_edges());
    for (auto& v : h) v = sigma_h * z(rng);
    for (auto& v : J) v = sigma_j * z(rng);
    return IsingModel(topology, std::move(h), std::move(J));
}

IsingModel generate_random_ising(int n, double sigma_h, double sigma_j, std::uint64_t seed) {
    return generate_random_ising(Graph::full(n), sigma_h, sigma_j, seed);
}

Graph random_tree(int n, Rng& rng) {
    std::vector<Edge> edges;
    for (int k = 1; k < n; ++k) {
        std::uniform_int_distribution<int> parent(0, k - 1);
        edges.emplace_back(parent(rng), k);
    }
    canonicalize_edges(edges);
    return Graph(n, std::move(edges));
}

double energy(const IsingModel& model, std::span<const int> spins) {
    if (spins.size() != static_cast<std::size_t>(model.num_nodes()))
        throw ShapeMismatch("spin vector length " + std::to_string(spins.size()) + " != n");
    double e = 0.0;
    for (std::size_t i = 0; i < spins.size(); ++i) e -= model.h[i] * spins[i];
    const auto& edges = model.graph.edges();
    for (std::size_t k = 0; k < edges.size(); ++k)
        e -= model.J[k] * spins[static_cast<std::size_t>(edges[k].first)] * spins[static_cast<std::size_t>(edges[k].second)];
    return e;
}

ExactResult exact_inference(const IsingModel& model) {
    const int n = model.num_nodes();
    if (n > kMaxExactNodes)
        throw CapacityError("exact enumeration supports n <= " + std::to_string(kMaxExactNodes) + ", got n = " + std::to_string(n));
    const std::size_t states = std::size_t{1} << n;
    const auto& edges = model.graph.edges();

    // bit k of a state set <=> x_k = +1
    std::vector<double> neg_energy(states);
    double max_neg = -INFINITY;
    for (std::size_t s = 0; s < states; ++s) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += ((s >> i) & 1U) ? model.h[static_cast<std::size_t>(i)] : -model.h[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const bool same = ((s >> edges[k].first) & 1U) == ((s >> edges[k].second) & 1U);
            v += same ? model.J[k] : -model.J[k];
        }
        neg_energy[s] = v;
        max_neg = std::max(max_neg, v);
    }

    ExactResult out;
    auto& m = out.marginals;
    m.qi_plus.assign(static_cast<std::size_t>(n), 0.0);
    m.qij_pp.assign(edges.size(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
        const double w = std::exp(neg_energy[s] - max_neg);
        total += w;
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1U) m.qi_plus[static_cast<std::size_t>(i)] += w;
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (((s >> edges[k].first) & 1U) && ((s >> edges[k].second) & 1U)) m.qij_pp[k] += w;
    }
    for (auto& v : m.qi_plus) v /= total;
    for (auto& v : m.qij_pp) v /= total;
    out.log_partition = max_neg + std::log(total);
    return out;
}

Marginals exact_marginals(const IsingModel& model) { return exact_inference(model).marginals; }

double exact_log_partition(const IsingModel& model) { return exact_inference(model).log_partition; }

IsingModel symmetric_four_node(double J) {
    if (!std::isfinite(J)) throw InvalidArgument("coupling must be finite");
    return IsingModel(Graph::full(4), std::vector<double>(4, 0.0), std::vector<double>(6, J));
}

double rho_closed_form(double J) {
    const double e2 = std::exp(2.0 * J);
    const double e4 = e2 * e2;
    const double e6 = e4 * e2;
    return 1.0 / (2.0 + 4.0 / (1.0 + e2 - e4 + e6));
}

}  // namespace bethe
