#pragma once

// Test-only generators and oracles. Nothing here calls the code paths it is
// used to check.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bethe/graph.hpp"
#include "bethe/linalg.hpp"
#include "bethe/marginals.hpp"
#include "bethe/model.hpp"
#include "bethe/rng.hpp"

namespace bethe::testing {

/// Interior point of the local polytope: node values in [0.15, 0.85] and
/// pair values strictly inside their feasible interval.
inline Pseudomarginals random_interior(const Graph& g, Rng& rng) {
    std::uniform_real_distribution<double> node(0.15, 0.85), frac(0.1, 0.9);
    Pseudomarginals q;
    for (int i = 0; i < g.num_nodes(); ++i) q.qi_plus.push_back(node(rng));
    for (const auto& [i, j] : g.edges()) {
        const double qi = q.qi_plus[static_cast<std::size_t>(i)], qj = q.qi_plus[static_cast<std::size_t>(j)];
        const double lo = std::max(0.0, qi + qj - 1.0), hi = std::min(qi, qj);
        q.qij_pp.push_back(lo + (hi - lo) * frac(rng));
    }
    return q;
}

/// Erdos-Renyi graph with at least one cycle when n >= 3.
inline Graph random_loopy_graph(int n, Rng& rng, double p = 0.6) {
    std::bernoulli_distribution keep(p);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (keep(rng) || (n >= 3 && i == 0 && j <= 2) || (n >= 3 && i == 1 && j == 2)) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

/// Entropy, log Z and node/pair marginals by direct summation over states,
/// with no stabilisation beyond a shift by the largest exponent.
struct BruteForce {
    double log_z = 0.0;
    double entropy = 0.0;
    std::vector<double> qi;
    std::vector<double> qij;
};

inline BruteForce brute_force(const IsingModel& m) {
    const int n = m.num_nodes();
    std::vector<std::vector<int>> states;
    for (int s = 0; s < (1 << n); ++s) {
        std::vector<int> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (s >> (n - 1 - i)) & 1 ? -1 : 1;
        states.push_back(x);
    }
    std::vector<double> logw;
    double mx = -INFINITY;
    for (const auto& x : states) {
        logw.push_back(-energy(m, x));
        mx = std::max(mx, logw.back());
    }
    double z = 0.0;
    for (double l : logw) z += std::exp(l - mx);
    BruteForce out;
    out.log_z = mx + std::log(z);
    out.qi.assign(static_cast<std::size_t>(n), 0.0);
    out.qij.assign(m.num_edges(), 0.0);
    for (std::size_t s = 0; s < states.size(); ++s) {
        const double pr = std::exp(logw[s] - out.log_z);
        if (pr > 0) out.entropy -= pr * std::log(pr);
        for (int i = 0; i < n; ++i)
            if (states[s][static_cast<std::size_t>(i)] == 1) out.qi[static_cast<std::size_t>(i)] += pr;
        for (std::size_t e = 0; e < m.num_edges(); ++e) {
            const auto [i, j] = m.graph.edge(e);
            if (states[s][static_cast<std::size_t>(i)] == 1 && states[s][static_cast<std::size_t>(j)] == 1) out.qij[e] += pr;
        }
    }
    return out;
}

/// Central finite-difference gradient of f at x.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                                       double step) {
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double x0 = x[k];
        x[k] = x0 + step;
        const double up = f(x);
        x[k] = x0 - step;
        const double down = f(x);
        x[k] = x0;
        g[k] = (up - down) / (2.0 * step);
    }
    return g;
}

/// max_k |a_k - b_k| / max(1, max_k |b_k|)
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
    double err = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        err = std::max(err, std::abs(a[k] - b[k]));
        scale = std::max(scale, std::abs(b[k]));
    }
    return err / scale;
}

/// Smallest eigenvalue from Eigen's self-adjoint solver.
inline double eigen_min_eigenvalue(const DenseMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

inline IsingModel relabel(const IsingModel& m, const std::vector<int>& perm) {
    std::vector<Edge> edges;
    for (const auto& [i, j] : m.graph.edges()) edges.emplace_back(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    const auto order = canonicalize_edges(edges);
    std::vector<double> h(m.h.size()), J;
    for (std::size_t i = 0; i < m.h.size(); ++i) h[static_cast<std::size_t>(perm[i])] = m.h[i];
    for (auto k : order) J.push_back(m.J[k]);
    return IsingModel(Graph(m.num_nodes(), std::move(edges)), std::move(h), std::move(J));
}

}  // namespace bethe::testing
