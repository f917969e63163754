#include "bethe/pseudomarginal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bethe/error.hpp"

namespace bethe {

namespace {

double xlogx(double p) {
    const double c = std::max(p, kClampFloor);
    return c * std::log(c);
}

void require_interior(const Graph& graph, const Pseudomarginals& q) {
    for (std::size_t i = 0; i < q.qi_plus.size(); ++i) {
        const double p = q.qi_plus[i];
        if (p <= kClampFloor || 1.0 - p <= kClampFloor)
            throw BoundaryMarginals("node " + std::to_string(i) + " marginal " + std::to_string(p) + " is on the boundary");
    }
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto c = pair_cells(graph, q, e);
        if (std::min({c.pp, c.pm, c.mp, c.mm}) <= kClampFloor)
            throw BoundaryMarginals("edge " + std::to_string(e) + " has a pair cell at the clamp floor");
    }
}

}  // namespace

PairCells pair_cells(const Graph& graph, const Pseudomarginals& q, std::size_t e) {
    const auto [i, j] = graph.edge(e);
    const double qi = q.qi_plus[static_cast<std::size_t>(i)];
    const double qj = q.qi_plus[static_cast<std::size_t>(j)];
    const double pp = q.qij_pp[e];
    return {pp, qi - pp, qj - pp, 1.0 - qi - qj + pp};
}

void require_shape(const Graph& graph, const Pseudomarginals& q) {
    if (q.qi_plus.size() != static_cast<std::size_t>(graph.num_nodes()) || q.qij_pp.size() != graph.num_edges()) {
        std::ostringstream os;
        os << "pseudomarginals sized (" << q.qi_plus.size() << ", " << q.qij_pp.size() << ") for graph with ("
           << graph.num_nodes() << ", " << graph.num_edges() << ")";
        throw ShapeMismatch(os.str());
    }
}

std::string ConsistencyViolation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::node_below_zero: os << "q_" << index << "^+ below 0"; break;
        case Kind::node_above_one: os << "q_" << index << "^+ above 1"; break;
        case Kind::pair_below_lower: os << "edge " << index << " q^{++} below max(0, q_i + q_j - 1)"; break;
        case Kind::pair_above_upper: os << "edge " << index << " q^{++} above min(q_i, q_j)"; break;
    }
    os << " by " << magnitude;
    return os.str();
}

ConsistencyReport check_local_consistency(const Graph& graph, const Pseudomarginals& q, double tol) {
    require_shape(graph, q);
    ConsistencyReport report;
    auto flag = [&](ConsistencyViolation::Kind kind, std::size_t index, double magnitude) {
        if (magnitude > tol || std::isnan(magnitude)) report.violations.push_back({kind, index, magnitude});
    };
    using K = ConsistencyViolation::Kind;
    for (std::size_t i = 0; i < q.qi_plus.size(); ++i) {
        flag(K::node_below_zero, i, -q.qi_plus[i]);
        flag(K::node_above_one, i, q.qi_plus[i] - 1.0);
    }
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto [i, j] = graph.edge(e);
        const double qi = q.qi_plus[static_cast<std::size_t>(i)];
        const double qj = q.qi_plus[static_cast<std::size_t>(j)];
        const double lower = std::max(0.0, qi + qj - 1.0);
        const double upper = std::min(qi, qj);
        flag(K::pair_below_lower, e, lower - q.qij_pp[e]);
        flag(K::pair_above_upper, e, q.qij_pp[e] - upper);
    }
    report.ok = report.violations.empty();
    return report;
}

void require_consistent(const Graph& graph, const Pseudomarginals& q, double tol) {
    const auto report = check_local_consistency(graph, q, tol);
    if (!report.ok)
        throw InconsistentMarginals(report.violations.front().describe() + " (" + std::to_string(report.violations.size()) +
                                    " violation(s))");
}

MomentVector to_moments(const Graph& graph, const Pseudomarginals& q) {
    require_shape(graph, q);
    MomentVector m;
    m.node.resize(q.qi_plus.size());
    m.edge.resize(q.qij_pp.size());
    for (std::size_t i = 0; i < q.qi_plus.size(); ++i) m.node[i] = 2.0 * q.qi_plus[i] - 1.0;
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto [i, j] = graph.edge(e);
        m.edge[e] = 4.0 * q.qij_pp[e] - 2.0 * q.qi_plus[static_cast<std::size_t>(i)] - 2.0 * q.qi_plus[static_cast<std::size_t>(j)] + 1.0;
    }
    return m;
}

Pseudomarginals from_moments(const Graph& graph, const MomentVector& m) {
    if (m.node.size() != static_cast<std::size_t>(graph.num_nodes()) || m.edge.size() != graph.num_edges())
        throw ShapeMismatch("moment vector does not match graph");
    Pseudomarginals q;
    q.qi_plus.resize(m.node.size());
    q.qij_pp.resize(m.edge.size());
    for (std::size_t i = 0; i < m.node.size(); ++i) q.qi_plus[i] = 0.5 * (m.node[i] + 1.0);
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto [i, j] = graph.edge(e);
        q.qij_pp[e] = 0.25 * (m.edge[e] + m.node[static_cast<std::size_t>(i)] + m.node[static_cast<std::size_t>(j)] + 1.0);
    }
    return q;
}

double bethe_entropy(const Graph& graph, const Pseudomarginals& q) {
    require_consistent(graph, q);
    double s = 0.0;
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto c = pair_cells(graph, q, e);
        s -= xlogx(c.pp) + xlogx(c.pm) + xlogx(c.mp) + xlogx(c.mm);
    }
    for (int i = 0; i < graph.num_nodes(); ++i) {
        const double p = q.qi_plus[static_cast<std::size_t>(i)];
        const double node = -(xlogx(p) + xlogx(1.0 - p));
        s += (1.0 - graph.degree(i)) * node;
    }
    return s;
}

double average_energy(const IsingModel& model, const Pseudomarginals& q) {
    const auto m = to_moments(model.graph, q);
    double u = 0.0;
    for (std::size_t i = 0; i < m.node.size(); ++i) u -= model.h[i] * m.node[i];
    for (std::size_t e = 0; e < m.edge.size(); ++e) u -= model.J[e] * m.edge[e];
    return u;
}

double bethe_free_energy(const IsingModel& model, const Pseudomarginals& q) {
    return average_energy(model, q) - bethe_entropy(model.graph, q);
}

std::vector<double> bethe_free_energy_gradient(const IsingModel& model, const Pseudomarginals& q) {
    const Graph& g = model.graph;
    require_shape(g, q);
    require_interior(g, q);
    const auto n = static_cast<std::size_t>(g.num_nodes());
    std::vector<double> grad(g.dimension(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double p = q.qi_plus[i];
        grad[i] = -2.0 * model.h[i] + (1.0 - g.degree(static_cast<int>(i))) * std::log(p / (1.0 - p));
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto [i, j] = g.edge(e);
        const auto c = pair_cells(g, q, e);
        grad[n + e] = -4.0 * model.J[e] + std::log(c.pp * c.mm / (c.pm * c.mp));
        // node i sees (x_i=+, x_j=-) as pm; node j sees it as mp
        grad[static_cast<std::size_t>(i)] += 2.0 * model.J[e] + std::log(c.pm / c.mm);
        grad[static_cast<std::size_t>(j)] += 2.0 * model.J[e] + std::log(c.mp / c.mm);
    }
    return grad;
}

std::vector<double> flatten(const Pseudomarginals& q) {
    std::vector<double> v(q.qi_plus);
    v.insert(v.end(), q.qij_pp.begin(), q.qij_pp.end());
    return v;
}

Pseudomarginals unflatten(const Graph& graph, const std::vector<double>& v) {
    if (v.size() != graph.dimension()) throw ShapeMismatch("flat vector length does not match graph dimension");
    const auto n = static_cast<std::ptrdiff_t>(graph.num_nodes());
    return {std::vector<double>(v.begin(), v.begin() + n), std::vector<double>(v.begin() + n, v.end())};
}

}  // namespace bethe
