#include "bethe/bp.hpp"

#include <cmath>
#include <string>

#include "bethe/error.hpp"

namespace bethe {

namespace {

using Msg = std::array<double, 2>;  // {x = +1, x = -1}

constexpr double kSpin[2] = {1.0, -1.0};

Msg normalized(Msg m) {
    const double z = m[0] + m[1];
    if (!(z > 0.0) || !std::isfinite(z)) throw NumericalError("message normaliser is zero or non-finite");
    return {m[0] / z, m[1] / z};
}

void require_messages(const Graph& graph, const MessageSet& messages) {
    if (messages.to_node.size() != 2 * graph.num_edges())
        throw ShapeMismatch("message set has " + std::to_string(messages.to_node.size()) + " entries, expected " +
                            std::to_string(2 * graph.num_edges()));
}

std::size_t slot(const Incidence& inc) { return 2 * inc.edge + (inc.first ? 0 : 1); }

/// Node-to-factor messages m_{i->e}, indexed like MessageSet (slot of the
/// receiving end replaced by the sending end): out[slot(inc)] is the message
/// node i sends into edge inc.edge.
std::vector<Msg> node_to_factor(const IsingModel& model, const MessageSet& in) {
    const Graph& g = model.graph;
    std::vector<Msg> out(in.to_node.size());
    std::vector<Msg> prefix;
    for (int i = 0; i < g.num_nodes(); ++i) {
        const auto& inc = g.incident(i);
        const double hi = model.h[static_cast<std::size_t>(i)];
        const Msg local = {std::exp(hi - std::abs(hi)), std::exp(-hi - std::abs(hi))};
        // leave-one-out products via prefix and suffix passes
        prefix.assign(inc.size() + 1, Msg{1.0, 1.0});
        for (std::size_t k = 0; k < inc.size(); ++k) {
            const auto& m = in.to_node[slot(inc[k])];
            prefix[k + 1] = {prefix[k][0] * m[0], prefix[k][1] * m[1]};
        }
        Msg suffix{1.0, 1.0};
        for (std::size_t k = inc.size(); k-- > 0;) {
            out[slot(inc[k])] = normalized({local[0] * prefix[k][0] * suffix[0], local[1] * prefix[k][1] * suffix[1]});
            const auto& m = in.to_node[slot(inc[k])];
            suffix = {suffix[0] * m[0], suffix[1] * m[1]};
        }
    }
    return out;
}

/// m_{e->target}(x_t) = sum_{x_s} exp(J x_s x_t) m_{s->e}(x_s)
Msg factor_to_node(double J, const Msg& from_source) {
    const double same = std::exp(J - std::abs(J));
    const double diff = std::exp(-J - std::abs(J));
    return normalized({same * from_source[0] + diff * from_source[1], diff * from_source[0] + same * from_source[1]});
}

}  // namespace

MessageSet MessageSet::uniform(const Graph& graph) { return {std::vector<Msg>(2 * graph.num_edges(), Msg{0.5, 0.5})}; }

MessageSet MessageSet::random(const Graph& graph, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MessageSet m{std::vector<Msg>(2 * graph.num_edges())};
    for (auto& msg : m.to_node) {
        const double p = 0.05 + 0.9 * u(rng);
        msg = {p, 1.0 - p};
    }
    return m;
}

double BPOptions::damping_factor() const { return damping_tau > 0.0 ? std::exp(-1.0 / damping_tau) : 0.0; }

BPResult run_bp(const IsingModel& model, const BPOptions& options) {
    const Graph& g = model.graph;
    BPResult result;
    result.messages = options.init ? *options.init : MessageSet::uniform(g);
    require_messages(g, result.messages);
    const double a = options.damping_factor();

    auto& msgs = result.messages.to_node;
    std::vector<Msg> next(msgs.size());
    for (int it = 1; it <= options.max_iters; ++it) {
        const auto outgoing = node_to_factor(model, result.messages);
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            next[2 * e] = factor_to_node(model.J[e], outgoing[2 * e + 1]);      // j -> e -> i
            next[2 * e + 1] = factor_to_node(model.J[e], outgoing[2 * e]);      // i -> e -> j
        }
        double delta = 0.0;
        for (std::size_t s = 0; s < msgs.size(); ++s) {
            const Msg damped = normalized({a * msgs[s][0] + (1.0 - a) * next[s][0], a * msgs[s][1] + (1.0 - a) * next[s][1]});
            delta = std::max({delta, std::abs(damped[0] - msgs[s][0]), std::abs(damped[1] - msgs[s][1])});
            msgs[s] = damped;
        }
        if (!std::isfinite(delta)) throw NumericalError("non-finite message change at iteration " + std::to_string(it));
        result.iterations = it;
        result.final_delta = delta;
        if (delta < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.beliefs = beliefs_from_messages(model, result.messages);
    return result;
}

Pseudomarginals beliefs_from_messages(const IsingModel& model, const MessageSet& messages) {
    const Graph& g = model.graph;
    require_messages(g, messages);
    Pseudomarginals b;
    b.qi_plus.resize(static_cast<std::size_t>(g.num_nodes()));
    b.qij_pp.resize(g.num_edges());

    for (int i = 0; i < g.num_nodes(); ++i) {
        const double hi = model.h[static_cast<std::size_t>(i)];
        Msg belief = normalized({std::exp(hi - std::abs(hi)), std::exp(-hi - std::abs(hi))});
        for (const auto& inc : g.incident(i)) {
            const auto& m = messages.to_node[slot(inc)];
            belief = normalized({belief[0] * m[0], belief[1] * m[1]});
        }
        b.qi_plus[static_cast<std::size_t>(i)] = belief[0];
    }

    const auto outgoing = node_to_factor(model, messages);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const double J = model.J[e];
        const Msg& from_i = outgoing[2 * e];
        const Msg& from_j = outgoing[2 * e + 1];
        double cell[2][2];
        double z = 0.0;
        for (int xi = 0; xi < 2; ++xi)
            for (int xj = 0; xj < 2; ++xj) {
                cell[xi][xj] = std::exp(J * kSpin[xi] * kSpin[xj] - std::abs(J)) * from_i[static_cast<std::size_t>(xi)] *
                               from_j[static_cast<std::size_t>(xj)];
                z += cell[xi][xj];
            }
        if (!(z > 0.0) || !std::isfinite(z)) throw NumericalError("pair belief normaliser is zero on edge " + std::to_string(e));
        b.qij_pp[e] = cell[0][0] / z;
    }
    return b;
}

}  // namespace bethe
