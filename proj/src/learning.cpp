#include "bethe/learning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bethe/error.hpp"
#include "bethe/linalg.hpp"
#include "bethe/pseudomarginal.hpp"

namespace bethe {

IsingModel pseudo_moment_matching(const Graph& graph, const Pseudomarginals& p) {
    require_consistent(graph, p);
    const auto n = static_cast<std::size_t>(graph.num_nodes());
    std::vector<double> h(n, 0.0), J(graph.num_edges(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double q = p.qi_plus[i];
        if (q <= kClampFloor || 1.0 - q <= kClampFloor)
            throw BoundaryMarginals("node " + std::to_string(i) + " target is on the boundary");
        h[i] = 0.5 * (1.0 - graph.degree(static_cast<int>(i))) * std::log(q / (1.0 - q));
    }
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto c = pair_cells(graph, p, e);
        if (std::min({c.pp, c.pm, c.mp, c.mm}) <= kClampFloor)
            throw BoundaryMarginals("edge " + std::to_string(e) + " target has a zero cell");
        J[e] = 0.25 * std::log(c.pp * c.mm / (c.pm * c.mp));
        const auto [i, j] = graph.edge(e);
        h[static_cast<std::size_t>(i)] += J[e] + 0.5 * std::log(c.pm / c.mm);
        h[static_cast<std::size_t>(j)] += J[e] + 0.5 * std::log(c.mp / c.mm);
    }
    return IsingModel(graph, std::move(h), std::move(J));
}

std::string_view to_string(ThetaInit v) {
    switch (v) {
        case ThetaInit::pmm: return "pmm";
        case ThetaInit::zeros: return "zeros";
        case ThetaInit::given: return "given";
    }
    return "unknown";
}

std::string_view to_string(MessageInit v) {
    switch (v) {
        case MessageInit::fixed: return "fixed";
        case MessageInit::uniform: return "uniform";
        case MessageInit::random: return "random";
        case MessageInit::warm: return "warm";
    }
    return "unknown";
}

ThetaInit parse_theta_init(std::string_view s) {
    if (s == "pmm") return ThetaInit::pmm;
    if (s == "zeros") return ThetaInit::zeros;
    if (s == "given") return ThetaInit::given;
    throw InvalidArgument("unknown theta init '" + std::string(s) + "'");
}

MessageInit parse_message_init(std::string_view s) {
    if (s == "fixed") return MessageInit::fixed;
    if (s == "uniform") return MessageInit::uniform;
    if (s == "random") return MessageInit::random;
    if (s == "warm") return MessageInit::warm;
    throw InvalidArgument("unknown message init '" + std::string(s) + "'");
}

std::vector<double> LearningRecord::theta() const {
    std::vector<double> t(h);
    t.insert(t.end(), J.begin(), J.end());
    return t;
}

std::vector<double> moment_mismatch(const Graph& graph, const Pseudomarginals& p, const Pseudomarginals& b) {
    const auto mp = to_moments(graph, p);
    const auto mb = to_moments(graph, b);
    std::vector<double> d;
    d.reserve(graph.dimension());
    for (std::size_t i = 0; i < mp.node.size(); ++i) d.push_back(mp.node[i] - mb.node[i]);
    for (std::size_t e = 0; e < mp.edge.size(); ++e) d.push_back(mp.edge[e] - mb.edge[e]);
    return d;
}

MessageSet near_uniform_messages(const Graph& graph, Rng& rng) {
    std::uniform_real_distribution<double> jitter(-kFixedStartJitter, kFixedStartJitter);
    MessageSet m = MessageSet::uniform(graph);
    for (auto& msg : m.to_node) {
        const double d = jitter(rng);
        msg = {0.5 + d, 0.5 - d};
    }
    return m;
}

LearningTrajectory bethe_wake_sleep(const Graph& graph, const Pseudomarginals& p, const LearningOptions& options) {
    require_consistent(graph, p);
    if (!(options.epsilon > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (options.iters < 0) throw InvalidArgument("iteration count must be non-negative");

    LearningTrajectory traj{graph, p, options, {}, {}};
    switch (options.theta_init) {
        case ThetaInit::pmm: traj.final_theta = pseudo_moment_matching(graph, p).theta(); break;
        case ThetaInit::zeros: traj.final_theta.assign(graph.dimension(), 0.0); break;
        case ThetaInit::given:
            if (options.given_theta.size() != graph.dimension()) throw ShapeMismatch("given theta does not match graph");
            traj.final_theta = options.given_theta;
            break;
    }

    Rng rng(options.seed);
    BPOptions bp = options.bp;
    const MessageSet fixed_start = near_uniform_messages(graph, rng);
    std::vector<double>& theta = traj.final_theta;
    traj.records.reserve(static_cast<std::size_t>(options.iters));
    for (int t = 0; t < options.iters; ++t) {
        const IsingModel model = IsingModel::from_theta(graph, theta);
        switch (options.message_init) {
            case MessageInit::fixed: bp.init = fixed_start; break;
            case MessageInit::uniform: bp.init.reset(); break;
            case MessageInit::random: bp.init = MessageSet::random(graph, rng); break;
            case MessageInit::warm: break;  // bp.init carries the previous step's messages
        }
        BPResult run = run_bp(model, bp);

        LearningRecord rec;
        rec.iter = t;
        rec.h = model.h;
        rec.J = model.J;
        rec.converged = run.converged;
        rec.bp_iterations = run.iterations;
        rec.mismatch = moment_mismatch(graph, p, run.beliefs);
        for (double d : rec.mismatch) rec.mismatch_inf = std::max(rec.mismatch_inf, std::abs(d));
        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += options.epsilon * rec.mismatch[k];
        rec.beliefs = std::move(run.beliefs);
        if (options.message_init == MessageInit::warm) bp.init = std::move(run.messages);
        traj.records.push_back(std::move(rec));
    }
    return traj;
}

BestBeliefs best_beliefs(const LearningTrajectory& trajectory, const Pseudomarginals& p) {
    const auto target = flatten(p);
    std::optional<BestBeliefs> best;
    for (std::size_t k = 0; k < trajectory.records.size(); ++k) {
        const auto& rec = trajectory.records[k];
        if (!rec.converged) continue;
        const auto b = flatten(rec.beliefs);
        double d2 = 0.0;
        for (std::size_t c = 0; c < b.size(); ++c) d2 += (b[c] - target[c]) * (b[c] - target[c]);
        const double d = std::sqrt(d2);
        if (!best || d < best->distance) best = BestBeliefs{k, rec.beliefs, d};
    }
    if (!best) throw NoConvergedRuns("trajectory has no converged BP iterations");
    return *best;
}

EquilibriumReport detect_equilibrium(const LearningTrajectory& trajectory, std::size_t window) {
    const auto& recs = trajectory.records;
    if (window < 2 || window > recs.size())
        throw InvalidArgument("equilibrium window " + std::to_string(window) + " must lie in [2, " + std::to_string(recs.size()) + "]");
    const std::size_t start = recs.size() - window;
    const std::size_t half = window / 2;
    const std::size_t dim = trajectory.graph.dimension();

    EquilibriumReport report;
    report.mean_mismatch.assign(dim, 0.0);
    std::vector<double> first(dim, 0.0), second(dim, 0.0);
    for (std::size_t k = 0; k < window; ++k) {
        const auto& rec = recs[start + k];
        const auto theta = rec.theta();
        for (std::size_t c = 0; c < dim; ++c) {
            report.mean_mismatch[c] += rec.mismatch[c];
            if (k < half)
                first[c] += theta[c];
            else
                second[c] += theta[c];
        }
    }
    for (std::size_t c = 0; c < dim; ++c) {
        report.mean_mismatch[c] /= static_cast<double>(window);
        report.mean_mismatch_inf = std::max(report.mean_mismatch_inf, std::abs(report.mean_mismatch[c]));
        const double gap = first[c] / static_cast<double>(half) - second[c] / static_cast<double>(window - half);
        report.theta_drift = std::max(report.theta_drift, std::abs(gap));
    }
    report.equilibrated = report.mean_mismatch_inf < kEquilibriumMismatchTol && report.theta_drift < kEquilibriumDriftTol;
    return report;
}

}  // namespace bethe
