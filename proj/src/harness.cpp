#include "bethe/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bethe/ensemble.hpp"
#include "bethe/error.hpp"
#include "bethe/io.hpp"
#include "bethe/linalg.hpp"
#include "bethe/parallel.hpp"
#include "bethe/pseudomarginal.hpp"
#include "bethe/rng.hpp"
#include "bethe/spectral.hpp"

namespace bethe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Euclidean distance is always defined; the divergence needs consistent
/// beliefs, which non-converged BP output may not be.
Metrics safe_metrics(const Pseudomarginals& p, const Pseudomarginals& b, const IsingModel& model) {
    try {
        return metrics(p, b, model);
    } catch (const InconsistentMarginals&) {
        return {kNaN, norm2([&] {
                    auto d = flatten(p);
                    const auto fb = flatten(b);
                    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= fb[k];
                    return d;
                }())};
    }
}

std::vector<double> window_mean_theta(const LearningTrajectory& traj, std::size_t last) {
    std::vector<double> mean(traj.graph.dimension(), 0.0);
    for (std::size_t k = traj.size() - last; k < traj.size(); ++k) {
        const auto t = traj.records[k].theta();
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += t[c];
    }
    for (auto& v : mean) v /= static_cast<double>(last);
    return mean;
}

std::uint64_t attempt_seed(std::uint64_t base, std::size_t trial, std::size_t attempt) {
    const auto s = derive_seed(base, trial);
    return attempt == 0 ? s : derive_seed(s, attempt);
}

struct TrialOutcome {
    bool found = false;
    std::vector<ComparisonRecord> records;
};

TrialOutcome run_trial(const ComparisonOptions& o, std::size_t trial) {
    TrialOutcome out;
    const Graph graph = Graph::full(o.n);
    for (std::size_t a = 0; a < std::max<std::size_t>(o.attempts, 1); ++a) {
        const auto seed = attempt_seed(o.seed, trial, a);
        const IsingModel truth = generate_random_ising(graph, o.sigma_h, o.sigma_j, seed);
        if (is_believable(graph, exact_marginals(truth)).classification != Believability::unbelievable) continue;
        out.found = true;
        out.records = compare_target(truth, o, seed, trial);
        break;
    }
    return out;
}

}  // namespace

Metrics metrics(const Pseudomarginals& p, const Pseudomarginals& b, const IsingModel& model) {
    require_shape(model.graph, p);
    require_shape(model.graph, b);
    Metrics m;
    m.bethe_divergence = bethe_free_energy(model, p) - bethe_free_energy(model, b);
    const auto fp = flatten(p), fb = flatten(b);
    double s = 0.0;
    for (std::size_t k = 0; k < fp.size(); ++k) s += (fp[k] - fb[k]) * (fp[k] - fb[k]);
    m.euclidean_distance = std::sqrt(s);
    return m;
}

std::vector<ComparisonRecord> compare_target(const IsingModel& truth, const ComparisonOptions& o, std::uint64_t seed,
                                             std::size_t trial) {
    if (o.last < 2) throw InvalidArgument("ensemble window must be at least 2");
    if (o.learning.iters < static_cast<int>(o.last)) throw InvalidArgument("learning iterations must cover the ensemble window");
    const Graph& graph = truth.graph;
    const Pseudomarginals p = exact_marginals(truth);
    std::vector<ComparisonRecord> records;
    auto push = [&](const char* tag, const Metrics& m, double conv) {
        records.push_back({trial, tag, m.bethe_divergence, m.euclidean_distance, conv});
    };

    const BPOptions& bp = o.learning.bp;
    const auto run_i = run_bp(truth, bp);
    push("i", safe_metrics(p, run_i.beliefs, truth), run_i.converged ? 1.0 : 0.0);

    const IsingModel pmm = pseudo_moment_matching(graph, p);
    const auto run_ii = run_bp(pmm, bp);
    push("ii", safe_metrics(p, run_ii.beliefs, pmm), run_ii.converged ? 1.0 : 0.0);

    LearningOptions learning = o.learning;
    learning.seed = derive_seed(seed, 1);
    const auto traj = bethe_wake_sleep(graph, p, learning);
    const auto converged_count = static_cast<double>(
        std::count_if(traj.records.begin(), traj.records.end(), [](const LearningRecord& r) { return r.converged; }));
    const double learn_conv = traj.size() ? converged_count / static_cast<double>(traj.size()) : 0.0;
    try {
        const auto best = best_beliefs(traj, p);
        const auto& rec = traj.records[best.index];
        push("iii", safe_metrics(p, best.beliefs, IsingModel(graph, rec.h, rec.J)), learn_conv);
    } catch (const NoConvergedRuns&) {
        push("iii", {kNaN, kNaN}, learn_conv);
    }

    const std::size_t last = std::min(o.last, traj.size());
    const IsingModel mean_model = IsingModel::from_theta(graph, window_mean_theta(traj, last));
    try {
        const auto exact = ebp_exact(traj, last);
        push("iv", safe_metrics(p, exact.beliefs, mean_model), static_cast<double>(exact.used) / static_cast<double>(last));
    } catch (const NoConvergedRuns&) {
        push("iv", {kNaN, kNaN}, 0.0);
    }

    const auto spec = fit_gaussian(traj, last, o.variance_fraction, o.max_rank);
    try {
        const auto gauss = ebp_gaussian(spec, graph, o.samples, derive_seed(seed, 2), bp, 1);
        push("v", safe_metrics(p, gauss.beliefs, mean_model),
             static_cast<double>(gauss.n_converged) / static_cast<double>(o.samples));
    } catch (const NoConvergedRuns&) {
        push("v", {kNaN, kNaN}, 0.0);
    }
    return records;
}

std::vector<SweepRecord> sweep_unbelievable_fraction(const SweepOptions& o) {
    if (o.sigma_j_grid.empty()) throw InvalidArgument("sigma_j grid is empty");
    if (o.trials == 0) throw InvalidArgument("need at least one trial");
    const Graph graph = Graph::full(o.n);
    const std::size_t points = o.sigma_j_grid.size();
    // 0 believable, 1 unbelievable, 2 boundary
    std::vector<int> outcome(points * o.trials, 0);
    parallel_for(outcome.size(), o.threads, [&](std::size_t job) {
        const std::size_t g = job / o.trials, t = job % o.trials;
        const IsingModel model = generate_random_ising(graph, o.sigma_h, o.sigma_j_grid[g], derive_seed(o.seed, t));
        const auto cls = is_believable(graph, exact_marginals(model)).classification;
        outcome[job] = cls == Believability::unbelievable ? 1 : cls == Believability::boundary ? 2 : 0;
    });
    std::vector<SweepRecord> records;
    for (std::size_t g = 0; g < points; ++g) {
        SweepRecord r{o.sigma_j_grid[g], o.trials, 0, 0, 0.0};
        for (std::size_t t = 0; t < o.trials; ++t) {
            const int v = outcome[g * o.trials + t];
            r.n_unbelievable += v == 1;
            r.n_boundary += v == 2;
        }
        r.fraction = static_cast<double>(r.n_unbelievable) / static_cast<double>(r.trials);
        records.push_back(r);
    }
    return records;
}

double quantile(std::vector<double> values, double q) {
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ComparisonResult five_model_comparison(const ComparisonOptions& o) {
    if (o.trials == 0) throw InvalidArgument("need at least one trial");
    if (o.last < 2) throw InvalidArgument("ensemble window must be at least 2");
    if (o.learning.iters < static_cast<int>(o.last)) throw InvalidArgument("learning iterations must cover the ensemble window");
    std::vector<TrialOutcome> outcomes(o.trials);
    parallel_for(o.trials, o.threads, [&](std::size_t t) { outcomes[t] = run_trial(o, t); });

    ComparisonResult result;
    for (std::size_t t = 0; t < o.trials; ++t) {
        if (!outcomes[t].found) {
            result.skipped_trials.push_back(t);
            continue;
        }
        ++result.targets;
        for (auto& r : outcomes[t].records) result.records.push_back(std::move(r));
    }
    for (const char* tag : kModelTags) {
        std::vector<double> div, dist;
        for (const auto& r : result.records)
            if (r.model == tag) {
                div.push_back(r.bethe_divergence);
                dist.push_back(r.euclidean_distance);
            }
        auto finite = [](const std::vector<double>& v) {
            return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return std::isfinite(x); }));
        };
        result.summary.push_back({tag, "bethe_divergence", finite(div), quantile(div, 0.25), quantile(div, 0.5), quantile(div, 0.75)});
        result.summary.push_back(
            {tag, "euclidean_distance", finite(dist), quantile(dist, 0.25), quantile(dist, 0.5), quantile(dist, 0.75)});
    }
    return result;
}

PrincipalProjection principal_projection(const std::vector<std::vector<double>>& rows, std::size_t k) {
    if (rows.size() < 2) throw InvalidArgument("projection needs at least two rows");
    const std::size_t dim = rows.front().size();
    k = std::min(k, dim);
    PrincipalProjection out;
    out.mean.assign(dim, 0.0);
    for (const auto& r : rows)
        for (std::size_t c = 0; c < dim; ++c) out.mean[c] += r[c];
    for (auto& v : out.mean) v /= static_cast<double>(rows.size());

    DenseMatrix cov(dim);
    for (const auto& r : rows)
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) cov(a, b) += (r[a] - out.mean[a]) * (r[b] - out.mean[b]);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) cov(a, b) /= static_cast<double>(rows.size() - 1);

    const auto eig = symmetric_eigen(cov);
    double total = 0.0;
    for (double v : eig.values) total += std::max(v, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t idx = dim - 1 - c;
        out.components.push_back(eig.vectors[idx]);
        out.variance_explained.push_back(total > 0.0 ? std::max(eig.values[idx], 0.0) / total : 0.0);
    }
    for (const auto& r : rows) {
        std::vector<double> coord(k, 0.0);
        if (total > 0.0)
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t a = 0; a < dim; ++a) coord[c] += (r[a] - out.mean[a]) * out.components[c][a];
        out.coords.push_back(std::move(coord));
    }
    return out;
}

TrajectoryProjection export_trajectory_projection(const LearningTrajectory& trajectory, std::size_t k) {
    if (trajectory.size() < 2) throw InvalidArgument("projection needs a trajectory of length >= 2");
    std::vector<std::vector<double>> thetas, beliefs;
    TrajectoryProjection out;
    for (const auto& rec : trajectory.records) {
        out.iters.push_back(rec.iter);
        thetas.push_back(rec.theta());
        beliefs.push_back(flatten(rec.beliefs));
    }
    out.theta = principal_projection(thetas, k);
    out.beliefs = principal_projection(beliefs, k);
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, const std::map<std::string, std::string>& meta) {
    out << io::metadata_header(meta);
    out << "sigma_j,trials,n_unbelievable,n_boundary,fraction\n";
    for (const auto& r : records)
        out << io::format_double(r.sigma_j) << ',' << r.trials << ',' << r.n_unbelievable << ',' << r.n_boundary << ','
            << io::format_double(r.fraction) << '\n';
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRecord>& records,
                          const std::map<std::string, std::string>& meta) {
    out << io::metadata_header(meta);
    out << "trial,model,bethe_divergence,euclidean_distance,bp_converged_frac\n";
    for (const auto& r : records)
        out << r.trial << ',' << r.model << ',' << io::format_double(r.bethe_divergence) << ','
            << io::format_double(r.euclidean_distance) << ',' << io::format_double(r.bp_converged_frac) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<QuartileSummary>& summary) {
    out << "model,metric,count,q25,median,q75\n";
    for (const auto& s : summary)
        out << s.model << ',' << s.metric << ',' << s.count << ',' << io::format_double(s.q25) << ','
            << io::format_double(s.median) << ',' << io::format_double(s.q75) << '\n';
}

void write_projection_csv(std::ostream& out, const TrajectoryProjection& p) {
    const std::size_t k = p.theta.components.size();
    out << "iter";
    for (std::size_t c = 0; c < k; ++c) out << ",theta_pc" << c + 1;
    for (std::size_t c = 0; c < p.beliefs.components.size(); ++c) out << ",belief_pc" << c + 1;
    out << '\n';
    for (std::size_t t = 0; t < p.iters.size(); ++t) {
        out << p.iters[t];
        for (double v : p.theta.coords[t]) out << ',' << io::format_double(v);
        for (double v : p.beliefs.coords[t]) out << ',' << io::format_double(v);
        out << '\n';
    }
}

void write_projection_components_csv(std::ostream& out, const TrajectoryProjection& p) {
    const std::size_t dim = p.theta.mean.size();
    out << "space,component,variance_explained";
    for (std::size_t a = 0; a < dim; ++a) out << ",v" << a;
    out << '\n';
    auto emit = [&](const char* space, const PrincipalProjection& proj) {
        for (std::size_t c = 0; c < proj.components.size(); ++c) {
            out << space << ',' << c + 1 << ',' << io::format_double(proj.variance_explained[c]);
            for (double v : proj.components[c]) out << ',' << io::format_double(v);
            out << '\n';
        }
    };
    emit("theta", p.theta);
    emit("belief", p.beliefs);
}

std::map<std::string, std::string> sweep_metadata(const SweepOptions& o) {
    return {{"experiment", "sweep-fraction"},
            {"n", std::to_string(o.n)},
            {"sigma_h", io::format_double(o.sigma_h)},
            {"trials", std::to_string(o.trials)},
            {"seed", std::to_string(o.seed)},
            {"rng", kRngName},
            {"classification_tol", io::format_double(kBelievabilityTol)}};
}

std::map<std::string, std::string> comparison_metadata(const ComparisonOptions& o) {
    return {{"experiment", "compare"},
            {"n", std::to_string(o.n)},
            {"trials", std::to_string(o.trials)},
            {"attempts", std::to_string(o.attempts)},
            {"sigma_j", io::format_double(o.sigma_j)},
            {"sigma_h", io::format_double(o.sigma_h)},
            {"seed", std::to_string(o.seed)},
            {"rng", kRngName},
            {"epsilon", io::format_double(o.learning.epsilon)},
            {"learn_iters", std::to_string(o.learning.iters)},
            {"theta_init", std::string(to_string(o.learning.theta_init))},
            {"message_init", std::string(to_string(o.learning.message_init))},
            {"last", std::to_string(o.last)},
            {"samples", std::to_string(o.samples)},
            {"variance_fraction", io::format_double(o.variance_fraction)},
            {"max_rank", std::to_string(o.max_rank)},
            {"damping_tau", io::format_double(o.learning.bp.damping_tau)},
            {"bp_tol", io::format_double(o.learning.bp.tol)},
            {"bp_max_iters", std::to_string(o.learning.bp.max_iters)},
            {"divergence_theta_iv_v", "window mean"}};
}

}  // namespace bethe
