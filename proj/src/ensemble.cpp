#include "bethe/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bethe/error.hpp"
#include "bethe/parallel.hpp"
#include "bethe/rng.hpp"

namespace bethe {

Pseudomarginals average_beliefs(std::span<const Pseudomarginals> beliefs) {
    if (beliefs.empty()) throw InvalidArgument("cannot average an empty list of beliefs");
    Pseudomarginals mean{std::vector<double>(beliefs.front().qi_plus.size(), 0.0),
                         std::vector<double>(beliefs.front().qij_pp.size(), 0.0)};
    for (const auto& b : beliefs) {
        if (b.qi_plus.size() != mean.qi_plus.size() || b.qij_pp.size() != mean.qij_pp.size())
            throw ShapeMismatch("beliefs in an ensemble must share a graph");
        for (std::size_t i = 0; i < b.qi_plus.size(); ++i) mean.qi_plus[i] += b.qi_plus[i];
        for (std::size_t e = 0; e < b.qij_pp.size(); ++e) mean.qij_pp[e] += b.qij_pp[e];
    }
    const auto count = static_cast<double>(beliefs.size());
    for (auto& v : mean.qi_plus) v /= count;
    for (auto& v : mean.qij_pp) v /= count;
    return mean;
}

EnsembleAverage ebp_exact(const LearningTrajectory& trajectory, std::size_t last) {
    const auto& recs = trajectory.records;
    if (last < 1 || last > recs.size())
        throw InvalidArgument("ensemble window " + std::to_string(last) + " exceeds trajectory length " + std::to_string(recs.size()));
    std::vector<Pseudomarginals> kept;
    EnsembleAverage out;
    for (std::size_t k = recs.size() - last; k < recs.size(); ++k) {
        if (recs[k].converged)
            kept.push_back(recs[k].beliefs);
        else
            ++out.excluded;
    }
    if (kept.empty()) throw NoConvergedRuns("no converged BP iterations in the final " + std::to_string(last));
    out.used = kept.size();
    out.beliefs = average_beliefs(kept);
    return out;
}

EnsembleSpec fit_gaussian(std::span<const std::vector<double>> thetas, double variance_fraction, std::size_t max_rank) {
    if (thetas.size() < 2) throw InvalidArgument("a Gaussian fit needs at least two parameter vectors");
    if (!(variance_fraction > 0.0 && variance_fraction <= 1.0)) throw InvalidArgument("variance fraction must lie in (0, 1]");
    const std::size_t dim = thetas.front().size();
    const auto count = static_cast<double>(thetas.size());

    EnsembleSpec spec;
    spec.theta_mean.assign(dim, 0.0);
    for (const auto& t : thetas) {
        if (t.size() != dim) throw ShapeMismatch("parameter vectors differ in length");
        for (std::size_t c = 0; c < dim; ++c) spec.theta_mean[c] += t[c];
    }
    for (auto& v : spec.theta_mean) v /= count;

    // unbiased sample covariance
    spec.covariance = DenseMatrix(dim);
    for (const auto& t : thetas)
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                spec.covariance(r, c) += (t[r] - spec.theta_mean[r]) * (t[c] - spec.theta_mean[c]);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) spec.covariance(r, c) /= (count - 1.0);

    if (spec.covariance.max_abs() == 0.0) return spec;

    const auto eig = symmetric_eigen(spec.covariance);
    double total = 0.0;
    for (double v : eig.values) total += std::max(v, 0.0);
    if (!(total > 0.0)) return spec;

    double captured = 0.0;
    for (std::size_t k = eig.values.size(); k-- > 0 && spec.rank() < max_rank;) {
        if (captured / total >= variance_fraction) break;
        const double lambda = std::max(eig.values[k], 0.0);
        if (lambda <= 1e-14 * total) break;
        captured += lambda;
        spec.factor_values.push_back(lambda);
        spec.factor_vectors.push_back(eig.vectors[k]);
    }
    spec.variance_captured = captured / total;
    return spec;
}

EnsembleSpec fit_gaussian(const LearningTrajectory& trajectory, std::size_t last, double variance_fraction, std::size_t max_rank) {
    const auto& recs = trajectory.records;
    if (last < 2 || last > recs.size())
        throw InvalidArgument("fit window " + std::to_string(last) + " must lie in [2, " + std::to_string(recs.size()) + "]");
    std::vector<std::vector<double>> thetas;
    thetas.reserve(last);
    for (std::size_t k = recs.size() - last; k < recs.size(); ++k) thetas.push_back(recs[k].theta());
    return fit_gaussian(thetas, variance_fraction, max_rank);
}

GaussianEnsembleResult ebp_gaussian(const EnsembleSpec& spec, const Graph& graph, std::size_t n_samples, std::uint64_t seed,
                                    const BPOptions& bp, int threads) {
    if (n_samples < 1) throw InvalidArgument("need at least one sample");
    if (spec.theta_mean.size() != graph.dimension()) throw ShapeMismatch("ensemble mean does not match graph");

    BPOptions options = bp;
    options.init.reset();
    std::vector<BPResult> runs(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        std::normal_distribution<double> z(0.0, 1.0);
        std::vector<double> theta = spec.theta_mean;
        for (std::size_t r = 0; r < spec.rank(); ++r) {
            const double scale = std::sqrt(spec.factor_values[r]) * z(rng);
            for (std::size_t c = 0; c < theta.size(); ++c) theta[c] += scale * spec.factor_vectors[r][c];
        }
        runs[k] = run_bp(IsingModel::from_theta(graph, theta), options);
    });

    GaussianEnsembleResult out;
    std::vector<Pseudomarginals> kept;
    for (const auto& run : runs) {
        out.samples.push_back({run.converged, run.iterations, run.final_delta});
        if (run.converged) {
            kept.push_back(run.beliefs);
            ++out.n_converged;
        } else {
            ++out.n_failed;
        }
    }
    if (kept.empty()) throw NoConvergedRuns("no Gaussian ensemble sample converged");
    out.beliefs = average_beliefs(kept);
    return out;
}

}  // namespace bethe
