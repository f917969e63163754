#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bethe/bp.hpp"
#include "bethe/learning.hpp"
#include "bethe/linalg.hpp"
#include "bethe/marginals.hpp"

namespace bethe {

/// Coordinate-wise mean in minimal coordinates. Since the map to moments is
/// affine this is also the mean in moment coordinates.
Pseudomarginals average_beliefs(std::span<const Pseudomarginals> beliefs);

struct EnsembleAverage {
    Pseudomarginals beliefs;
    std::size_t used = 0;
    /// non-converged iterations or samples left out of the mean
    std::size_t excluded = 0;
};

/// Mean of the converged beliefs among the final `last` learning iterations.
EnsembleAverage ebp_exact(const LearningTrajectory& trajectory, std::size_t last = 100);

/// Gaussian over concatenated (h, J) with its leading covariance eigenpairs.
struct EnsembleSpec {
    std::vector<double> theta_mean;
    DenseMatrix covariance;
    /// retained eigenvalues, descending
    std::vector<double> factor_values;
    /// unit eigenvectors matching factor_values
    std::vector<std::vector<double>> factor_vectors;
    /// share of total variance carried by the retained factors (1 when the
    /// covariance is zero)
    double variance_captured = 1.0;

    std::size_t rank() const noexcept { return factor_values.size(); }
};

EnsembleSpec fit_gaussian(std::span<const std::vector<double>> thetas, double variance_fraction = 0.99, std::size_t max_rank = 2);
/// Fit to the parameters of the final `last` learning iterations.
EnsembleSpec fit_gaussian(const LearningTrajectory& trajectory, std::size_t last, double variance_fraction = 0.99,
                          std::size_t max_rank = 2);

struct SampleDiagnostic {
    bool converged = false;
    int iterations = 0;
    double final_delta = 0.0;
};

struct GaussianEnsembleResult {
    Pseudomarginals beliefs;
    std::size_t n_converged = 0;
    std::size_t n_failed = 0;
    std::vector<SampleDiagnostic> samples;
};

/// Samples theta = mean + sum_r sqrt(lambda_r) z_r v_r with z_r ~ N(0, 1)
/// drawn from derive_seed(seed, k) for sample k, runs BP from uniform
/// messages, and averages the converged beliefs in sample order.
GaussianEnsembleResult ebp_gaussian(const EnsembleSpec& spec, const Graph& graph, std::size_t n_samples, std::uint64_t seed,
                                    const BPOptions& bp = {}, int threads = 1);

}  // namespace bethe
