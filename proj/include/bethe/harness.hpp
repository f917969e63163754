#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bethe/bp.hpp"
#include "bethe/learning.hpp"
#include "bethe/marginals.hpp"
#include "bethe/model.hpp"

namespace bethe {

struct Metrics {
    /// F(p) - F(b) under the given model's parameters
    double bethe_divergence = 0.0;
    /// l2 distance of the concatenated minimal coordinates
    double euclidean_distance = 0.0;
};

Metrics metrics(const Pseudomarginals& p, const Pseudomarginals& b, const IsingModel& model);

// ---------------------------------------------------------------------------
// Unbelievable-fraction sweep

struct SweepOptions {
    int n = 8;
    std::vector<double> sigma_j_grid;
    double sigma_h = 1.0 / 3.0;
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct SweepRecord {
    double sigma_j = 0.0;
    std::size_t trials = 0;
    std::size_t n_unbelievable = 0;
    /// |lambda_min| within the classification band; counted as believable
    std::size_t n_boundary = 0;
    double fraction = 0.0;
};

/// Fully connected random models, classified at their exact marginals.
/// Trial t at every grid point uses derive_seed(seed, t).
std::vector<SweepRecord> sweep_unbelievable_fraction(const SweepOptions& options);

// ---------------------------------------------------------------------------
// Five-model comparison on unbelievable targets

inline constexpr std::array<const char*, 5> kModelTags = {"i", "ii", "iii", "iv", "v"};

struct ComparisonOptions {
    std::size_t trials = 500;
    /// draws per trial slot until an unbelievable target appears
    std::size_t attempts = 1;
    int n = 8;
    double sigma_j = 1.0 / 3.0;
    double sigma_h = 1.0 / 3.0;
    std::uint64_t seed = 0;
    LearningOptions learning;
    /// window for the exact and Gaussian ensembles
    std::size_t last = 100;
    std::size_t samples = 200;
    double variance_fraction = 0.99;
    std::size_t max_rank = 2;
    int threads = 1;
};

struct ComparisonRecord {
    std::size_t trial = 0;
    std::string model;
    double bethe_divergence = 0.0;
    double euclidean_distance = 0.0;
    double bp_converged_frac = 0.0;
};

struct QuartileSummary {
    std::string model;
    std::string metric;
    std::size_t count = 0;
    double q25 = 0.0, median = 0.0, q75 = 0.0;
};

struct ComparisonResult {
    std::vector<ComparisonRecord> records;
    std::vector<QuartileSummary> summary;
    /// trial slots that produced no unbelievable target within the attempt cap
    std::vector<std::size_t> skipped_trials;
    std::size_t targets = 0;
};

/// Per unbelievable target: (i) BP at the generating parameters, (ii) BP at
/// pseudo-moment-matching parameters, (iii) best converged beliefs met during
/// wake-sleep, (iv) exact-parameter ensemble over the last `last` iterations,
/// (v) Gaussian ensemble fitted to that window. Ensemble divergences use the
/// window's mean parameters.
ComparisonResult five_model_comparison(const ComparisonOptions& options);

/// The five models on one target given by its generating parameters; `seed`
/// drives learning and Gaussian sampling. No believability filter is applied.
std::vector<ComparisonRecord> compare_target(const IsingModel& truth, const ComparisonOptions& options, std::uint64_t seed,
                                             std::size_t trial = 0);

/// Linear-interpolation quantile of finite values; NaN when none.
double quantile(std::vector<double> values, double q);

// ---------------------------------------------------------------------------
// Trajectory projection

struct PrincipalProjection {
    /// coords[t][c]: coordinate of record t on component c
    std::vector<std::vector<double>> coords;
    std::vector<std::vector<double>> components;
    std::vector<double> variance_explained;
    std::vector<double> mean;
};

/// Centered PCA of row vectors onto the top k components.
PrincipalProjection principal_projection(const std::vector<std::vector<double>>& rows, std::size_t k);

struct TrajectoryProjection {
    std::vector<int> iters;
    PrincipalProjection theta;
    PrincipalProjection beliefs;
};

TrajectoryProjection export_trajectory_projection(const LearningTrajectory& trajectory, std::size_t k = 2);

// ---------------------------------------------------------------------------
// CSV output. Bodies contain no timestamps or thread counts.

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, const std::map<std::string, std::string>& meta);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRecord>& records,
                          const std::map<std::string, std::string>& meta);
void write_summary_csv(std::ostream& out, const std::vector<QuartileSummary>& summary);
/// iter,theta_pc1..k,belief_pc1..k
void write_projection_csv(std::ostream& out, const TrajectoryProjection& projection);
/// space,component,variance_explained,v0..v(d-1)
void write_projection_components_csv(std::ostream& out, const TrajectoryProjection& projection);

std::map<std::string, std::string> comparison_metadata(const ComparisonOptions& options);
std::map<std::string, std::string> sweep_metadata(const SweepOptions& options);

}  // namespace bethe
