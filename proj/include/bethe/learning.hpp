#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bethe/bp.hpp"
#include "bethe/marginals.hpp"
#include "bethe/model.hpp"

namespace bethe {

/// Closed-form parameters that make the target a stationary point of the
/// Bethe free energy. Throws InconsistentMarginals or BoundaryMarginals.
IsingModel pseudo_moment_matching(const Graph& graph, const Pseudomarginals& p);

enum class ThetaInit { pmm, zeros, given };
/// How BP messages are initialised on each learning step:
///  - fixed:   one near-uniform start (1/2 + d, 1/2 - d), |d| <= kFixedStartJitter,
///             drawn once from the seed and reused for every step
///  - uniform: exactly (1/2, 1/2) every step
///  - random:  a fresh random start every step
///  - warm:    continue from the previous step's messages
enum class MessageInit { fixed, uniform, random, warm };

inline constexpr double kFixedStartJitter = 0.05;

std::string_view to_string(ThetaInit v);
std::string_view to_string(MessageInit v);
ThetaInit parse_theta_init(std::string_view s);
MessageInit parse_message_init(std::string_view s);

struct LearningOptions {
    double epsilon = 0.1;
    int iters = 2000;
    ThetaInit theta_init = ThetaInit::pmm;
    /// (h, J) used when theta_init == given
    std::vector<double> given_theta;
    BPOptions bp;
    MessageInit message_init = MessageInit::fixed;
    /// consumed by MessageInit::fixed and MessageInit::random
    std::uint64_t seed = 0;
};

/// One learning step: the parameters BP ran with, the beliefs it produced,
/// and the moment mismatch eta(p) - eta(b) that drove the next update.
struct LearningRecord {
    int iter = 0;
    std::vector<double> h;
    std::vector<double> J;
    Pseudomarginals beliefs;
    bool converged = false;
    int bp_iterations = 0;
    /// nodes then edges
    std::vector<double> mismatch;
    double mismatch_inf = 0.0;

    std::vector<double> theta() const;
};

struct LearningTrajectory {
    Graph graph;
    Pseudomarginals target;
    LearningOptions options;
    std::vector<LearningRecord> records;
    /// parameters after the last update (theta_init when no step ran)
    std::vector<double> final_theta;

    std::size_t size() const noexcept { return records.size(); }
};

/// Messages (1/2 + d, 1/2 - d) with d uniform in [-kFixedStartJitter, kFixedStartJitter].
MessageSet near_uniform_messages(const Graph& graph, Rng& rng);

/// Flattened eta(p) - eta(b).
std::vector<double> moment_mismatch(const Graph& graph, const Pseudomarginals& p, const Pseudomarginals& b);

/// Bethe wake-sleep: repeat { b = BP(theta); theta += epsilon (eta(p) - eta(b)) }.
/// Iterations where BP fails to converge still update theta with their last
/// iterate and are flagged in the record.
LearningTrajectory bethe_wake_sleep(const Graph& graph, const Pseudomarginals& p, const LearningOptions& options = {});

struct BestBeliefs {
    std::size_t index;
    Pseudomarginals beliefs;
    double distance;
};

/// Converged record closest to p in Euclidean distance; earliest on ties.
/// Throws NoConvergedRuns if there is none.
BestBeliefs best_beliefs(const LearningTrajectory& trajectory, const Pseudomarginals& p);

struct EquilibriumReport {
    bool equilibrated = false;
    /// infinity norm of the windowed mean of eta(p) - eta(b)
    double mean_mismatch_inf = 0.0;
    /// largest per-coordinate gap between theta means of the window halves
    double theta_drift = 0.0;
    std::vector<double> mean_mismatch;
};

inline constexpr double kEquilibriumMismatchTol = 1e-3;
inline constexpr double kEquilibriumDriftTol = 1e-2;

/// Stationarity test over the last `window` records.
EquilibriumReport detect_equilibrium(const LearningTrajectory& trajectory, std::size_t window);

}  // namespace bethe
