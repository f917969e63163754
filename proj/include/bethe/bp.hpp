#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bethe/marginals.hpp"
#include "bethe/model.hpp"
#include "bethe/rng.hpp"

namespace bethe {

/// Factor-to-node messages of a pairwise binary model. Entry 2e is the
/// message from edge e to its first endpoint, 2e + 1 to its second. Each
/// message is {m(+1), m(-1)} and sums to one.
struct MessageSet {
    std::vector<std::array<double, 2>> to_node;

    static MessageSet uniform(const Graph& graph);
    static MessageSet random(const Graph& graph, Rng& rng);

    friend bool operator==(const MessageSet&, const MessageSet&) = default;
};

struct BPOptions {
    /// Damping time constant; a = exp(-1/tau). tau <= 0 disables damping.
    double damping_tau = 5.0;
    /// Convergence when the largest single-step message change is below tol.
    double tol = 1e-9;
    int max_iters = 50000;
    /// Starting messages; uniform when empty.
    std::optional<MessageSet> init;

    double damping_factor() const;
};

struct BPResult {
    Pseudomarginals beliefs;
    bool converged = false;
    int iterations = 0;
    /// largest absolute message change on the last iteration
    double final_delta = 0.0;
    MessageSet messages;
};

/// Synchronous damped sum-product BP. Local fields are folded into the node
/// side of every message, so only pairwise factor-to-node messages are kept.
/// Non-convergence is reported through BPResult::converged; non-finite
/// messages throw NumericalError.
BPResult run_bp(const IsingModel& model, const BPOptions& options = {});

/// Node and pair beliefs of the given messages. Only fixed points are
/// guaranteed to be locally consistent; mid-run messages can give node
/// beliefs that disagree with the pair beliefs.
Pseudomarginals beliefs_from_messages(const IsingModel& model, const MessageSet& messages);

}  // namespace bethe
