#pragma once

#include <string>
#include <vector>

#include "bethe/graph.hpp"
#include "bethe/marginals.hpp"
#include "bethe/model.hpp"

namespace bethe {

/// Floor applied to every probability entering a logarithm or reciprocal.
inline constexpr double kClampFloor = 1e-12;

/// Tolerance used when an operation rejects inconsistent input.
inline constexpr double kConsistencyTol = 1e-9;

/// The four cells of a pair distribution, reconstructed from minimal
/// coordinates. `pm` is (first endpoint +, second endpoint -).
struct PairCells {
    double pp, pm, mp, mm;
};

PairCells pair_cells(const Graph& graph, const Pseudomarginals& q, std::size_t e);

/// Throws ShapeMismatch unless q is sized for graph.
void require_shape(const Graph& graph, const Pseudomarginals& q);

struct ConsistencyViolation {
    enum class Kind { node_below_zero, node_above_one, pair_below_lower, pair_above_upper };
    Kind kind;
    /// node index or edge index depending on kind
    std::size_t index;
    /// distance outside the feasible interval
    double magnitude;

    std::string describe() const;
};

struct ConsistencyReport {
    bool ok = true;
    std::vector<ConsistencyViolation> violations;
};

/// Box constraints of the local polytope:
///   0 <= q_i^+ <= 1,  max(0, q_i^+ + q_j^+ - 1) <= q_ij^{++} <= min(q_i^+, q_j^+).
ConsistencyReport check_local_consistency(const Graph& graph, const Pseudomarginals& q, double tol);

/// Throws InconsistentMarginals listing the first violation.
void require_consistent(const Graph& graph, const Pseudomarginals& q, double tol = kConsistencyTol);

MomentVector to_moments(const Graph& graph, const Pseudomarginals& q);
Pseudomarginals from_moments(const Graph& graph, const MomentVector& m);

/// Pair entropies plus (1 - d_i)-weighted node entropies.
double bethe_entropy(const Graph& graph, const Pseudomarginals& q);

/// U = -theta . eta.
double average_energy(const IsingModel& model, const Pseudomarginals& q);

double bethe_free_energy(const IsingModel& model, const Pseudomarginals& q);

/// dF/dq in minimal coordinates, nodes first then edges. Throws
/// BoundaryMarginals if any reconstructed cell is at the clamp floor.
std::vector<double> bethe_free_energy_gradient(const IsingModel& model, const Pseudomarginals& q);

/// Concatenated (qi_plus, qij_pp).
std::vector<double> flatten(const Pseudomarginals& q);
Pseudomarginals unflatten(const Graph& graph, const std::vector<double>& v);

}  // namespace bethe
