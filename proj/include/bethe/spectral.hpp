#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "bethe/graph.hpp"
#include "bethe/linalg.hpp"
#include "bethe/marginals.hpp"

namespace bethe {

/// Second derivative of the Bethe free energy in minimal coordinates. Rows
/// and columns are the n node coordinates q_i^+ followed by the edge
/// coordinates q_ij^{++} in graph edge order.
struct BetheHessian {
    DenseMatrix matrix;
    int num_nodes = 0;
};

struct SpectralResult {
    double lambda_min = 0.0;
    /// unit norm, largest-magnitude component positive
    std::vector<double> eigvec;
    int iterations = 0;
};

enum class Believability { believable, unbelievable, boundary };

std::string_view to_string(Believability b);

struct BelievabilityResult {
    Believability classification;
    SpectralResult spectrum;
};

inline constexpr double kBelievabilityTol = 1e-9;

/// Throws BoundaryMarginals if any cell is at the clamp floor.
BetheHessian bethe_hessian(const Graph& graph, const Pseudomarginals& q);

/// Throws InvalidArgument for non-symmetric input.
SpectralResult min_eigenpair(const DenseMatrix& h);
inline SpectralResult min_eigenpair(const BetheHessian& h) { return min_eigenpair(h.matrix); }

/// Unbelievable iff lambda_min < -tol, believable iff lambda_min > tol.
/// Throws InconsistentMarginals for p outside the local polytope.
BelievabilityResult is_believable(const Graph& graph, const Pseudomarginals& p, double tol = kBelievabilityTol);

/// Unnormalised components of the symmetric eigenvector of the four-node
/// example at q_i^+ = 1/2, q_ij^{++} = rho: {node component, edge component = 1}.
/// Valid for 1/4 <= rho < 1/2.
std::pair<double, double> symmetric_four_node_eigenvector(double rho);

/// Pseudomarginals of the four-node symmetric family: q_i^+ = 1/2, q_ij^{++} = rho.
Pseudomarginals symmetric_four_node_marginals(double rho);

}  // namespace bethe
