#pragma once

#include <vector>

namespace bethe {

/// Minimal coordinates of a set of node and pair distributions over binary
/// spins: qi_plus[i] = q_i(x_i = +1), qij_pp[e] = q_ij(x_i = x_j = +1) for
/// the e-th edge of the owning graph. Used for exact marginals, BP beliefs
/// and arbitrary points of the local polytope alike.
struct Pseudomarginals {
    std::vector<double> qi_plus;
    std::vector<double> qij_pp;

    friend bool operator==(const Pseudomarginals&, const Pseudomarginals&) = default;
};

/// Exact marginals share the representation.
using Marginals = Pseudomarginals;

/// Expectations of the sufficient statistics: <x_i> and <x_i x_j>.
struct MomentVector {
    std::vector<double> node;
    std::vector<double> edge;
};

}  // namespace bethe
