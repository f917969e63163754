#include "bethe/spectral.hpp"

#include <cmath>
#include <string>

#include "bethe/error.hpp"
#include "bethe/pseudomarginal.hpp"

namespace bethe {

std::string_view to_string(Believability b) {
    switch (b) {
        case Believability::believable: return "believable";
        case Believability::unbelievable: return "unbelievable";
        case Believability::boundary: return "boundary";
    }
    return "unknown";
}

BetheHessian bethe_hessian(const Graph& graph, const Pseudomarginals& q) {
    require_shape(graph, q);
    const auto n = static_cast<std::size_t>(graph.num_nodes());
    BetheHessian out{DenseMatrix(graph.dimension()), graph.num_nodes()};
    auto& H = out.matrix;

    for (std::size_t i = 0; i < n; ++i) {
        const double p = q.qi_plus[i];
        if (p <= kClampFloor || 1.0 - p <= kClampFloor)
            throw BoundaryMarginals("node " + std::to_string(i) + " marginal is on the boundary");
        H(i, i) += (1.0 - graph.degree(static_cast<int>(i))) * (1.0 / p + 1.0 / (1.0 - p));
    }
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        const auto c = pair_cells(graph, q, e);
        if (std::min({c.pp, c.pm, c.mp, c.mm}) <= kClampFloor)
            throw BoundaryMarginals("edge " + std::to_string(e) + " has a pair cell at the clamp floor");
        const auto i = static_cast<std::size_t>(graph.edge(e).first);
        const auto j = static_cast<std::size_t>(graph.edge(e).second);
        const std::size_t k = n + e;
        const double inv_pp = 1.0 / c.pp, inv_pm = 1.0 / c.pm, inv_mp = 1.0 / c.mp, inv_mm = 1.0 / c.mm;

        H(i, i) += inv_pm + inv_mm;
        H(j, j) += inv_mp + inv_mm;
        H(i, j) += inv_mm;
        H(j, i) += inv_mm;

        H(i, k) = H(k, i) = -(inv_pm + inv_mm);
        H(j, k) = H(k, j) = -(inv_mp + inv_mm);

        H(k, k) = inv_pp + inv_pm + inv_mp + inv_mm;
    }
    return out;
}

SpectralResult min_eigenpair(const DenseMatrix& h) {
    if (h.size() == 0) throw InvalidArgument("empty matrix");
    auto eig = symmetric_eigen(h);
    return {eig.values.front(), std::move(eig.vectors.front()), eig.sweeps};
}

BelievabilityResult is_believable(const Graph& graph, const Pseudomarginals& p, double tol) {
    require_consistent(graph, p);
    BelievabilityResult out{Believability::boundary, min_eigenpair(bethe_hessian(graph, p))};
    if (out.spectrum.lambda_min < -tol)
        out.classification = Believability::unbelievable;
    else if (out.spectrum.lambda_min > tol)
        out.classification = Believability::believable;
    return out;
}

std::pair<double, double> symmetric_four_node_eigenvector(double rho) {
    if (!(rho >= 0.25 && rho < 0.5)) throw InvalidArgument("rho must lie in [1/4, 1/2), got " + std::to_string(rho));
    const double r2 = rho * rho, r3 = r2 * rho, r4 = r3 * rho;
    const double disc = 10.0 - 28.0 * rho + 81.0 * r2 - 112.0 * r3 + 64.0 * r4;
    return {0.5 * (-2.0 + 7.0 * rho - 8.0 * r2 + std::sqrt(disc)), 1.0};
}

Pseudomarginals symmetric_four_node_marginals(double rho) {
    return {std::vector<double>(4, 0.5), std::vector<double>(6, rho)};
}

}  // namespace bethe
