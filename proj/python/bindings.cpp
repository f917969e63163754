#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bethe/bp.hpp"
#include "bethe/ensemble.hpp"
#include "bethe/error.hpp"
#include "bethe/harness.hpp"
#include "bethe/io.hpp"
#include "bethe/learning.hpp"
#include "bethe/model.hpp"
#include "bethe/pseudomarginal.hpp"
#include "bethe/spectral.hpp"

namespace py = pybind11;
using namespace bethe;

namespace {

std::vector<std::vector<double>> to_rows(const DenseMatrix& m) {
    std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m.size(); ++c) rows[r][c] = m(r, c);
    return rows;
}

}  // namespace

PYBIND11_MODULE(pybethe, m) {
    m.doc() = "Loopy BP, Bethe free energy, believability and ensemble BP for Ising models";

    auto base = py::register_exception<Error>(m, "BetheError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<ShapeMismatch>(m, "ShapeMismatch", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<InconsistentMarginals>(m, "InconsistentMarginals", base.ptr());
    py::register_exception<BoundaryMarginals>(m, "BoundaryMarginals", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<NoConvergedRuns>(m, "NoConvergedRuns", base.ptr());

    py::class_<Graph>(m, "Graph")
        .def(py::init<int, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
        .def_static("full", &Graph::full)
        .def_static("chain", &Graph::chain)
        .def_property_readonly("num_nodes", &Graph::num_nodes)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def_property_readonly("edges", &Graph::edges)
        .def("degree", &Graph::degree)
        .def("is_forest", &Graph::is_forest)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.num_nodes()) + ", edges=" + std::to_string(g.num_edges()) + ")";
        });

    py::class_<Pseudomarginals>(m, "Pseudomarginals")
        .def(py::init<>())
        .def(py::init([](std::vector<double> qi, std::vector<double> qij) { return Pseudomarginals{std::move(qi), std::move(qij)}; }),
             py::arg("qi_plus"), py::arg("qij_pp"))
        .def_readwrite("qi_plus", &Pseudomarginals::qi_plus)
        .def_readwrite("qij_pp", &Pseudomarginals::qij_pp)
        .def("__eq__", [](const Pseudomarginals& a, const Pseudomarginals& b) { return a == b; });

    py::class_<IsingModel>(m, "IsingModel")
        .def(py::init<Graph, std::vector<double>, std::vector<double>>(), py::arg("graph"), py::arg("h"), py::arg("J"))
        .def_readonly("graph", &IsingModel::graph)
        .def_readonly("h", &IsingModel::h)
        .def_readonly("J", &IsingModel::J)
        .def("theta", &IsingModel::theta)
        .def_static("from_theta", [](const Graph& g, const std::vector<double>& t) { return IsingModel::from_theta(g, t); })
        .def("to_json", [](const IsingModel& model) { return io::to_json(model).dump(); })
        .def_static("from_json", [](const std::string& s) { return io::model_from_json(io::json::parse(s)); });

    m.def("generate_random_ising",
          py::overload_cast<const Graph&, double, double, std::uint64_t>(&generate_random_ising), py::arg("graph"),
          py::arg("sigma_h"), py::arg("sigma_j"), py::arg("seed"));
    m.def("symmetric_four_node", &symmetric_four_node, py::arg("J"));
    m.def("rho_closed_form", &rho_closed_form, py::arg("J"));
    m.def("exact_marginals", &exact_marginals);
    m.def("exact_log_partition", &exact_log_partition);

    m.def("is_consistent", [](const Graph& g, const Pseudomarginals& q, double tol) { return check_local_consistency(g, q, tol).ok; },
          py::arg("graph"), py::arg("q"), py::arg("tol") = kConsistencyTol);
    m.def("bethe_entropy", &bethe_entropy);
    m.def("bethe_free_energy", &bethe_free_energy);
    m.def("bethe_free_energy_gradient", &bethe_free_energy_gradient);
    m.def("bethe_hessian", [](const Graph& g, const Pseudomarginals& q) { return to_rows(bethe_hessian(g, q).matrix); });
    m.def(
        "is_believable",
        [](const Graph& g, const Pseudomarginals& p, double tol) {
            const auto r = is_believable(g, p, tol);
            py::dict d;
            d["classification"] = std::string(to_string(r.classification));
            d["lambda_min"] = r.spectrum.lambda_min;
            d["eigvec"] = r.spectrum.eigvec;
            return d;
        },
        py::arg("graph"), py::arg("p"), py::arg("tol") = kBelievabilityTol);

    py::class_<BPOptions>(m, "BPOptions")
        .def(py::init<>())
        .def_readwrite("damping_tau", &BPOptions::damping_tau)
        .def_readwrite("tol", &BPOptions::tol)
        .def_readwrite("max_iters", &BPOptions::max_iters);

    py::class_<BPResult>(m, "BPResult")
        .def_readonly("beliefs", &BPResult::beliefs)
        .def_readonly("converged", &BPResult::converged)
        .def_readonly("iterations", &BPResult::iterations)
        .def_readonly("final_delta", &BPResult::final_delta);

    m.def("run_bp", &run_bp, py::arg("model"), py::arg("options") = BPOptions{});
    m.def("pseudo_moment_matching", &pseudo_moment_matching, py::arg("graph"), py::arg("p"));

    py::class_<LearningOptions>(m, "LearningOptions")
        .def(py::init<>())
        .def_readwrite("epsilon", &LearningOptions::epsilon)
        .def_readwrite("iters", &LearningOptions::iters)
        .def_readwrite("bp", &LearningOptions::bp)
        .def_readwrite("seed", &LearningOptions::seed)
        .def_property(
            "theta_init", [](const LearningOptions& o) { return std::string(to_string(o.theta_init)); },
            [](LearningOptions& o, const std::string& s) { o.theta_init = parse_theta_init(s); })
        .def_property(
            "message_init", [](const LearningOptions& o) { return std::string(to_string(o.message_init)); },
            [](LearningOptions& o, const std::string& s) { o.message_init = parse_message_init(s); })
        .def_readwrite("given_theta", &LearningOptions::given_theta);

    py::class_<LearningRecord>(m, "LearningRecord")
        .def_readonly("iter", &LearningRecord::iter)
        .def_readonly("h", &LearningRecord::h)
        .def_readonly("J", &LearningRecord::J)
        .def_readonly("beliefs", &LearningRecord::beliefs)
        .def_readonly("converged", &LearningRecord::converged)
        .def_readonly("mismatch_inf", &LearningRecord::mismatch_inf)
        .def("theta", &LearningRecord::theta);

    py::class_<LearningTrajectory>(m, "LearningTrajectory")
        .def_readonly("graph", &LearningTrajectory::graph)
        .def_readonly("target", &LearningTrajectory::target)
        .def_readonly("records", &LearningTrajectory::records)
        .def_readonly("final_theta", &LearningTrajectory::final_theta)
        .def("__len__", &LearningTrajectory::size);

    m.def("bethe_wake_sleep", &bethe_wake_sleep, py::arg("graph"), py::arg("p"), py::arg("options") = LearningOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "detect_equilibrium",
        [](const LearningTrajectory& t, std::size_t window) {
            const auto r = detect_equilibrium(t, window);
            py::dict d;
            d["equilibrated"] = r.equilibrated;
            d["mean_mismatch_inf"] = r.mean_mismatch_inf;
            d["theta_drift"] = r.theta_drift;
            return d;
        },
        py::arg("trajectory"), py::arg("window"));
    m.def(
        "best_beliefs",
        [](const LearningTrajectory& t, const Pseudomarginals& p) {
            const auto b = best_beliefs(t, p);
            return py::make_tuple(b.index, b.beliefs, b.distance);
        },
        py::arg("trajectory"), py::arg("p"));

    m.def("average_beliefs", [](const std::vector<Pseudomarginals>& qs) { return average_beliefs(qs); });
    m.def(
        "ebp_exact", [](const LearningTrajectory& t, std::size_t last) { return ebp_exact(t, last).beliefs; }, py::arg("trajectory"),
        py::arg("last") = 100);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def_readonly("theta_mean", &EnsembleSpec::theta_mean)
        .def_readonly("factor_values", &EnsembleSpec::factor_values)
        .def_readonly("factor_vectors", &EnsembleSpec::factor_vectors)
        .def_readonly("variance_captured", &EnsembleSpec::variance_captured)
        .def_property_readonly("rank", &EnsembleSpec::rank);

    m.def(
        "fit_gaussian",
        [](const LearningTrajectory& t, std::size_t last, double fraction, std::size_t max_rank) {
            return fit_gaussian(t, last, fraction, max_rank);
        },
        py::arg("trajectory"), py::arg("last") = 100, py::arg("variance_fraction") = 0.99, py::arg("max_rank") = 2);
    m.def(
        "ebp_gaussian",
        [](const EnsembleSpec& spec, const Graph& g, std::size_t n, std::uint64_t seed, const BPOptions& bp, int threads) {
            return ebp_gaussian(spec, g, n, seed, bp, threads).beliefs;
        },
        py::arg("spec"), py::arg("graph"), py::arg("n_samples") = 200, py::arg("seed") = 0, py::arg("bp") = BPOptions{},
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

    m.def(
        "metrics",
        [](const Pseudomarginals& p, const Pseudomarginals& b, const IsingModel& model) {
            const auto r = metrics(p, b, model);
            return py::make_tuple(r.bethe_divergence, r.euclidean_distance);
        },
        py::arg("p"), py::arg("b"), py::arg("model"));
    m.def(
        "sweep_unbelievable_fraction",
        [](std::vector<double> grid, int n, double sigma_h, std::size_t trials, std::uint64_t seed, int threads) {
            SweepOptions o;
            o.sigma_j_grid = std::move(grid);
            o.n = n;
            o.sigma_h = sigma_h;
            o.trials = trials;
            o.seed = seed;
            o.threads = threads;
            std::vector<std::tuple<double, std::size_t, std::size_t, double>> out;
            for (const auto& r : sweep_unbelievable_fraction(o)) out.emplace_back(r.sigma_j, r.n_unbelievable, r.n_boundary, r.fraction);
            return out;
        },
        py::arg("sigma_j_grid"), py::arg("n") = 8, py::arg("sigma_h") = 1.0 / 3.0, py::arg("trials") = 500, py::arg("seed") = 0,
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
}
