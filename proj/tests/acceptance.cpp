// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Run a subset with the criterion numbers as arguments, e.g. `acceptance 1 5`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bethe/bp.hpp"
#include "bethe/ensemble.hpp"
#include "bethe/harness.hpp"
#include "bethe/learning.hpp"
#include "bethe/pseudomarginal.hpp"
#include "bethe/spectral.hpp"
#include "support.hpp"

using namespace bethe;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double inf_dist(const Pseudomarginals& a, const Pseudomarginals& b) { return max_abs_diff(flatten(a), flatten(b)); }

double lambda_min_four_node(double J) {
    const auto m = symmetric_four_node(J);
    return min_eigenpair(bethe_hessian(m.graph, exact_marginals(m))).lambda_min;
}

Outcome threshold_scan() {
    int changes = 0;
    double where = NAN;
    double prev = lambda_min_four_node(0.25);
    for (int k = 1; k <= 75; ++k) {
        const double J = 0.25 + 0.002 * k;
        const double cur = lambda_min_four_node(J);
        if ((prev > 0) != (cur > 0)) {
            ++changes;
            where = J - 0.001;  // midpoint of the bracketing step
        }
        prev = cur;
    }
    return {changes == 1 && std::abs(where - 0.316) <= 0.003, fmt("%d sign change(s), at J=%.4f", changes, where)};
}

Outcome closed_form() {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double J = k / 49.0;
        worst = std::max(worst, std::abs(rho_closed_form(J) - testing::brute_force(symmetric_four_node(J)).qij[0]));
    }
    return {worst < 1e-12, fmt("max |rho - brute force| = %.2e over 50 couplings", worst)};
}

Outcome tree_exactness() {
    Rng rng(3);
    double bp_err = 0.0, pmm_err = 0.0;
    for (int t = 0; t < 25; ++t) {
        const auto tree = random_tree(2 + t % 9, rng);
        const auto m = generate_random_ising(tree, 0.5, 0.5, derive_seed(3, static_cast<std::uint64_t>(t)));
        const auto p = exact_marginals(m);
        bp_err = std::max(bp_err, inf_dist(run_bp(m).beliefs, p));
        pmm_err = std::max(pmm_err, max_abs_diff(pseudo_moment_matching(tree, p).theta(), m.theta()));
    }
    return {bp_err < 1e-7 && pmm_err < 1e-8, fmt("25 trees: BP error %.2e, pmm parameter error %.2e", bp_err, pmm_err)};
}

Outcome calculus() {
    Rng rng(4);
    double grad_err = 0.0, hess_err = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto g = testing::random_loopy_graph(3 + t % 4, rng);
        const auto model = generate_random_ising(g, 1.0, 1.0, derive_seed(4, static_cast<std::uint64_t>(t)));
        const auto q = testing::random_interior(g, rng);
        auto f = [&](const std::vector<double>& x) { return bethe_free_energy(model, unflatten(g, x)); };
        grad_err = std::max(grad_err, testing::relative_error(bethe_free_energy_gradient(model, q),
                                                              testing::fd_gradient(f, flatten(q), 1e-6)));

        const auto H = bethe_hessian(g, q).matrix;
        const std::size_t d = g.dimension();
        auto x = flatten(q);
        for (std::size_t c = 0; c < d; ++c) {
            const double x0 = x[c];
            x[c] = x0 + 1e-5;
            const auto up = bethe_free_energy_gradient(model, unflatten(g, x));
            x[c] = x0 - 1e-5;
            const auto down = bethe_free_energy_gradient(model, unflatten(g, x));
            x[c] = x0;
            std::vector<double> column(d), numeric(d);
            for (std::size_t r = 0; r < d; ++r) {
                column[r] = H(r, c);
                numeric[r] = (up[r] - down[r]) / 2e-5;
            }
            hess_err = std::max(hess_err, testing::relative_error(column, numeric));
        }
    }
    return {grad_err < 1e-5 && hess_err < 1e-4,
            fmt("100 points: gradient rel. error %.2e, Hessian rel. error %.2e", grad_err, hess_err)};
}

Outcome ensemble_four_node() {
    const auto m = symmetric_four_node(0.5);
    const auto p = exact_marginals(m);
    LearningOptions o;
    o.epsilon = 0.05;
    o.iters = 4000;
    const auto traj = bethe_wake_sleep(m.graph, p, o);
    const auto eq = detect_equilibrium(traj, 500);
    const double avg = inf_dist(ebp_exact(traj, 500).beliefs, p);
    double best = INFINITY;
    for (std::size_t k = traj.size() - 500; k < traj.size(); ++k)
        if (traj.records[k].converged) best = std::min(best, inf_dist(traj.records[k].beliefs, p));
    return {eq.equilibrated && avg < 1e-2 && best > avg,
            fmt("equilibrated=%d, ensemble error %.2e, best single %.3f", eq.equilibrated ? 1 : 0, avg, best)};
}

Outcome unbelievable_fraction() {
    SweepOptions o;
    o.sigma_j_grid = {1.0 / 3.0};
    o.trials = 500;
    const auto r = sweep_unbelievable_fraction(o).at(0);
    return {std::abs(r.fraction - 0.74) <= 0.08,
            fmt("%zu of 500 unbelievable (fraction %.3f, %zu boundary)", r.n_unbelievable, r.fraction, r.n_boundary)};
}

Outcome five_model_ordering() {
    ComparisonOptions o;
    o.trials = 100;
    o.attempts = 20;
    const auto r = five_model_comparison(o);
    auto median = [&](const char* tag) {
        for (const auto& s : r.summary)
            if (s.model == tag && s.metric == "euclidean_distance") return s.median;
        return std::nan("");
    };
    const double iii = median("iii"), iv = median("iv"), v = median("v");
    std::string all;
    for (const auto& s : r.summary)
        if (s.metric == "euclidean_distance") all += fmt(" %s=%.3g", s.model.c_str(), s.median);
    return {r.targets >= 100 && iv < v && v < iii && 10.0 * iv <= iii,
            fmt("%zu targets, median distance%s", r.targets, all.c_str())};
}

Outcome stationarity() {
    Rng rng(8);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto g = testing::random_loopy_graph(3 + t % 4, rng);
        const auto p = testing::random_interior(g, rng);
        for (double v : bethe_free_energy_gradient(pseudo_moment_matching(g, p), p)) worst = std::max(worst, std::abs(v));
    }
    return {worst < 1e-9, fmt("max |gradient| at target = %.2e over 100 targets", worst)};
}

Outcome determinism() {
    auto sweep_csv = [](int threads) {
        SweepOptions o;
        o.sigma_j_grid = {0.1, 1.0 / 3.0, 0.6};
        o.trials = 100;
        o.seed = 9;
        o.threads = threads;
        std::ostringstream os;
        write_sweep_csv(os, sweep_unbelievable_fraction(o), sweep_metadata(o));
        return os.str();
    };
    auto compare_csv = [](int threads) {
        ComparisonOptions o;
        o.trials = 4;
        o.attempts = 20;
        o.learning.iters = 300;
        o.samples = 50;
        o.seed = 9;
        o.threads = threads;
        const auto r = five_model_comparison(o);
        std::ostringstream os;
        write_comparison_csv(os, r.records, comparison_metadata(o));
        write_summary_csv(os, r.summary);
        return os.str();
    };
    const auto s1 = sweep_csv(1), s1b = sweep_csv(1), s4 = sweep_csv(4);
    const auto c1 = compare_csv(1), c1b = compare_csv(1), c4 = compare_csv(4);
    const bool ok = s1 == s1b && s1 == s4 && c1 == c1b && c1 == c4;
    return {ok, fmt("sweep: rerun %s, 4 threads %s; compare: rerun %s, 4 threads %s", s1 == s1b ? "same" : "DIFF",
                    s1 == s4 ? "same" : "DIFF", c1 == c1b ? "same" : "DIFF", c1 == c4 ? "same" : "DIFF")};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // <= 0: no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "four-node believability threshold", 5, threshold_scan},
        {2, "closed-form pair marginal", 1, closed_form},
        {3, "tree exactness", 0, tree_exactness},
        {4, "gradient and Hessian vs finite differences", 30, calculus},
        {5, "ensemble BP on the four-node target", 120, ensemble_four_node},
        {6, "unbelievable fraction at sigma_J = 1/3", 120, unbelievable_fraction},
        {7, "five-model median ordering", 1800, five_model_ordering},
        {8, "pseudo-moment matching stationarity", 10, stationarity},
        {9, "CSV determinism across runs and threads", 0, determinism},
    };
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

    int failures = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_s <= 0 || secs < c.budget_s;
        const bool pass = out.pass && in_time;
        failures += !pass;
        std::printf("[%s] %d %s: %s (%.1fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                    in_time ? "" : fmt(", over %.0fs budget", c.budget_s).c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
