#include <cmath>

#include "doctest.h"

#include "bethe/bp.hpp"
#include "bethe/ensemble.hpp"
#include "bethe/error.hpp"
#include "bethe/learning.hpp"
#include "bethe/pseudomarginal.hpp"
#include "support.hpp"

using namespace bethe;

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

LearningRecord fake_record(int iter, Pseudomarginals b, bool converged) {
    LearningRecord r;
    r.iter = iter;
    r.h.assign(b.qi_plus.size(), 0.0);
    r.J.assign(b.qij_pp.size(), 0.0);
    r.beliefs = std::move(b);
    r.converged = converged;
    return r;
}

}  // namespace

TEST_CASE("pseudo_moment_matching closed form") {
    const Graph g = Graph::full(4);
    const auto zero = pseudo_moment_matching(g, Pseudomarginals{std::vector<double>(4, 0.5), std::vector<double>(6, 0.25)});
    for (double v : zero.theta()) CHECK(std::abs(v) < 1e-15);

    const IsingModel two(Graph::full(2), {0, 0}, {0.5});
    const auto rec = pseudo_moment_matching(two.graph, exact_marginals(two));
    CHECK(max_abs_diff(rec.theta(), two.theta()) < 1e-10);

    // 1/2 log(rho / (1/2 - rho)) at rho(0.5); mpmath: 1.0525169555592825
    const auto p = exact_marginals(symmetric_four_node(0.5));
    const auto pmm = pseudo_moment_matching(g, p);
    for (double h : pmm.h) CHECK(std::abs(h) < 1e-12);
    for (double J : pmm.J) CHECK(J == doctest::Approx(1.0525169555592825).epsilon(1e-12));
    CHECK(inf_norm(bethe_free_energy_gradient(pmm, p)) < 1e-9);

    // p is a stationary point but an unstable one: BP started near (not on)
    // the symmetric messages runs away from it
    Rng rng(3);
    BPOptions o;
    o.init = near_uniform_messages(g, rng);
    const auto run = run_bp(pmm, o);
    CHECK(run.converged);
    CHECK(max_abs_diff(flatten(run.beliefs), flatten(p)) > 0.1);

    CHECK_THROWS_AS(pseudo_moment_matching(Graph::full(2), Pseudomarginals{{0.5, 0.5}, {0.5}}), BoundaryMarginals);
    CHECK_THROWS_AS(pseudo_moment_matching(Graph::full(2), Pseudomarginals{{0.9, 0.9}, {0.5}}), InconsistentMarginals);
}

TEST_CASE("pseudo_moment_matching zeroes the Bethe gradient") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testing::random_loopy_graph(3 + trial % 4, rng);
        const auto p = testing::random_interior(g, rng);
        CHECK(inf_norm(bethe_free_energy_gradient(pseudo_moment_matching(g, p), p)) < 1e-9);
    }
}

TEST_CASE("pseudo_moment_matching recovers tree parameters") {
    Rng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const auto tree = random_tree(2 + trial % 9, rng);
        const auto m = generate_random_ising(tree, 0.5, 0.5, derive_seed(42, static_cast<std::uint64_t>(trial)));
        CHECK(max_abs_diff(pseudo_moment_matching(tree, exact_marginals(m)).theta(), m.theta()) < 1e-8);
    }
}

TEST_CASE("wake-sleep with no iterations") {
    const auto m = symmetric_four_node(0.5);
    const auto p = exact_marginals(m);
    LearningOptions o;
    o.iters = 0;
    o.epsilon = 3.7;
    const auto t = bethe_wake_sleep(m.graph, p, o);
    CHECK(t.size() == 0);
    CHECK(t.final_theta == pseudo_moment_matching(m.graph, p).theta());
    o.theta_init = ThetaInit::zeros;
    CHECK(bethe_wake_sleep(m.graph, p, o).final_theta == std::vector<double>(10, 0.0));
    o.theta_init = ThetaInit::given;
    o.given_theta = m.theta();
    CHECK(bethe_wake_sleep(m.graph, p, o).final_theta == m.theta());
    o.epsilon = 0.0;
    CHECK_THROWS_AS(bethe_wake_sleep(m.graph, p, o), InvalidArgument);
}

TEST_CASE("wake-sleep learns a believable tree target") {
    Rng rng(43);
    const auto tree = random_tree(6, rng);
    const auto m = generate_random_ising(tree, 0.5, 0.5, 43);
    const auto p = exact_marginals(m);
    LearningOptions o;
    o.epsilon = 0.2;
    o.iters = 2000;
    o.theta_init = ThetaInit::zeros;
    const auto t = bethe_wake_sleep(tree, p, o);
    CHECK(t.records.back().mismatch_inf < 1e-8);
    CHECK(max_abs_diff(t.final_theta, m.theta()) < 1e-4);
    CHECK(t.size() == 2000);
    CHECK(detect_equilibrium(t, 100).equilibrated);
    // monotone improvement: the best converged record is at the tail
    const auto best = best_beliefs(t, p);
    CHECK(best.distance < 1e-8);
}

TEST_CASE("wake-sleep on the unbelievable four-node target") {
    const auto m = symmetric_four_node(0.5);
    const auto p = exact_marginals(m);
    LearningOptions o;
    o.epsilon = 0.1;
    o.iters = 1000;
    const auto t = bethe_wake_sleep(m.graph, p, o);

    CHECK(t.records.back().mismatch_inf > 0.1);
    double max_theta = 0.0;
    for (const auto& r : t.records) max_theta = std::max(max_theta, inf_norm(r.theta()));
    CHECK(max_theta < 5.0);

    const auto eq = detect_equilibrium(t, 100);
    CHECK(eq.equilibrated);
    CHECK(eq.mean_mismatch_inf < 1e-3);
    CHECK(max_abs_diff(flatten(ebp_exact(t, 100).beliefs), flatten(p)) < 1e-2);
    CHECK(best_beliefs(t, p).distance > 0.0);
}

TEST_CASE("a too-large learning rate is not mistaken for equilibrium") {
    const auto m = symmetric_four_node(0.5);
    LearningOptions o;
    o.epsilon = 5.0;
    o.iters = 300;
    o.theta_init = ThetaInit::zeros;
    const auto eq = detect_equilibrium(bethe_wake_sleep(m.graph, exact_marginals(m), o), 100);
    CHECK_FALSE(eq.equilibrated);
    CHECK(eq.theta_drift > kEquilibriumDriftTol);
}

TEST_CASE("the update is minus epsilon times the Bethe-divergence gradient") {
    // On a tree the BP fixed point is unique, so D(theta) = F_theta(p) - F_theta(b(theta))
    // is a function of theta alone; the learning rule drops the db/dtheta term.
    Rng rng(44);
    const auto tree = random_tree(5, rng);
    const auto truth = generate_random_ising(tree, 0.5, 0.5, 44);
    const auto p = exact_marginals(truth);
    const auto start = generate_random_ising(tree, 0.5, 0.5, 45);

    BPOptions tight;
    tight.tol = 1e-14;
    auto divergence = [&](const std::vector<double>& theta) {
        const auto model = IsingModel::from_theta(tree, theta);
        return bethe_free_energy(model, p) - bethe_free_energy(model, run_bp(model, tight).beliefs);
    };
    const auto numeric = testing::fd_gradient(divergence, start.theta(), 1e-5);

    LearningOptions o;
    o.epsilon = 0.1;
    o.iters = 1;
    o.theta_init = ThetaInit::given;
    o.given_theta = start.theta();
    o.bp = tight;
    const auto t = bethe_wake_sleep(tree, p, o);
    std::vector<double> step(numeric.size()), expected(numeric.size());
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        step[k] = t.final_theta[k] - start.theta()[k];
        expected[k] = -o.epsilon * numeric[k];
    }
    double err = 0.0;
    for (std::size_t k = 0; k < step.size(); ++k) err = std::max(err, std::abs(step[k] - expected[k]));
    CHECK(err / inf_norm(expected) < 1e-3);
}

TEST_CASE("the update is linear in epsilon") {
    const auto m = generate_random_ising(6, 1.0 / 3, 1.0 / 3, 46);
    const auto p = exact_marginals(m);
    LearningOptions o;
    o.iters = 1;
    o.epsilon = 0.05;
    const auto a = bethe_wake_sleep(m.graph, p, o);
    o.epsilon = 0.1;
    const auto b = bethe_wake_sleep(m.graph, p, o);
    REQUIRE(a.records[0].beliefs == b.records[0].beliefs);
    const auto theta0 = a.records[0].theta();
    for (std::size_t k = 0; k < theta0.size(); ++k)
        CHECK((b.final_theta[k] - theta0[k]) == doctest::Approx(2.0 * (a.final_theta[k] - theta0[k])).epsilon(1e-12));
}

TEST_CASE("message initialisation policies") {
    const auto m = generate_random_ising(5, 1.0 / 3, 0.5, 47);
    const auto p = exact_marginals(m);
    for (auto init : {MessageInit::fixed, MessageInit::uniform, MessageInit::random, MessageInit::warm}) {
        LearningOptions o;
        o.iters = 50;
        o.message_init = init;
        o.seed = 9;
        const auto a = bethe_wake_sleep(m.graph, p, o);
        const auto b = bethe_wake_sleep(m.graph, p, o);
        CHECK(a.final_theta == b.final_theta);
        CHECK(parse_message_init(to_string(init)) == init);
    }
    CHECK_THROWS_AS(parse_message_init("sideways"), InvalidArgument);
}

TEST_CASE("best_beliefs") {
    LearningTrajectory t;
    t.graph = Graph::full(2);
    const Pseudomarginals p{{0.6, 0.4}, {0.3}};
    t.records.push_back(fake_record(0, {{0.5, 0.5}, {0.25}}, true));
    t.records.push_back(fake_record(1, p, true));
    t.records.push_back(fake_record(2, p, true));
    t.records.push_back(fake_record(3, {{0.6, 0.4}, {0.3}}, false));
    const auto best = best_beliefs(t, p);
    CHECK(best.index == 1);
    CHECK(best.distance == 0.0);

    for (auto& r : t.records) r.converged = false;
    CHECK_THROWS_AS(best_beliefs(t, p), NoConvergedRuns);
}

TEST_CASE("detect_equilibrium window checks") {
    LearningTrajectory t;
    t.graph = Graph::full(2);
    for (int k = 0; k < 5; ++k) {
        auto r = fake_record(k, {{0.5, 0.5}, {0.25}}, true);
        r.mismatch.assign(3, 0.0);
        t.records.push_back(r);
    }
    CHECK(detect_equilibrium(t, 5).equilibrated);
    CHECK_THROWS_AS(detect_equilibrium(t, 6), InvalidArgument);
    CHECK_THROWS_AS(detect_equilibrium(t, 1), InvalidArgument);
}
