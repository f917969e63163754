import math

import pytest

import pybethe as pb


def test_exact_and_bp_on_a_tree():
    g = pb.Graph.chain(5)
    model = pb.generate_random_ising(g, 0.5, 0.5, seed=3)
    p = pb.exact_marginals(model)
    run = pb.run_bp(model)
    assert run.converged
    assert max(abs(a - b) for a, b in zip(run.beliefs.qi_plus, p.qi_plus)) < 1e-7
    assert pb.is_believable(g, p)["classification"] == "believable"


def test_four_node_threshold():
    assert pb.rho_closed_form(0.5) == pytest.approx(0.44569574320022494, abs=1e-14)
    m = pb.symmetric_four_node(0.5)
    report = pb.is_believable(m.graph, pb.exact_marginals(m))
    assert report["classification"] == "unbelievable"
    assert report["lambda_min"] < 0
    assert len(pb.bethe_hessian(m.graph, pb.exact_marginals(m))) == 10


def test_pmm_and_ensemble():
    m = pb.symmetric_four_node(0.5)
    p = pb.exact_marginals(m)
    pmm = pb.pseudo_moment_matching(m.graph, p)
    assert pmm.J[0] == pytest.approx(1.0525169555592825, abs=1e-12)
    assert max(abs(v) for v in pb.bethe_free_energy_gradient(pmm, p)) < 1e-9

    opts = pb.LearningOptions()
    opts.iters = 400
    traj = pb.bethe_wake_sleep(m.graph, p, opts)
    assert len(traj) == 400
    assert opts.message_init == "fixed"
    avg = pb.ebp_exact(traj, 100)
    assert max(abs(a - b) for a, b in zip(avg.qij_pp, p.qij_pp)) < 1e-2
    _, _, best = pb.best_beliefs(traj, p)
    assert best > 0.1
    spec = pb.fit_gaussian(traj, 100)
    assert 1 <= spec.rank <= 2
    g1 = pb.ebp_gaussian(spec, m.graph, 50, seed=1)
    g2 = pb.ebp_gaussian(spec, m.graph, 50, seed=1, threads=2)
    assert g1 == g2


def test_metrics_and_sweep():
    model = pb.generate_random_ising(pb.Graph.full(4), 0.5, 0.5, seed=1)
    p = pb.exact_marginals(model)
    div, dist = pb.metrics(p, p, model)
    assert div == 0.0 and dist == 0.0
    rows = pb.sweep_unbelievable_fraction([0.0], trials=20, seed=2)
    assert rows[0][1] == 0


def test_errors_are_typed():
    with pytest.raises(pb.InconsistentMarginals):
        pb.pseudo_moment_matching(pb.Graph.full(2), pb.Pseudomarginals([0.9, 0.9], [0.5]))
    with pytest.raises(pb.BetheError):
        pb.Graph(2, [(1, 0)])
    with pytest.raises(pb.ShapeMismatch):
        pb.IsingModel(pb.Graph.full(2), [0.0], [1.0])


def test_json_round_trip():
    model = pb.generate_random_ising(pb.Graph.full(3), 1.0, 1.0, seed=5)
    back = pb.IsingModel.from_json(model.to_json())
    assert back.theta() == model.theta()
    assert not math.isnan(pb.exact_log_partition(back))
