import math

import pytest

import _syncbandit as sb


def test_generate_and_roundtrip():
    inst = sb.generate_polynomial_instance(arms=6, budget=3.0, seed=4)
    assert inst.num_arms == 6
    assert inst.budget == 3.0
    text = sb.save_instance(inst)
    back = sb.load_instance(text)
    assert back.num_arms == 6
    assert sb.save_instance(back) == text


def test_cost_and_gradient():
    inst = sb.generate_poisson_instance(arms=5, budget=2.0, seed=1)
    rates = [0.4] * 5
    j = sb.policy_cost(inst, rates)
    assert j > 0.0
    grad = sb.analytic_gradient(inst, rates)
    assert len(grad) == 5
    assert all(g <= 0.0 for g in grad)


def test_oracle_beats_uniform():
    inst = sb.generate_polynomial_instance(arms=8, budget=3.2, seed=9)
    k0 = inst.constraint_set(0.0)
    star = sb.oracle_optimal_rates(inst, k0)
    assert math.isclose(sum(star), k0.budget, rel_tol=1e-8)
    assert sb.policy_cost(inst, star) <= sb.policy_cost(inst, [0.4] * 8) + 1e-9


def test_steps_and_barrier():
    k = sb.ConstraintSet(0.1, 1.9, 2.0, 2)
    init = sb.barrier_init(k)
    assert init == pytest.approx([1.0, 1.0])
    x = sb.mirror_descent_step(1.0, [-0.5, 0.0], [1.0, 1.0], k)
    assert sum(x) == pytest.approx(2.0, abs=1e-8)
    assert x[0] > x[1]
    y = sb.euclidean_projection_step(0.5, [-0.5, 0.5], [1.0, 1.0], k)
    assert sum(y) == pytest.approx(2.0, abs=1e-8)
    assert sb.div_f([2.0], [1.0]) == pytest.approx(1.0 - math.log(2.0))


def test_grad_j_sample():
    assert sb.grad_j_sample(None, 0.5, 2.0, 0.1) == 0.0
    assert sb.grad_j_sample(0.3, 0.5, 2.0, 0.1) == pytest.approx(-1.0)


def test_runs_are_deterministic():
    inst = sb.generate_polynomial_instance(arms=6, budget=3.0, seed=2)
    a = sb.run_mirrorsync(inst, eta=0.5, epsilon=0.1, rounds=10, seed=3)
    b = sb.run_mirrorsync(inst, eta=0.5, epsilon=0.1, rounds=10, seed=3)
    assert a["J"] == b["J"]
    assert a["final_rates"] == b["final_rates"]
    assert len(a["J"]) == 11

    c = sb.run_async_mirrorsync(inst, eta=0.5, epsilon=0.1, upd_period=20.0,
                                horizon=200.0, seed=3)
    d = sb.run_async_psgd(inst, eta=0.1, epsilon=0.1, upd_period=20.0,
                          horizon=200.0, seed=3, local_budget="literal")
    assert len(c["sim_time"]) == len(d["sim_time"]) == 11
    assert c["sim_time"][-1] == pytest.approx(200.0)


def test_corollary_hyperparams():
    eta, eps, bound = sb.corollary_hyperparams(40.0, 0.025, 100, 40.0, 240)
    assert eps == pytest.approx(0.22608, rel=1e-3)
    assert eta == pytest.approx(0.12776, rel=1e-3)
    assert bound == pytest.approx(6510.6, rel=1e-3)
    with pytest.raises(ValueError):
        sb.corollary_hyperparams(40.0, 0.025, 100, 40.0, 10)
