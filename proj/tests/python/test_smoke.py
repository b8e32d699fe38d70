import json
import math

import numpy as np
import pytest

import forgetting_lab as fl


def test_linalg_examples():
    p = fl.pseudo_inverse(np.array([[3.0, 4.0]]))
    assert np.allclose(p, [[3 / 25], [4 / 25]])
    n = fl.null_projection(np.array([[1.0, 1.0]]) / math.sqrt(2))
    assert np.allclose(n, [[0.5, -0.5], [-0.5, 0.5]])
    a = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    b = np.array([[1.0, 0.0], [0.0, 1 / math.sqrt(2)], [0.0, 1 / math.sqrt(2)]])
    angles = fl.principal_angles(a, b)
    assert np.allclose(angles, [0.0, math.pi / 4], atol=1e-12)
    assert fl.friedrichs_angle(angles) == pytest.approx(math.pi / 4)
    assert fl.friedrichs_angle(np.zeros(2)) is None
    u, s, v, rank = fl.svd(np.diag([2.0, 0.0]))
    assert rank == 1
    assert np.allclose(s, [2.0, 0.0])


def test_collection_validation_and_solution():
    h = 1 / math.sqrt(2)
    tasks = [fl.Task(np.array([[1.0, 0.0]]), np.array([0.6])),
             fl.Task(np.array([[h, h]]), np.array([0.6 * h + 0.8 * h]))]
    s = fl.TaskCollection(tasks)
    assert len(s) == 2
    assert s.validation.passed
    assert np.allclose(fl.min_norm_solution(s), [0.6, 0.8])
    doc = json.loads(s.to_json())
    assert doc["schema"] == "forgetting-lab/collection/v1"

    bad = fl.TaskCollection([fl.Task(np.array([[1.0, 0.0]]), np.array([1.0])),
                             fl.Task(np.array([[1.0, 0.0]]), np.array([-1.0]))])
    assert not bad.validation.realizable
    with pytest.raises(fl.Infeasible):
        fl.min_norm_solution(bad)


def test_run_and_forgetting():
    h = 1 / math.sqrt(2)
    s = fl.TaskCollection([fl.Task(np.array([[1.0, 0.0]]), np.array([0.6])),
                           fl.Task(np.array([[h, h]]), np.array([1.4 * h]))])
    r = fl.run(s, 2, ordering="identity")
    assert r["sequence"] == [1, 2]
    assert r["forgetting"] == pytest.approx(0.08)
    assert r["forgetting"] <= r["residual_bound"] + 1e-12
    assert fl.forgetting_at(r["iterates"][-1], [1, 2], s) == pytest.approx(0.08)
    step = fl.fit_step(np.array([1.0, 0.0]), fl.Task(np.array([[h, h]]), np.array([0.0])))
    assert np.allclose(step, [0.5, -0.5])


def test_run_projected_matches_run():
    s = fl.back_and_forth(4, 16)
    r = fl.run(s, 16, ordering="random", seed=3)
    w = fl.run_projected(s.offline_solution, [t.projection for t in s.tasks], r["sequence"])
    assert np.allclose(w, r["iterates"][-1], atol=1e-7)


def test_constructions_and_bounds():
    for k in (2, 4, 10):
        r = fl.run(fl.two_task_collection(math.pi / 4), k)
        assert r["forgetting"] == pytest.approx(fl.two_task_forgetting_bound(k, [math.pi / 4]), abs=1e-8)
    value, angle = fl.two_task_worst_case(2)
    assert value == pytest.approx(0.125)
    assert angle == pytest.approx(math.pi / 4)
    lower, upper = fl.cyclic_bounds(4, 16, 3, 2)
    assert lower == pytest.approx(1 / (24 * math.e))
    assert upper == pytest.approx(0.5)
    assert fl.random_expected_bound(100, 10, 4.0) == pytest.approx(0.54)
    assert fl.distance_bound(4, math.pi / 3, 1.0) == pytest.approx(0.015625)
    assert fl.cyclic_symmetric_upper(6, 36) == pytest.approx(1.0)
    assert fl.average_iterate_bound(4, 40, "cyclic") == pytest.approx(0.15)
    assert fl.average_iterate_bound(4, 100, "random") == pytest.approx(0.01)
    adv = fl.adversarial_identity(0.3)
    assert len(adv) == 801
    assert fl.run(adv, 801, ordering="identity")["forgetting"] > 0.7


def test_expected_forgetting_fig5():
    s = fl.fig5_collection()
    mean, std = fl.expected_forgetting(s, 512, 5, seed_base=7000)
    assert mean <= 9 / 512
    assert std >= 0
    assert (mean, std) == fl.expected_forgetting(s, 512, 5, seed_base=7000)


def test_errors_map_to_python_exceptions():
    with pytest.raises(fl.InvalidInput):
        fl.two_task_forgetting_bound(3, [0.5])
    with pytest.raises(fl.InvalidInput):
        fl.back_and_forth(3, 8)
    with pytest.raises(fl.ConfigError):
        fl.simulate_csv("{not json")
    with pytest.raises(fl.ConfigError):
        fl.figure_csv("fig4")


def test_simulate_csv_is_deterministic():
    config = json.dumps({
        "schema": "forgetting-lab/config/v1",
        "collection": {"construction": "fig5"},
        "ordering": {"kind": "random"},
        "horizon": 256,
        "record_every": 128,
        "trials": 3,
        "seed_base": 1,
        "bounds_overlay": ["random_upper"],
    })
    first = fl.simulate_csv(config)
    assert first == fl.simulate_csv(config)
    lines = first.strip().split("\n")
    assert lines[0] == "iteration,forgetting,forgetting_std,distance_sq,residual_bound,random_upper"
    assert len(lines) == 3


def test_quick_checks_pass():
    results = fl.run_checks("quick")
    assert [r["id"] for r in results] == [1, 2, 4]
    assert all(r["passed"] for r in results)
