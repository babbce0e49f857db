import math

import numpy as np
import pytest

from kaep.benchmarks import df2, syn_linear_drift
from kaep.core import Population, make_rng
from kaep.dynamics import (
    DetectorSet,
    TimeController,
    archive_detectors,
    detect_change,
    detector_count,
    time_at,
)
from kaep.harness import ExperimentConfig, run_dmoea


@pytest.mark.parametrize(
    "n_t,tau_t,warmup,tau,expected",
    [(10, 5, 0, 12, 0.2), (10, 10, 100, 100, 0.0), (10, 10, 100, 305, 2.0)],
)
def test_time_at_examples(n_t, tau_t, warmup, tau, expected):
    assert time_at(TimeController(n_t, tau_t, warmup), tau) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("tau_t", [5, 10, 20])
def test_time_at_full_grid(tau_t):
    clock = TimeController(10, tau_t, 100)
    values = [clock.time_at(tau) for tau in range(0, clock.total_generations(20) + 1)]
    for tau, v in enumerate(values):
        expected = 0.0 if tau <= 100 else math.floor((tau - 100) / tau_t) / 10
        assert v == expected
    steps = np.diff(values)
    assert np.all(steps >= 0)
    jumps = steps[steps > 0]
    assert np.allclose(jumps, 0.1) and len(jumps) == 20


def test_controller_rejects_bad_input():
    with pytest.raises(ValueError):
        TimeController(0, 10, 100)
    with pytest.raises(ValueError):
        TimeController(10, 0, 100)
    with pytest.raises(ValueError):
        TimeController(10, 10, 100).time_at(-1)


def test_detector_count():
    assert detector_count(100) == 10
    assert detector_count(7) == 1


def _pop(problem, size, t, seed):
    X = problem.bounds.sample(size, make_rng(seed))
    return Population(X, problem.evaluate(X, t), t)


def test_archive_all_and_distinct():
    prob = syn_linear_drift()
    pop = _pop(prob, 100, 0.0, 1)
    everything = archive_detectors(pop, 100, make_rng(0))
    assert sorted(map(tuple, everything.X)) == sorted(map(tuple, pop.X))
    ten = archive_detectors(pop, 10, make_rng(0))
    assert len(ten) == 10 and len({tuple(x) for x in ten.X}) == 10
    again = archive_detectors(pop, 10, make_rng(0))
    assert np.array_equal(ten.X, again.X)
    with pytest.raises(ValueError):
        archive_detectors(pop, 101, make_rng(0))


def test_detect_same_time_is_false():
    prob = syn_linear_drift()
    det = archive_detectors(_pop(prob, 50, 0.3, 2), 5, make_rng(1))
    assert detect_change(det, prob, 0.3) is False


def test_detect_linear_drift_off_pos():
    prob = syn_linear_drift()
    x = np.full((1, prob.n), 0.7)
    det = DetectorSet(x, prob.evaluate(x, 0.0), 0.0)
    shift = np.abs(prob.evaluate(x, 0.1) - det.F).max()
    assert shift > 1e-12
    assert detect_change(det, prob, 0.1) is True


def test_detect_df2_moving_pos():
    prob = df2()
    X = prob.bounds.sample(10, make_rng(3))
    det = DetectorSet(X, prob.evaluate(X, 0.4), 0.4)
    assert detect_change(det, prob, 0.5) is True


def test_detect_empty_raises():
    prob = syn_linear_drift()
    empty = DetectorSet(np.empty((0, prob.n)), np.empty((0, 2)), 0.0)
    with pytest.raises(ValueError):
        detect_change(empty, prob, 0.0)


@pytest.mark.parametrize("tau_t", [5, 10, 20])
def test_run_sees_exactly_twenty_changes(tau_t):
    cfg = ExperimentConfig(problem="SynLinearDrift", strategy="DNSGA2_A", tau_t=tau_t, N=40, refset=100)
    res = run_dmoea(cfg, seed=3)
    assert res.change_generations == [100 + k * tau_t for k in range(1, 21)]
    assert res.missed_detections == 0 and res.spurious_detections == 0
    assert len(res.records) == 20
