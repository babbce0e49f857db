"""Both kernel backends against brute-force oracles and each other."""

import itertools

import numpy as np
import pytest

from kaep import _pykernels, kernels
from kaep.core import dominates


def oracle_ranks(F):
    remaining = set(range(len(F)))
    rank = np.full(len(F), -1)
    level = 0
    while remaining:
        front = [i for i in remaining if not any(dominates(F[j], F[i]) for j in remaining if j != i)]
        for i in front:
            rank[i] = level
        remaining -= set(front)
        level += 1
    return rank


def test_backend_is_selected():
    assert kernels.BACKEND in ("python", "cython")


@pytest.mark.parametrize("m", [2, 3])
def test_ranks_match_oracle(backend, rng, m):
    for size in (1, 2, 7, 40):
        F = rng.integers(0, 6, size=(size, m)).astype(float)  # many ties
        assert np.array_equal(backend.nondominated_rank(F), oracle_ranks(F))


def test_mask_is_rank_zero(backend, rng):
    F = rng.random((300, 3))
    assert np.array_equal(backend.nondominated_mask(F), backend.nondominated_rank(F) == 0)


def test_crowding_three_point_front(backend):
    F = np.array([[0.0, 4.0], [1.0, 2.0], [2.0, 0.0]])
    d = backend.crowding_distance(F)
    assert np.isinf(d[0]) and np.isinf(d[2])
    assert d[1] == pytest.approx(2.0, abs=1e-15)


def test_crowding_small_fronts(backend):
    assert np.all(np.isinf(backend.crowding_distance(np.array([[1.0, 2.0]]))))
    assert np.all(np.isinf(backend.crowding_distance(np.array([[1.0, 2.0], [2.0, 1.0]]))))


def test_crowding_degenerate_objective(backend):
    F = np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 1.0], [3.0, 1.0]])
    d = backend.crowding_distance(F)
    assert np.all(np.isfinite(d[1:3]))
    assert d[1] == pytest.approx(2 / 3)


def test_backends_agree_on_crowding(rng):
    from tests.conftest import _ckernels

    if _ckernels is None:
        pytest.skip("extension not built")
    for _ in range(20):
        F = rng.random((30, 3))
        assert np.allclose(_ckernels.crowding_distance(F), _pykernels.crowding_distance(F), rtol=0, atol=1e-14)


def brute_hv_grid(P, ref):
    """Exact union volume via coordinate compression (small sets only)."""
    m = P.shape[1]
    axes = [np.unique(np.concatenate([P[:, j], [ref[j]]])) for j in range(m)]
    vol = 0.0
    for cell in itertools.product(*[range(len(a) - 1) for a in axes]):
        lo = np.array([axes[j][c] for j, c in enumerate(cell)])
        hi = np.array([axes[j][c + 1] for j, c in enumerate(cell)])
        if np.any(np.all(P <= lo, axis=1)):
            vol += float(np.prod(hi - lo))
    return vol


def test_hv_matches_grid_oracle(backend, rng):
    for _ in range(15):
        P2 = rng.random((8, 2))
        assert backend.hv2d(P2, np.array([1.1, 1.1])) == pytest.approx(brute_hv_grid(P2, np.array([1.1, 1.1])), rel=1e-12)
        P3 = rng.random((6, 3))
        ref = np.array([1.1, 1.1, 1.1])
        assert backend.hv3d(P3, ref) == pytest.approx(brute_hv_grid(P3, ref), rel=1e-12)


def test_hv_ignores_points_beyond_ref(backend):
    ref = np.array([1.0, 1.0])
    assert backend.hv2d(np.array([[2.0, 0.0], [1.0, 1.0]]), ref) == 0.0
    assert backend.hv3d(np.array([[0.5, 0.5, 2.0]]), np.array([1.0, 1.0, 1.0])) == 0.0
