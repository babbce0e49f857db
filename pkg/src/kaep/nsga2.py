"""One generation of NSGA-II and its building blocks.

Mating uses binary tournaments on (rank, crowding); variation is SBX followed
by polynomial mutation; survivors are chosen from parents and offspring
together by rank and then crowding distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import kernels
from .core import BoxBounds, Population

if TYPE_CHECKING:
    from .benchmarks import DynamicProblem


@dataclass(frozen=True)
class VariationParams:
    p_c: float = 0.9
    eta_c: float = 20.0
    p_m: float | None = None  # None means 1/n
    eta_m: float = 20.0
    # canonical per-variable SBX switches inside a mated pair
    p_var: float = 0.5
    p_swap: float = 0.5

    def mutation_rate(self, n: int) -> float:
        return 1.0 / n if self.p_m is None else self.p_m


def fast_nondominated_sort(pop) -> list[list[int]]:
    """Fronts as lists of member indices; ranks are written back if ``pop``
    is a :class:`Population` (crowding is left for the caller)."""
    F = pop.F if isinstance(pop, Population) else np.atleast_2d(np.asarray(pop, dtype=float))
    if F.shape[0] == 0:
        raise ValueError("cannot sort an empty population")
    rank = kernels.nondominated_rank(F)
    fronts = [np.flatnonzero(rank == r).tolist() for r in range(int(rank.max()) + 1)]
    if isinstance(pop, Population):
        pop.annotate(rank, np.zeros(len(pop)))
    return fronts


def crowding_distance(front) -> np.ndarray:
    """Crowding distance of every member of ``front`` (objective rows)."""
    if isinstance(front, Population):
        F = front.F
    elif len(front) and hasattr(front[0], "f"):
        F = np.array([ind.f for ind in front], dtype=float)
    else:
        F = np.atleast_2d(np.asarray(front, dtype=float))
    return kernels.crowding_distance(F)


def sort_and_annotate(pop: Population) -> list[list[int]]:
    """Rank and per-front crowding for every member."""
    fronts = fast_nondominated_sort(pop)
    crowd = np.empty(len(pop))
    for fr in fronts:
        crowd[fr] = kernels.crowding_distance(pop.F[fr])
    pop.annotate(pop.rank, crowd)
    return fronts


def selection_order(pop: Population) -> np.ndarray:
    """All member indices ordered by rank, descending crowding, then index."""
    sort_and_annotate(pop)
    idx = np.arange(len(pop))
    return np.lexsort((idx, -pop.crowding, pop.rank))


def environmental_selection(pop: Population, k: int) -> Population:
    if k <= 0:
        raise ValueError("k must be positive")
    if len(pop) < k:
        raise ValueError(f"cannot select {k} survivors from {len(pop)} members")
    fronts = sort_and_annotate(pop)
    chosen: list[int] = []
    for fr in fronts:
        if len(chosen) + len(fr) <= k:
            chosen.extend(fr)
            if len(chosen) == k:
                break
            continue
        crowd = pop.crowding[fr]
        fr_arr = np.asarray(fr)
        order = np.lexsort((fr_arr, -crowd))
        chosen.extend(fr_arr[order[: k - len(chosen)]].tolist())
        break
    survivors = pop.take(chosen)
    # crowding of the survivors is recomputed on their own fronts
    sort_and_annotate(survivors)
    return survivors


def binary_tournament(pop: Population, count: int, rng: np.random.Generator) -> np.ndarray:
    rank, crowd = pop.rank, pop.crowding
    a = rng.integers(0, len(pop), size=count)
    b = rng.integers(0, len(pop), size=count)
    coin = rng.random(count) < 0.5
    a_better = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowd[a] > crowd[b]))
    b_better = (rank[b] < rank[a]) | ((rank[a] == rank[b]) & (crowd[b] > crowd[a]))
    pick_a = a_better | (~b_better & coin)
    return np.where(pick_a, a, b)


def sbx_crossover(p1, p2, params: VariationParams, bounds: BoxBounds, rng: np.random.Generator):
    """Simulated binary crossover; accepts single vectors or row stacks."""
    P1 = np.atleast_2d(np.asarray(p1, dtype=float))
    P2 = np.atleast_2d(np.asarray(p2, dtype=float))
    rows, n = P1.shape
    mate = rng.random(rows) < params.p_c
    active = (rng.random((rows, n)) < params.p_var) & mate[:, None]
    u = rng.random((rows, n))
    swap = rng.random((rows, n)) < params.p_swap
    expo = 1.0 / (params.eta_c + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** expo, (1.0 / (2.0 * (1.0 - u))) ** expo)
    active &= np.abs(P1 - P2) > 1e-14
    mid = 0.5 * (P1 + P2)
    half = 0.5 * beta * (P2 - P1)
    C1 = np.where(active, mid - half, P1)
    C2 = np.where(active, mid + half, P2)
    cross = active & swap
    C1, C2 = np.where(cross, C2, C1), np.where(cross, C1, C2)
    C1 = np.clip(C1, bounds.lower, bounds.upper)
    C2 = np.clip(C2, bounds.lower, bounds.upper)
    if np.ndim(p1) == 1:
        return C1[0], C2[0]
    return C1, C2


def polynomial_mutation(x, params: VariationParams, bounds: BoxBounds, rng: np.random.Generator):
    """Bounded polynomial mutation applied independently to each variable."""
    X = np.atleast_2d(np.asarray(x, dtype=float))
    rows, n = X.shape
    pm = params.mutation_rate(n)
    hit = rng.random((rows, n)) < pm
    r = rng.random((rows, n))
    lo, span = bounds.lower, bounds.span
    d1 = (X - lo) / span
    d2 = (bounds.upper - X) / span
    ep1 = params.eta_m + 1.0
    mpow = 1.0 / ep1
    low = r < 0.5
    with np.errstate(invalid="ignore"):
        v_lo = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1) ** ep1
        v_hi = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2) ** ep1
        dq = np.where(low, v_lo ** mpow - 1.0, 1.0 - v_hi ** mpow)
    Y = np.where(hit, X + dq * span, X)
    Y = np.clip(Y, lo, bounds.upper)
    return Y[0] if np.ndim(x) == 1 else Y


def make_offspring(pop: Population, params: VariationParams, bounds: BoxBounds,
                   rng: np.random.Generator) -> np.ndarray:
    N = len(pop)
    pairs = (N + 1) // 2
    parents = binary_tournament(pop, 2 * pairs, rng)
    P1 = pop.X[parents[0::2]]
    P2 = pop.X[parents[1::2]]
    C1, C2 = sbx_crossover(P1, P2, params, bounds, rng)
    kids = np.empty((2 * pairs, bounds.n))
    kids[0::2] = C1
    kids[1::2] = C2
    kids = kids[:N]
    return polynomial_mutation(kids, params, bounds, rng)


def generation_step(pop: Population, problem: "DynamicProblem", t: float,
                    params: VariationParams, rng: np.random.Generator) -> Population:
    """Mating, variation, evaluation at ``t`` and (mu + lambda) survival."""
    if pop.t != t:
        raise ValueError(f"population evaluated at t={pop.t}, asked to step at t={t}")
    if not pop.annotated:
        sort_and_annotate(pop)
    kids = make_offspring(pop, params, problem.bounds, rng)
    offspring = Population(kids, problem.evaluate(kids, t), t)
    return environmental_selection(Population.concat(pop, offspring), len(pop))
