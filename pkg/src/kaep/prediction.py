"""Change-response strategies.

KAEP builds the first population of a new environment from two halves:

* the elite half of the latest population translated along the move of the
  rank-0 centroid between the last two environments;
* the same elites pushed through a kernelised autoencoder fitted to map the
  previous environment's elites onto the latest ones.

The kernel map is the closed form ``M_k = T K^T (K K^T + lam I)^-1`` with
``K = K(S, S)`` and a polynomial kernel; predicting a query set ``X`` is
``M_k K(S, X)``. The feature map is never built explicitly.

The other strategies here are the ablation and baseline variants run by the
harness: centroid only, kernel AE only, linear AE only, linear AE + centroid,
the two DNSGA-II flavours, and a full random restart.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .core import BoxBounds, Population, clamp_to_bounds
from .nsga2 import VariationParams, environmental_selection, fast_nondominated_sort, polynomial_mutation

log = logging.getLogger(__name__)

KERNEL_OFFSET = 0.1
REPLACE_FRACTION = 0.10
RIDGE_RETRIES = 3


class Strategy(str, enum.Enum):
    KAEP = "KAEP"
    CP = "CP"
    KAE = "KAE"
    AE_LINEAR = "AEa"
    AE_CENTROID = "AEB"
    DNSGA2_A = "DNSGA2_A"
    DNSGA2_B = "DNSGA2_B"
    RESTART = "RESTART"

    @property
    def needs_history(self) -> bool:
        return self not in (Strategy.DNSGA2_A, Strategy.DNSGA2_B, Strategy.RESTART)

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        key = name.strip()
        for s in cls:
            if key.upper() in (s.value.upper(), s.name):
                return s
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(s.value for s in cls)}")


@dataclass(frozen=True)
class KernelSpec:
    degree: int = 2
    offset: float = KERNEL_OFFSET

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("kernel degree must be >= 1")


@dataclass
class KernelMapping:
    M_k: np.ndarray  # d x N_e
    source: np.ndarray  # d x N_e, elites the map was fitted on (as columns)
    spec: KernelSpec
    lam: float


@dataclass
class ResponseStrategy:
    variant: Strategy = Strategy.KAEP
    kernel: KernelSpec = field(default_factory=KernelSpec)
    lam: float | None = None  # None -> scale-aware default per solve
    replace_fraction: float = REPLACE_FRACTION
    variation: VariationParams = field(default_factory=VariationParams)


@dataclass
class Response:
    """Unevaluated population for the new environment plus bookkeeping."""

    X: np.ndarray
    fallbacks: int = 0
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# centroid prediction

def _xs(front) -> np.ndarray:
    if isinstance(front, Population):
        return front.X
    if len(front) and hasattr(front[0], "x"):
        return np.array([ind.x for ind in front], dtype=float)
    return np.atleast_2d(np.asarray(front, dtype=float))


def centroid(front) -> np.ndarray:
    X = _xs(front)
    if X.shape[0] == 0:
        raise ValueError("centroid of an empty front")
    return X.mean(axis=0)


def direction(c_t, c_prev) -> np.ndarray:
    c_t = np.asarray(c_t, dtype=float)
    c_prev = np.asarray(c_prev, dtype=float)
    if c_t.shape != c_prev.shape:
        raise ValueError("centroids of different length")
    return c_t - c_prev


def centroid_predict(elites, d, bounds: BoxBounds) -> np.ndarray:
    return clamp_to_bounds(_xs(elites) + np.asarray(d, dtype=float), bounds)


def first_front_centroid(pop: Population) -> np.ndarray:
    fronts = fast_nondominated_sort(pop)
    return pop.X[fronts[0]].mean(axis=0)


# ---------------------------------------------------------------------------
# kernel machinery

def kernel_matrix(A, B, spec: KernelSpec) -> np.ndarray:
    """``K[i, j] = (a_i . b_j + offset) ** degree`` for row sets ``A`` and ``B``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.size == 0 or B.size == 0:
        raise ValueError("kernel matrix of an empty set")
    return (A @ B.T + spec.offset) ** spec.degree


def _solve_with_ladder(A: np.ndarray, B: np.ndarray, lam: float | None) -> tuple[np.ndarray, float]:
    """Ridge solve, escalating ``lam`` tenfold up to three times on failure."""
    base = linalg.default_ridge(B) if lam is None else lam
    try:
        return linalg.ridge_solve_right(A, B, base), base
    except linalg.SingularSystemError as err:
        last = err
    step = max(base, linalg.default_ridge(B), np.finfo(float).tiny)
    for k in range(1, RIDGE_RETRIES + 1):
        trial = step * 10.0 ** k
        try:
            X = linalg.ridge_solve_right(A, B, trial)
            log.info("ridge solve recovered with lambda=%.3e", trial)
            return X, trial
        except linalg.SingularSystemError as err:
            last = err
    raise last


def fit_linear_ae(S, T, lam: float | None = 0.0) -> np.ndarray:
    """Linear map ``M`` (d x d) with ``M S ~ T``; sample sets are columns."""
    S = linalg.as_matrix(S)
    T = linalg.as_matrix(T)
    if S.shape != T.shape:
        raise ValueError(f"paired sample sets must match, got {S.shape} and {T.shape}")
    M, _ = _solve_with_ladder(T @ S.T, S @ S.T, lam)
    return M


def fit_kernel_ae(S_set, T_set, spec: KernelSpec = KernelSpec(), lam: float | None = 0.0) -> KernelMapping:
    """Fit the kernel map from ``S_set`` to ``T_set`` (rows are solutions)."""
    S_rows = np.atleast_2d(np.asarray(S_set, dtype=float))
    T_rows = np.atleast_2d(np.asarray(T_set, dtype=float))
    if S_rows.shape != T_rows.shape:
        raise ValueError(f"paired elite sets must match, got {S_rows.shape} and {T_rows.shape}")
    K = kernel_matrix(S_rows, S_rows, spec)
    M_k, used = _solve_with_ladder(T_rows.T @ K.T, K @ K.T, lam)
    return KernelMapping(M_k, S_rows.T.copy(), spec, used)


def kae_predict_raw(mapping: KernelMapping, X) -> np.ndarray:
    """Predicted rows before bound repair."""
    Kq = kernel_matrix(mapping.source.T, X, mapping.spec)
    return (mapping.M_k @ Kq).T


def kae_predict(mapping: KernelMapping, X, bounds: BoxBounds) -> np.ndarray:
    return clamp_to_bounds(kae_predict_raw(mapping, X), bounds)


def linear_ae_predict(M: np.ndarray, X, bounds: BoxBounds) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return clamp_to_bounds((M @ X.T).T, bounds)


# ---------------------------------------------------------------------------
# responders

def paired_elites(pop: Population, k: int) -> Population:
    """Environmental-selection elites ordered lexicographically by objectives,
    so that column i of two consecutive elite sets sits at a similar place
    on the front."""
    elite = environmental_selection(pop, k)
    order = np.lexsort(elite.F.T[::-1])
    return elite.take(order)


def _half(N: int) -> int:
    if N % 2:
        raise ValueError(f"population size must be even to split in halves, got {N}")
    return N // 2


def kaep_respond(pop_prev: Population, pop_curr: Population, N: int, spec: KernelSpec,
                 lam: float | None, bounds: BoxBounds, rng: np.random.Generator | None = None) -> Response:
    half = _half(N)
    D = direction(first_front_centroid(pop_curr), first_front_centroid(pop_prev))
    elite_t = paired_elites(pop_curr, half)
    elite_prev = paired_elites(pop_prev, half)
    sub1 = centroid_predict(elite_t, D, bounds)
    try:
        mapping = fit_kernel_ae(elite_prev.X, elite_t.X, spec, lam)
        sub2 = kae_predict(mapping, elite_t.X, bounds)
    except np.linalg.LinAlgError as err:
        log.warning("kernel fit failed (%s); using centroid prediction for the whole population", err)
        full = paired_elites(pop_curr, N)
        return Response(centroid_predict(full, D, bounds), fallbacks=1, notes=[f"kaep fallback: {err}"])
    return Response(np.vstack([sub1, sub2]))


def _linear_ae_from(pop_prev, pop_curr, k, lam, bounds):
    S = paired_elites(pop_prev, k)
    T = paired_elites(pop_curr, k)
    M = fit_linear_ae(S.X.T, T.X.T, lam)
    return linear_ae_predict(M, T.X, bounds)


def _replace_count(N: int, fraction: float) -> int:
    return math.ceil(fraction * N - 1e-9)


def respond(strategy: ResponseStrategy, pop_prev: Population | None, pop_curr: Population,
            N: int, bounds: BoxBounds, rng: np.random.Generator) -> Response:
    v = strategy.variant
    if v is Strategy.RESTART:
        return Response(bounds.sample(N, rng))
    if v in (Strategy.DNSGA2_A, Strategy.DNSGA2_B):
        X = pop_curr.X.copy()
        k = _replace_count(N, strategy.replace_fraction)
        idx = rng.choice(len(pop_curr), size=k, replace=False)
        if v is Strategy.DNSGA2_A:
            X[idx] = bounds.sample(k, rng)
        else:
            X[idx] = polynomial_mutation(X[idx], strategy.variation, bounds, rng)
        return Response(X)

    if pop_prev is None:
        raise ValueError(f"{v.value} needs the populations of two environments")
    if v is Strategy.KAEP:
        return kaep_respond(pop_prev, pop_curr, N, strategy.kernel, strategy.lam, bounds, rng)

    D = direction(first_front_centroid(pop_curr), first_front_centroid(pop_prev))
    if v is Strategy.CP:
        return Response(centroid_predict(paired_elites(pop_curr, N), D, bounds))
    if v is Strategy.KAE:
        S = paired_elites(pop_prev, N)
        T = paired_elites(pop_curr, N)
        try:
            mapping = fit_kernel_ae(S.X, T.X, strategy.kernel, strategy.lam)
        except np.linalg.LinAlgError as err:
            return Response(centroid_predict(T, D, bounds), 1, [f"kae fallback: {err}"])
        return Response(kae_predict(mapping, T.X, bounds))
    if v is Strategy.AE_LINEAR:
        try:
            return Response(_linear_ae_from(pop_prev, pop_curr, N, strategy.lam, bounds))
        except np.linalg.LinAlgError as err:
            T = paired_elites(pop_curr, N)
            return Response(centroid_predict(T, D, bounds), 1, [f"ae fallback: {err}"])
    if v is Strategy.AE_CENTROID:
        half = _half(N)
        elite_t = paired_elites(pop_curr, half)
        sub1 = centroid_predict(elite_t, D, bounds)
        try:
            sub2 = _linear_ae_from(pop_prev, pop_curr, half, strategy.lam, bounds)
        except np.linalg.LinAlgError as err:
            full = paired_elites(pop_curr, N)
            return Response(centroid_predict(full, D, bounds), 1, [f"aeb fallback: {err}"])
        return Response(np.vstack([sub1, sub2]))
    raise ValueError(f"unhandled strategy {v}")  # pragma: no cover
