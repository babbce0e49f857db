"""Domain types shared by every module: bounds, individuals, populations,
Pareto dominance and the seeded random stream.

Populations are stored column-wise as numpy arrays (``X`` is ``N x n``,
``F`` is ``N x m``) because every hot operation is vectorised over members.
``Individual`` is a read-only view for callers that want per-member access.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


class IncompatibleObjectivesError(ValueError):
    """Two objective vectors of different length were compared."""


class StaleAnnotationError(RuntimeError):
    """Rank/crowding were read after the population changed."""


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator for ``seed``.

    PCG64 is used explicitly (not ``default_rng``'s current default) so the
    stream is pinned across numpy versions and platforms.
    """
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class BoxBounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower and upper must be 1-d and of equal length")
        if not np.all(lo < hi):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def uniform(cls, n: int, lo: float, hi: float) -> "BoxBounds":
        return cls(np.full(n, lo), np.full(n, hi))

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` uniform points inside the box, one per row."""
        return self.lower + rng.random((count, self.n)) * self.span


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance under minimisation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise IncompatibleObjectivesError(
            f"objective vectors of length {a.size} and {b.size} are not comparable"
        )
    return bool(np.all(a <= b) and np.any(a < b))


def clamp_to_bounds(x: np.ndarray, bounds: BoxBounds) -> np.ndarray:
    """Project ``x`` (a vector or a stack of row vectors) into the box."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != bounds.n:
        raise ValueError(f"vector length {x.shape[-1]} does not match bounds of length {bounds.n}")
    return np.clip(x, bounds.lower, bounds.upper)


@dataclass(frozen=True)
class Individual:
    x: np.ndarray
    f: np.ndarray
    rank: int | None = None
    crowding: float | None = None


@dataclass
class Population:
    """Decision vectors with objectives cached for the time index ``t``.

    ``rank`` and ``crowding`` are only meaningful while ``annotated`` is true;
    any mutation through :meth:`replace` or re-evaluation clears the flag.
    """

    X: np.ndarray
    F: np.ndarray
    t: float
    _rank: np.ndarray | None = field(default=None, repr=False)
    _crowding: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.F = np.atleast_2d(np.asarray(self.F, dtype=float))
        if self.X.shape[0] != self.F.shape[0]:
            raise ValueError("X and F must have the same number of rows")

    def __len__(self) -> int:
        return self.X.shape[0]

    def __getitem__(self, i: int) -> Individual:
        rank = None if self._rank is None else int(self._rank[i])
        crowd = None if self._crowding is None else float(self._crowding[i])
        return Individual(self.X[i].copy(), self.F[i].copy(), rank, crowd)

    def __iter__(self) -> Iterator[Individual]:
        return (self[i] for i in range(len(self)))

    @property
    def annotated(self) -> bool:
        return self._rank is not None

    @property
    def rank(self) -> np.ndarray:
        if self._rank is None:
            raise StaleAnnotationError("population has not been sorted since its last change")
        return self._rank

    @property
    def crowding(self) -> np.ndarray:
        if self._crowding is None:
            raise StaleAnnotationError("population has not been sorted since its last change")
        return self._crowding

    def annotate(self, rank: np.ndarray, crowding: np.ndarray) -> None:
        self._rank = np.asarray(rank, dtype=np.int64)
        self._crowding = np.asarray(crowding, dtype=float)

    def take(self, idx: Sequence[int]) -> "Population":
        """Sub-population in the given order, annotations carried along."""
        idx = np.asarray(idx, dtype=np.int64)
        sub = Population(self.X[idx].copy(), self.F[idx].copy(), self.t)
        if self._rank is not None:
            sub.annotate(self._rank[idx], self._crowding[idx])
        return sub

    def copy(self) -> "Population":
        return self.take(np.arange(len(self)))

    @staticmethod
    def concat(a: "Population", b: "Population") -> "Population":
        if a.t != b.t:
            raise ValueError("cannot merge populations evaluated at different t")
        return Population(np.vstack([a.X, b.X]), np.vstack([a.F, b.F]), a.t)
