"""Time schedule and re-evaluation change detection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Population

DETECT_EPS = 1e-12
DETECTOR_FRACTION = 0.10


@dataclass(frozen=True)
class TimeController:
    """Maps the generation counter to the problem's time index.

    ``t = floor(max(0, tau - warmup) / tau_t) / n_t``, so the first
    ``warmup`` generations (plus one change period) run at ``t = 0``.
    """

    n_t: int = 10
    tau_t: int = 10
    warmup: int = 100

    def __post_init__(self) -> None:
        if self.n_t <= 0 or self.tau_t <= 0:
            raise ValueError("n_t and tau_t must be positive")
        if self.warmup < 0:
            raise ValueError("warmup must be nonnegative")

    def step(self, tau: int) -> int:
        """Integer environment index at generation ``tau``."""
        if tau < 0:
            raise ValueError("generation counter must be nonnegative")
        return max(0, tau - self.warmup) // self.tau_t

    def time_at(self, tau: int) -> float:
        return self.step(tau) / self.n_t

    def total_generations(self, changes: int) -> int:
        return self.warmup + changes * self.tau_t


def time_at(controller: TimeController, tau: int) -> float:
    return controller.time_at(tau)


@dataclass(frozen=True)
class DetectorSet:
    X: np.ndarray
    F: np.ndarray
    t_archived: float

    def __len__(self) -> int:
        return self.X.shape[0]


def detector_count(N: int) -> int:
    return math.ceil(DETECTOR_FRACTION * N)


def archive_detectors(pop: Population, count: int, rng: np.random.Generator) -> DetectorSet:
    if count > len(pop):
        raise ValueError(f"cannot archive {count} detectors from {len(pop)} members")
    if count <= 0:
        raise ValueError("detector count must be positive")
    idx = rng.choice(len(pop), size=count, replace=False)
    return DetectorSet(pop.X[idx].copy(), pop.F[idx].copy(), pop.t)


def detect_change(detectors: DetectorSet, problem, t_now: float) -> bool:
    """Re-evaluate the archived points; any objective drift means a change."""
    if len(detectors) == 0:
        raise ValueError("empty detector set")
    F_now = problem.evaluate(detectors.X, t_now)
    return bool(np.any(np.abs(F_now - detectors.F) > DETECT_EPS))
