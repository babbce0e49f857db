"""Per-environment quality indicators and their run averages.

All indicators assume minimisation. IGD/GD use Euclidean distance, Schott
spacing uses Manhattan distance between nearest neighbours.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from . import kernels

REF_OFFSET = 0.1


def _points(P, what: str) -> np.ndarray:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if P.shape[0] == 0 or P.size == 0:
        raise ValueError(f"{what} set is empty")
    return P


def igd(reference, approx) -> float:
    """Mean distance from each reference point to its nearest approximation point."""
    R = _points(reference, "reference")
    A = _points(approx, "approximation")
    return float(cdist(R, A).min(axis=1).mean())


def gd(reference, approx) -> float:
    """Mean distance from each approximation point to the reference set."""
    return igd(approx, reference)


def hv(approx, ref_point) -> float:
    A = np.atleast_2d(np.asarray(approx, dtype=float))
    ref = np.asarray(ref_point, dtype=float)
    if A.size == 0:
        return 0.0
    m = A.shape[1]
    if ref.shape != (m,):
        raise ValueError("reference point dimension does not match the points")
    if m == 2:
        return kernels.hv2d(A, ref)
    if m == 3:
        return kernels.hv3d(A, ref)
    if m == 1:
        return float(max(0.0, ref[0] - A[:, 0].min()))
    raise ValueError(f"hypervolume is only supported for m <= 3 (got m={m})")


def reference_point(true_pof) -> np.ndarray:
    P = _points(true_pof, "front")
    return P.max(axis=0) + REF_OFFSET


def sp(approx) -> float:
    """Schott's spacing with Manhattan nearest-neighbour distances."""
    A = np.atleast_2d(np.asarray(approx, dtype=float))
    k = A.shape[0]
    if k < 2:
        raise ValueError("spacing needs at least two points")
    D = cdist(A, A, metric="cityblock")
    np.fill_diagonal(D, np.inf)
    d = D.min(axis=1)
    return float(np.sqrt(np.sum((d.mean() - d) ** 2) / (k - 1)))


@dataclass
class ChangeRecord:
    change_index: int
    t: float
    igd: float
    hv: float
    gd: float
    sp: float
    strategy_fallbacks: int = 0


@dataclass
class RunSummary:
    migd: float
    mhv: float
    mgd: float
    msp: float
    per_change: list[ChangeRecord] = field(default_factory=list)
    seed: int | None = None
    config: dict | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def summarize(records: list[ChangeRecord], seed: int | None = None, config: dict | None = None) -> RunSummary:
    if not records:
        raise ValueError("no change records to summarize")
    col = lambda name: float(np.mean([getattr(r, name) for r in records]))  # noqa: E731
    return RunSummary(col("igd"), col("hv"), col("gd"), col("sp"), list(records), seed, config)


def score_front(front_F, true_pof, change_index: int, t: float, fallbacks: int = 0) -> ChangeRecord:
    """All four indicators of one approximated front against the true front at ``t``."""
    F = _points(front_F, "approximation")
    spacing = sp(F) if F.shape[0] >= 2 else 0.0
    return ChangeRecord(
        change_index=change_index,
        t=t,
        igd=igd(true_pof, F),
        hv=hv(F, reference_point(true_pof)),
        gd=gd(true_pof, F),
        sp=spacing,
        strategy_fallbacks=fallbacks,
    )
