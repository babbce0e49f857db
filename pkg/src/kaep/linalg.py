"""Dense matrix helpers for the closed-form autoencoder fits.

Matrices are plain 2-d float64 ndarrays. The solve goes through LAPACK's
partially pivoted LU (``scipy.linalg.lu_factor``); the pivots are inspected
before the triangular solves so a numerically singular system is reported
instead of silently producing garbage.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg as sla

PIVOT_RTOL = 1e-12


class SingularSystemError(np.linalg.LinAlgError):
    """``B + lambda*I`` has a pivot too small to trust.

    ``pivot`` is the offending magnitude and ``lam`` the ridge that was used,
    so callers can retry with a larger regulariser.
    """

    def __init__(self, pivot: float, lam: float, scale: float):
        self.pivot = pivot
        self.lam = lam
        self.scale = scale
        super().__init__(
            f"pivot {pivot:.3e} below {PIVOT_RTOL:g} * ||B||_F = {PIVOT_RTOL * scale:.3e} (lambda={lam:.3e})"
        )


def as_matrix(A) -> np.ndarray:
    M = np.asarray(A, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def transpose(A) -> np.ndarray:
    return as_matrix(A).T


def matmul(A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def default_ridge(B) -> float:
    """Scale-aware ridge: ``1e-6 * trace(B) / rows``."""
    B = as_matrix(B)
    return 1e-6 * float(np.trace(B)) / B.shape[0]


def ridge_solve_right(A, B, lam: float) -> np.ndarray:
    """Return ``X`` with ``X (B + lam I) = A``."""
    A = as_matrix(A)
    B = as_matrix(B)
    if B.shape[0] != B.shape[1]:
        raise ValueError(f"B must be square, got {B.shape}")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"A has {A.shape[1]} columns but B has {B.shape[0]} rows")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    C = B + lam * np.eye(B.shape[0])
    scale = float(np.linalg.norm(B, "fro"))
    with warnings.catch_warnings():
        # exact zero pivots are reported below with more context
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(C, check_finite=True)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest < PIVOT_RTOL * max(scale, np.finfo(float).tiny):
        raise SingularSystemError(smallest, lam, scale)
    # X C = A  <=>  C^T X^T = A^T
    return sla.lu_solve((lu, piv), A.T, trans=1).T
