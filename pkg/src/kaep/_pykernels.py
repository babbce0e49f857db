"""Pure numpy implementations of the hot kernels.

These are the reference semantics; ``_ckernels.pyx`` must agree with them
bit-for-bit on ranks and to rounding on real-valued outputs.
"""

import numpy as np

_CHUNK = 2048


def dominance_matrix(F):
    """``D[i, j]`` is true iff row ``i`` dominates row ``j``."""
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return le & lt


def nondominated_rank(F):
    F = np.ascontiguousarray(F, dtype=float)
    n = F.shape[0]
    D = dominance_matrix(F)
    dominated_by = D.sum(axis=0)
    rank = np.full(n, -1, dtype=np.int64)
    current = np.flatnonzero(dominated_by == 0)
    level = 0
    while current.size:
        rank[current] = level
        dominated_by = dominated_by - D[current].sum(axis=0)
        dominated_by[rank >= 0] = -1
        current = np.flatnonzero(dominated_by == 0)
        level += 1
    return rank


def nondominated_mask(F):
    """Mask of rows not dominated by any other row; scales to ~1e4 rows."""
    F = np.ascontiguousarray(F, dtype=float)
    n = F.shape[0]
    keep = np.ones(n, dtype=bool)
    for start in range(0, n, _CHUNK):
        block = F[start:start + _CHUNK]
        le = np.all(F[:, None, :] <= block[None, :, :], axis=2)
        lt = np.any(F[:, None, :] < block[None, :, :], axis=2)
        keep[start:start + _CHUNK] = ~np.any(le & lt, axis=0)
    return keep


def crowding_distance(F):
    F = np.ascontiguousarray(F, dtype=float)
    k, m = F.shape
    dist = np.zeros(k)
    if k <= 2:
        dist[:] = np.inf
        return dist
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        if span <= 0.0:
            continue
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def _hv2d_sorted(f1, f2, r1, r2):
    # f1 ascending; strips between successive running minima of f2
    run_min = np.minimum.accumulate(f2)
    prev = np.concatenate(([r2], run_min[:-1]))
    gain = np.clip(prev - run_min, 0.0, None)
    return float(np.sum((r1 - f1) * gain))


def hv2d(P, ref):
    P = np.asarray(P, dtype=float)
    P = P[np.all(P <= ref, axis=1)]
    if P.shape[0] == 0:
        return 0.0
    order = np.lexsort((P[:, 1], P[:, 0]))
    return _hv2d_sorted(P[order, 0], P[order, 1], ref[0], ref[1])


def hv3d(P, ref):
    P = np.asarray(P, dtype=float)
    P = P[np.all(P <= ref, axis=1)]
    n = P.shape[0]
    if n == 0:
        return 0.0
    by_z = np.argsort(P[:, 2], kind="stable")
    z_pos = np.empty(n, dtype=np.int64)
    z_pos[by_z] = np.arange(n)
    by_x = np.lexsort((P[:, 1], P[:, 0]))
    zs = P[by_z, 2]
    total = 0.0
    for i in range(n):
        z_next = zs[i + 1] if i + 1 < n else ref[2]
        depth = z_next - zs[i]
        if depth <= 0.0:
            continue
        sel = by_x[z_pos[by_x] <= i]
        total += depth * _hv2d_sorted(P[sel, 0], P[sel, 1], ref[0], ref[1])
    return total
