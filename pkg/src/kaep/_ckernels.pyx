# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


cdef inline bint _dom(const double[:, ::1] F, Py_ssize_t a, Py_ssize_t b, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t k
    cdef bint strict = False
    for k in range(m):
        if F[a, k] > F[b, k]:
            return False
        if F[a, k] < F[b, k]:
            strict = True
    return strict


def nondominated_rank(F_in):
    cdef const double[:, ::1] F = np.ascontiguousarray(F_in, dtype=np.float64)
    cdef Py_ssize_t n = F.shape[0], m = F.shape[1]
    cdef Py_ssize_t i, j, p, q, head, level, nfront, nnext
    counts_arr = np.zeros(n, dtype=np.int64)
    rank_arr = np.full(n, -1, dtype=np.int64)
    # dominated sets in CSR layout
    dom_flat_arr = np.empty(n * n if n > 0 else 1, dtype=np.int64)
    dom_len_arr = np.zeros(n, dtype=np.int64)
    front_arr = np.empty(n if n > 0 else 1, dtype=np.int64)
    nxt_arr = np.empty(n if n > 0 else 1, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef long long[::1] rank = rank_arr
    cdef long long[::1] dom_flat = dom_flat_arr
    cdef long long[::1] dom_len = dom_len_arr
    cdef long long[::1] front = front_arr
    cdef long long[::1] nxt = nxt_arr
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                if _dom(F, i, j, m):
                    dom_flat[i * n + dom_len[i]] = j
                    dom_len[i] += 1
                    counts[j] += 1
                elif _dom(F, j, i, m):
                    dom_flat[j * n + dom_len[j]] = i
                    dom_len[j] += 1
                    counts[i] += 1
        nfront = 0
        for i in range(n):
            if counts[i] == 0:
                front[nfront] = i
                nfront += 1
        level = 0
        while nfront > 0:
            nnext = 0
            for head in range(nfront):
                p = front[head]
                rank[p] = level
                for j in range(dom_len[p]):
                    q = dom_flat[p * n + j]
                    counts[q] -= 1
                    if counts[q] == 0:
                        nxt[nnext] = q
                        nnext += 1
            for head in range(nnext):
                front[head] = nxt[head]
            nfront = nnext
            level += 1
    return rank_arr


def nondominated_mask(F_in):
    cdef const double[:, ::1] F = np.ascontiguousarray(F_in, dtype=np.float64)
    cdef Py_ssize_t n = F.shape[0], m = F.shape[1]
    cdef Py_ssize_t i, j
    keep_arr = np.ones(n, dtype=np.bool_)
    cdef cnp.npy_bool[::1] keep = keep_arr
    with nogil:
        for i in range(n):
            for j in range(n):
                if j != i and _dom(F, j, i, m):
                    keep[i] = False
                    break
    return keep_arr


def crowding_distance(F_in):
    F = np.ascontiguousarray(F_in, dtype=np.float64)
    cdef Py_ssize_t k = F.shape[0], m = F.shape[1]
    dist_arr = np.zeros(k, dtype=np.float64)
    if k <= 2:
        dist_arr[:] = np.inf
        return dist_arr
    cdef double[::1] dist = dist_arr
    cdef const double[:, ::1] Fv = F
    cdef long long[::1] order
    cdef Py_ssize_t j, i
    cdef double span
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable").astype(np.int64)
        span = Fv[order[k - 1], j] - Fv[order[0], j]
        if span <= 0.0:
            continue
        dist[order[0]] = INFINITY
        dist[order[k - 1]] = INFINITY
        for i in range(1, k - 1):
            dist[order[i]] += (Fv[order[i + 1], j] - Fv[order[i - 1], j]) / span
    return dist_arr


cdef double _strip_area(const double[:, ::1] P, long long[::1] by_x,
                        long long[::1] z_pos, Py_ssize_t limit,
                        double r1, double r2) noexcept nogil:
    cdef Py_ssize_t a, idx
    cdef double cur = r2, area = 0.0, y
    for a in range(by_x.shape[0]):
        idx = by_x[a]
        if z_pos[idx] > limit:
            continue
        y = P[idx, 1]
        if y < cur:
            area += (r1 - P[idx, 0]) * (cur - y)
            cur = y
    return area


def hv2d(P_in, ref):
    P = np.asarray(P_in, dtype=np.float64)
    P = np.ascontiguousarray(P[np.all(P <= ref, axis=1)])
    cdef Py_ssize_t n = P.shape[0]
    if n == 0:
        return 0.0
    by_x = np.lexsort((P[:, 1], P[:, 0])).astype(np.int64)
    z_pos = np.zeros(n, dtype=np.int64)
    return float(_strip_area(P, by_x, z_pos, 0, float(ref[0]), float(ref[1])))


def hv3d(P_in, ref):
    P = np.asarray(P_in, dtype=np.float64)
    P = np.ascontiguousarray(P[np.all(P <= ref, axis=1)])
    cdef Py_ssize_t n = P.shape[0]
    if n == 0:
        return 0.0
    by_z_arr = np.argsort(P[:, 2], kind="stable").astype(np.int64)
    z_pos_arr = np.empty(n, dtype=np.int64)
    z_pos_arr[by_z_arr] = np.arange(n)
    by_x_arr = np.lexsort((P[:, 1], P[:, 0])).astype(np.int64)
    cdef const double[:, ::1] Pv = P
    cdef long long[::1] by_z = by_z_arr
    cdef long long[::1] z_pos = z_pos_arr
    cdef long long[::1] by_x = by_x_arr
    cdef double r1 = ref[0], r2 = ref[1], r3 = ref[2]
    cdef double total = 0.0, depth, z_next
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            if i + 1 < n:
                z_next = Pv[by_z[i + 1], 2]
            else:
                z_next = r3
            depth = z_next - Pv[by_z[i], 2]
            if depth <= 0.0:
                continue
            total += depth * _strip_area(Pv, by_x, z_pos, i, r1, r2)
    return total
