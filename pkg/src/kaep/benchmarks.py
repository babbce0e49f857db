"""Dynamic benchmark problems.

The DF1-DF14 suite of the CEC 2018 dynamic multi-objective competition plus
two synthetic bi-objective problems whose Pareto set moves along a known
path. Every problem exposes

* ``evaluate(X, t)``: vectorised objectives, rows of ``X`` must be in bounds;
* ``sample_pof(t, count)``: points on the true front at ``t``;
* ``sample_pos(t, count)``: the matching decision vectors, when closed form.

The front samplers draw the front's own parameters (``x1`` or ``(x1, x2)``)
on a uniform grid, map them through a closed-form front expression that is
written independently of the evaluator, and drop dominated points for
problems whose front is disconnected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .core import BoxBounds

Array = np.ndarray
PI = np.pi


class OutOfBoundsError(ValueError):
    pass


def _rows(X) -> Array:
    X = np.asarray(X, dtype=float)
    return X[None, :] if X.ndim == 1 else X


def nondominated_2d(F: Array) -> Array:
    """Indices of the nondominated rows of a bi-objective set, sorted by f1."""
    order = np.lexsort((F[:, 1], F[:, 0]))
    f2 = F[order, 1]
    prev_min = np.concatenate(([np.inf], np.minimum.accumulate(f2)[:-1]))
    return order[f2 < prev_min]


@dataclass(frozen=True)
class DynamicProblem:
    name: str
    n: int
    m: int
    bounds: BoxBounds
    objective_fn: Callable[[Array, float], Array] = field(repr=False)
    front_fn: Callable[[Array, float], Array] = field(repr=False)
    pos_fn: Callable[[Array, float], Array] | None = field(default=None, repr=False)
    filter_front: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def evaluate(self, X, t: float) -> Array:
        rows = _rows(X)
        if rows.shape[1] != self.n:
            raise ValueError(f"{self.name} expects {self.n} variables, got {rows.shape[1]}")
        if np.any(rows < self.bounds.lower) or np.any(rows > self.bounds.upper):
            raise OutOfBoundsError(f"{self.name}: decision vector outside the box; clamp first")
        F = self.objective_fn(rows, float(t))
        return F[0] if np.ndim(X) == 1 else F

    # --- true front -------------------------------------------------------

    def _grid(self, count: int) -> Array:
        if self.m == 2:
            return np.linspace(0.0, 1.0, count)[:, None]
        side = max(2, math.ceil(math.sqrt(count)))
        u1, u2 = np.meshgrid(np.linspace(0, 1, side), np.linspace(0, 1, side), indexing="ij")
        return np.column_stack([u1.ravel(), u2.ravel()])

    def _front_params(self, t: float, count: int) -> Array:
        key = (float(t), count)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not self.filter_front:
            U = self._grid(count)
            if U.shape[0] > count:
                U = U[np.linspace(0, U.shape[0] - 1, count).round().astype(int)]
        else:
            factor = 20 if self.m == 2 else 2
            while True:
                U = self._grid(count * factor)
                F = self.front_fn(U, t)
                if self.m == 2:
                    keep = nondominated_2d(F)
                else:
                    keep = np.flatnonzero(kernels.nondominated_mask(F))
                if keep.size >= count or factor >= 64:
                    break
                factor *= 2
            keep = keep[np.linspace(0, keep.size - 1, min(count, keep.size)).round().astype(int)]
            U = U[keep]
        self._cache[key] = U
        return U

    def _check_t(self, t: float, count: int) -> None:
        if not np.isfinite(t) or t < 0:
            raise ValueError(f"{self.name}: time index must be finite and >= 0, got {t}")
        if count < 2:
            raise ValueError("need at least two front points")

    def sample_pof(self, t: float, count: int) -> Array:
        self._check_t(t, count)
        return self.front_fn(self._front_params(t, count), float(t))

    def sample_pos(self, t: float, count: int) -> Array:
        if self.pos_fn is None:
            raise NotImplementedError(f"{self.name} has no closed-form Pareto set")
        self._check_t(t, count)
        return np.clip(self.pos_fn(self._front_params(t, count), float(t)),
                       self.bounds.lower, self.bounds.upper)


def sample_true_pof(problem: DynamicProblem, t: float, count: int) -> Array:
    return problem.sample_pof(t, count)


def evaluate(problem: DynamicProblem, x, t: float) -> Array:
    return problem.evaluate(x, t)


# ---------------------------------------------------------------------------
# helpers

def _sin_t(t):
    return math.sin(0.5 * PI * t)


def _pos_tail(U, n, lo_first, hi_first, tail):
    """Decision rows with the front parameter(s) in the leading slots."""
    k = U.shape[1]
    X = np.empty((U.shape[0], n))
    X[:, :k] = lo_first + U * (hi_first - lo_first)
    X[:, k:] = tail(X)
    return X


def _bounds(n, head, tail, k=1):
    lo = np.full(n, tail[0], dtype=float)
    hi = np.full(n, tail[1], dtype=float)
    lo[:k] = head[0]
    hi[:k] = head[1]
    return BoxBounds(lo, hi)


# ---------------------------------------------------------------------------
# synthetic problems

def _syn(G: Callable[[float], float], name: str, n: int) -> DynamicProblem:
    def objectives(X, t):
        g = 1.0 + np.sum((X[:, 1:] - G(t)) ** 2, axis=1)
        f1 = X[:, 0]
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def front(U, t):
        p = U[:, 0]
        return np.column_stack([p * p, 1.0 - p])

    def pos(U, t):
        X = np.full((U.shape[0], n), G(t))
        X[:, 0] = U[:, 0] ** 2
        return X

    return DynamicProblem(name, n, 2, _bounds(n, (0, 1), (-1, 2)), objectives, front, pos)


def syn_linear_drift(n: int = 10) -> DynamicProblem:
    return _syn(lambda t: 0.5 * t, "SynLinearDrift", n)


def syn_sine_drift(n: int = 10) -> DynamicProblem:
    return _syn(lambda t: math.sin(0.5 * PI * t), "SynSineDrift", n)


# ---------------------------------------------------------------------------
# DF suite, bi-objective

def df1(n: int = 10) -> DynamicProblem:
    def objectives(X, t):
        v = _sin_t(t)
        G, H = abs(v), 0.75 * v + 1.25
        g = 1.0 + np.sum((X[:, 1:] - G) ** 2, axis=1)
        return np.column_stack([X[:, 0], g * (1.0 - (X[:, 0] / g) ** H)])

    def front(U, t):
        H = 0.75 * _sin_t(t) + 1.25
        u = U[:, 0]
        return np.column_stack([u, 1.0 - u ** H])

    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: abs(_sin_t(t)))  # noqa: E731
    return DynamicProblem("DF1", n, 2, BoxBounds.uniform(n, 0, 1), objectives, front, pos)


def df2(n: int = 10) -> DynamicProblem:
    def position(t):
        G = abs(_sin_t(t))
        return G, int(math.floor((n - 1) * G))

    def objectives(X, t):
        G, r = position(t)
        rest = np.delete(X, r, axis=1)
        g = 1.0 + np.sum((rest - G) ** 2, axis=1)
        f1 = X[:, r]
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def front(U, t):
        u = U[:, 0]
        return np.column_stack([u, 1.0 - np.sqrt(u)])

    def pos(U, t):
        G, r = position(t)
        X = np.full((U.shape[0], n), G)
        X[:, r] = U[:, 0]
        return X

    return DynamicProblem("DF2", n, 2, BoxBounds.uniform(n, 0, 1), objectives, front, pos)


def df3(n: int = 10) -> DynamicProblem:
    def objectives(X, t):
        G = _sin_t(t)
        H = G + 1.5
        x1 = X[:, :1]
        g = 1.0 + np.sum((X[:, 1:] - G - x1 ** H) ** 2, axis=1)
        return np.column_stack([X[:, 0], g * (1.0 - (X[:, 0] / g) ** H)])

    def front(U, t):
        H = _sin_t(t) + 1.5
        u = U[:, 0]
        return np.column_stack([u, 1.0 - u ** H])

    def pos(U, t):
        G = _sin_t(t)
        return _pos_tail(U, n, 0.0, 1.0, lambda X: G + X[:, :1] ** (G + 1.5))

    return DynamicProblem("DF3", n, 2, _bounds(n, (0, 1), (-1, 2)), objectives, front, pos)


def _df4_params(t):
    a = _sin_t(t)
    b = 1.0 + abs(math.cos(0.5 * PI * t))
    return a, b, max(abs(a), a + b), 1.5 + a


def _df4_reach(a, b):
    # a + b can exceed the upper bound of 2; only the in-box part of the
    # Pareto segment x1 in [a, a + b] is attainable
    return min(1.0, (2.0 - a) / b)


def df4(n: int = 10) -> DynamicProblem:
    idx = np.arange(2, n + 1, dtype=float)

    def objectives(X, t):
        a, b, c, H = _df4_params(t)
        x1 = X[:, :1]
        g = 1.0 + np.sum((X[:, 1:] - a * (x1 / c) ** 2 / idx) ** 2, axis=1)
        return np.column_stack([g * np.abs(X[:, 0] - a) ** H, g * np.abs(X[:, 0] - a - b) ** H])

    def front(U, t):
        a, b, c, H = _df4_params(t)
        u = U[:, 0] * _df4_reach(a, b)
        return np.column_stack([(b * u) ** H, (b * (1.0 - u)) ** H])

    def pos(U, t):
        a, b, c, H = _df4_params(t)
        hi = a + b * _df4_reach(a, b)
        return _pos_tail(U, n, a, hi, lambda X: a * (X[:, :1] / c) ** 2 / idx)

    return DynamicProblem("DF4", n, 2, BoxBounds.uniform(n, -2, 2), objectives, front, pos)


def df5(n: int = 10) -> DynamicProblem:
    def objectives(X, t):
        G = _sin_t(t)
        w = math.floor(10 * G)
        g = 1.0 + np.sum((X[:, 1:] - G) ** 2, axis=1)
        x1 = X[:, 0]
        wig = 0.02 * np.sin(w * PI * x1)
        return np.column_stack([g * (x1 + wig), g * (1.0 - x1 + wig)])

    def front(U, t):
        w = math.floor(10 * _sin_t(t))
        u = U[:, 0]
        wig = 0.02 * np.sin(w * PI * u)
        return np.column_stack([u + wig, 1.0 - u + wig])

    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: _sin_t(t))  # noqa: E731
    return DynamicProblem("DF5", n, 2, _bounds(n, (0, 1), (-1, 1)), objectives, front, pos)


def df6(n: int = 10) -> DynamicProblem:
    def objectives(X, t):
        G = _sin_t(t)
        a = 0.2 + 2.8 * abs(G)
        y = X[:, 1:] - G
        g = 1.0 + np.sum(abs(G) * y ** 2 - 10.0 * np.cos(2 * PI * y) + 10.0, axis=1)
        x1 = X[:, 0]
        wig = 0.1 * np.sin(3 * PI * x1)
        return np.column_stack([g * (x1 + wig) ** a, g * (1.0 - x1 + wig) ** a])

    def front(U, t):
        a = 0.2 + 2.8 * abs(_sin_t(t))
        u = U[:, 0]
        wig = 0.1 * np.sin(3 * PI * u)
        return np.column_stack([(u + wig) ** a, (1.0 - u + wig) ** a])

    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: _sin_t(t))  # noqa: E731
    return DynamicProblem("DF6", n, 2, _bounds(n, (0, 1), (-1, 1)), objectives, front, pos)


def df7(n: int = 10) -> DynamicProblem:
    def target(x1, t):
        a = 5.0 * math.cos(0.5 * PI * t)
        return 1.0 / (1.0 + np.exp(a * (x1 - 2.5)))

    def objectives(X, t):
        x1 = X[:, 0]
        g = 1.0 + np.sum((X[:, 1:] - target(X[:, :1], t)) ** 2, axis=1)
        return np.column_stack([g * (1.0 + t) / x1, g * x1 / (1.0 + t)])

    def front(U, t):
        x1 = 1.0 + 3.0 * U[:, 0]
        return np.column_stack([(1.0 + t) / x1, x1 / (1.0 + t)])

    pos = lambda U, t: _pos_tail(U, n, 1.0, 4.0, lambda X: target(X[:, :1], t))  # noqa: E731
    return DynamicProblem("DF7", n, 2, _bounds(n, (1, 4), (0, 1)), objectives, front, pos)


def df8(n: int = 10) -> DynamicProblem:
    def target(x1, t):
        G = _sin_t(t)
        b = 100.0 * G * G
        return G * np.sin(4 * PI * x1 ** b) / (1.0 + abs(G))

    def objectives(X, t):
        a = 2.25 + 2.0 * math.cos(2 * PI * t)
        x1 = X[:, 0]
        g = 1.0 + np.sum((X[:, 1:] - target(X[:, :1], t)) ** 2, axis=1)
        wig = 0.1 * np.sin(3 * PI * x1)
        return np.column_stack([g * (x1 + wig), g * (1.0 - x1 + wig) ** a])

    def front(U, t):
        a = 2.25 + 2.0 * math.cos(2 * PI * t)
        u = U[:, 0]
        wig = 0.1 * np.sin(3 * PI * u)
        return np.column_stack([u + wig, (1.0 - u + wig) ** a])

    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: target(X[:, :1], t))  # noqa: E731
    return DynamicProblem("DF8", n, 2, _bounds(n, (0, 1), (-1, 1)), objectives, front, pos)


def df9(n: int = 10) -> DynamicProblem:
    def bumps(x1, t):
        N = 1.0 + math.floor(10 * abs(_sin_t(t)))
        return np.maximum(0.0, (0.1 + 0.5 / N) * np.sin(2 * N * PI * x1))

    def objectives(X, t):
        x1 = X[:, 0]
        dev = X[:, 1:] - np.cos(4 * t + x1[:, None] + X[:, :-1])
        g = 1.0 + np.sum(dev ** 2, axis=1)
        bump = bumps(x1, t)
        return np.column_stack([g * (x1 + bump), g * (1.0 - x1 + bump)])

    def front(U, t):
        u = U[:, 0]
        bump = bumps(u, t)
        return np.column_stack([u + bump, 1.0 - u + bump])

    def pos(U, t):
        X = np.empty((U.shape[0], n))
        X[:, 0] = U[:, 0]
        for i in range(1, n):
            X[:, i] = np.cos(4 * t + X[:, 0] + X[:, i - 1])
        return X

    return DynamicProblem("DF9", n, 2, _bounds(n, (0, 1), (-1, 1)), objectives, front, pos,
                          filter_front=True)


# ---------------------------------------------------------------------------
# DF suite, tri-objective

def _sphere(u1, u2):
    c1, s1 = np.cos(0.5 * PI * u1), np.sin(0.5 * PI * u1)
    c2, s2 = np.cos(0.5 * PI * u2), np.sin(0.5 * PI * u2)
    return c1, s1, c2, s2


def df10(n: int = 10) -> DynamicProblem:
    def target(X, t):
        return np.sin(2 * PI * (X[:, :1] + X[:, 1:2])) / (1.0 + abs(_sin_t(t)))

    def shape(u1, u2, t):
        H = 2.25 + 2.0 * math.cos(0.5 * PI * t)
        c1, s1, c2, s2 = _sphere(u1, u2)
        return np.column_stack([s1 ** H, (s2 * c1) ** H, (c2 * c1) ** H])

    def objectives(X, t):
        g = 1.0 + np.sum((X[:, 2:] - target(X, t)) ** 2, axis=1)
        return g[:, None] * shape(X[:, 0], X[:, 1], t)

    front = lambda U, t: shape(U[:, 0], U[:, 1], t)  # noqa: E731
    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: target(X, t))  # noqa: E731
    return DynamicProblem("DF10", n, 3, _bounds(n, (0, 1), (-1, 1), k=2), objectives, front, pos)


def df11(n: int = 10) -> DynamicProblem:
    def shape(u1, u2, t):
        G = abs(_sin_t(t))
        y1 = PI * G / 6 + (PI / 2 - PI * G / 3) * u1
        y2 = PI * G / 6 + (PI / 2 - PI * G / 3) * u2
        return np.column_stack([np.sin(y1), np.sin(y2) * np.cos(y1), np.cos(y2) * np.cos(y1)])

    def objectives(X, t):
        G = abs(_sin_t(t))
        g = 1.0 + G + np.sum((X[:, 2:] - 0.5 * G * X[:, :1]) ** 2, axis=1)
        return g[:, None] * shape(X[:, 0], X[:, 1], t)

    def front(U, t):
        return (1.0 + abs(_sin_t(t))) * shape(U[:, 0], U[:, 1], t)

    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: 0.5 * abs(_sin_t(t)) * X[:, :1])  # noqa: E731
    return DynamicProblem("DF11", n, 3, BoxBounds.uniform(n, 0, 1), objectives, front, pos)


def df12(n: int = 10) -> DynamicProblem:
    def ripple(u1, u2, t):
        k = 10.0 * math.sin(PI * t)
        return np.abs(np.sin(np.floor(k * (2 * u1 - 1)) * PI / 2)
                      * np.sin(np.floor(k * (2 * u2 - 1)) * PI / 2))

    def shape(u1, u2):
        c1, s1, c2, s2 = _sphere(u1, u2)
        return np.column_stack([c2 * c1, s2 * c1, s1])

    def objectives(X, t):
        tail = X[:, 2:] - np.sin(t * X[:, :1])
        g = 1.0 + np.sum(tail ** 2, axis=1) + ripple(X[:, 0], X[:, 1], t)
        return g[:, None] * shape(X[:, 0], X[:, 1])

    def front(U, t):
        g = 1.0 + ripple(U[:, 0], U[:, 1], t)
        return g[:, None] * shape(U[:, 0], U[:, 1])

    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: np.sin(t * X[:, :1]))  # noqa: E731
    return DynamicProblem("DF12", n, 3, _bounds(n, (0, 1), (-1, 1), k=2), objectives, front, pos,
                          filter_front=True)


def df13(n: int = 10) -> DynamicProblem:
    def shape(u1, u2, t):
        p = math.floor(6 * _sin_t(t))
        c1, s1, c2, s2 = _sphere(u1, u2)
        f3 = (s1 ** 2 + s1 * np.cos(p * PI * u1) ** 2
              + s2 ** 2 + s2 * np.cos(p * PI * u2) ** 2)
        return np.column_stack([c1 ** 2, c2 ** 2, f3])

    def objectives(X, t):
        g = 1.0 + np.sum((X[:, 2:] - _sin_t(t)) ** 2, axis=1)
        return g[:, None] * shape(X[:, 0], X[:, 1], t)

    front = lambda U, t: shape(U[:, 0], U[:, 1], t)  # noqa: E731
    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: _sin_t(t))  # noqa: E731
    return DynamicProblem("DF13", n, 3, _bounds(n, (0, 1), (-1, 1), k=2), objectives, front, pos,
                          filter_front=True)


def df14(n: int = 10) -> DynamicProblem:
    def shape(u1, u2, t):
        y = 0.5 + _sin_t(t) * (u1 - 0.5)
        wy = y + 0.05 * np.sin(6 * PI * y)
        return np.column_stack([
            1.0 - y + 0.05 * np.sin(6 * PI * y),
            (1.0 - u2 + 0.05 * np.sin(6 * PI * u2)) * wy,
            (u2 + 0.05 * np.sin(6 * PI * u2)) * wy,
        ])

    def objectives(X, t):
        g = 1.0 + np.sum((X[:, 2:] - _sin_t(t)) ** 2, axis=1)
        return g[:, None] * shape(X[:, 0], X[:, 1], t)

    front = lambda U, t: shape(U[:, 0], U[:, 1], t)  # noqa: E731
    pos = lambda U, t: _pos_tail(U, n, 0.0, 1.0, lambda X: _sin_t(t))  # noqa: E731
    return DynamicProblem("DF14", n, 3, _bounds(n, (0, 1), (-1, 1), k=2), objectives, front, pos,
                          filter_front=True)


PROBLEMS: dict[str, Callable[..., DynamicProblem]] = {
    "DF1": df1, "DF2": df2, "DF3": df3, "DF4": df4, "DF5": df5, "DF6": df6, "DF7": df7,
    "DF8": df8, "DF9": df9, "DF10": df10, "DF11": df11, "DF12": df12, "DF13": df13,
    "DF14": df14,
    "SynLinearDrift": syn_linear_drift,
    "SynSineDrift": syn_sine_drift,
}


def get_problem(name: str, n: int = 10) -> DynamicProblem:
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {', '.join(PROBLEMS)}") from None
    return factory(n)
