"""Derivative-free maximization helpers: golden section and cyclic coordinate search."""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-12, max_iter: int = 200
) -> Tuple[float, float]:
    """
    Maximize ``f`` on ``[a, b]`` by golden-section search.

    The endpoints are evaluated too, so a maximum sitting on the boundary of
    the interval is returned exactly.
    """
    if b < a:
        a, b = b, a
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb > best_f:
        best_x, best_f = b, fb
    if b - a <= tol:
        return best_x, best_f
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def grid_then_golden(
    f_vec: Callable[[np.ndarray], np.ndarray],
    f: Callable[[float], float],
    lo: float,
    hi: float,
    points: int,
    tol: float = 1e-12,
) -> Tuple[float, float]:
    """Dense grid scan of ``f_vec`` followed by golden refinement around the best node."""
    if hi - lo <= tol:
        return lo, f(lo)
    grid = np.linspace(lo, hi, points)
    vals = f_vec(grid)
    i = int(np.argmax(vals))  # first index wins ties
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, points - 1)]
    x, fx = golden_max(f, a, b, tol)
    if vals[i] > fx:
        return float(grid[i]), float(vals[i])
    return x, fx


def coordinate_ascent(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    lower: Sequence[float],
    upper: Sequence[float],
    width: Sequence[float],
    periodic: Optional[Sequence[bool]] = None,
    tol: float = 1e-10,
    max_cycles: int = 200,
    line_tol: float = 1e-12,
) -> Tuple[np.ndarray, float]:
    """
    Cyclic golden-section line searches over each coordinate.

    Each coordinate keeps its own bracket half-width: it halves when the line
    search lands well inside the bracket and doubles when the optimum is
    pushed against it.  Periodic coordinates wrap instead of clipping.
    Stops once a full cycle improves ``f`` by no more than ``tol``.
    """
    x = np.array(x0, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    w = np.array(width, dtype=float)
    span = upper - lower
    periodic = [False] * len(x) if periodic is None else list(periodic)
    fx = f(x)
    for _ in range(max_cycles):
        f_start = fx
        for i in range(len(x)):
            if periodic[i]:
                a, b = x[i] - w[i], x[i] + w[i]
            else:
                a, b = max(lower[i], x[i] - w[i]), min(upper[i], x[i] + w[i])

            def along(z, i=i):
                y = x.copy()
                y[i] = lower[i] + (z - lower[i]) % span[i] if periodic[i] else z
                return f(y)

            z, fz = golden_max(along, a, b, line_tol)
            if fz > fx:
                moved = abs(z - x[i])
                x[i] = lower[i] + (z - lower[i]) % span[i] if periodic[i] else z
                fx = fz
                w[i] = min(2.0 * w[i], span[i]) if moved > 0.5 * w[i] else 0.5 * w[i]
            else:
                w[i] *= 0.5
            w[i] = max(w[i], 1e-14 * max(1.0, abs(x[i])))
        if fx - f_start <= tol:
            break
    return x, fx
