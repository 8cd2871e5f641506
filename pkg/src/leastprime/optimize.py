"""Grid-then-golden-section search on an interval."""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, lo, hi, tol=1e-9, maximize=False, max_iter=200):
    """Locate an extremum of a unimodal ``f`` on [lo, hi].

    Returns (x, f(x)).  The endpoints are compared against the interior
    result, so a monotone ``f`` yields the correct endpoint.
    """
    sign = -1.0 if maximize else 1.0

    def g(x):
        return sign * f(x)

    a, b = float(lo), float(hi)
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = g(x1), g(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = g(x2)
    candidates = [(f1, x1), (f2, x2), (g(lo), float(lo)), (g(hi), float(hi))]
    best_val, best_x = min(candidates)
    return best_x, sign * best_val


def grid_then_golden(f, lo, hi, n_grid, tol=1e-9, maximize=False, vectorized=False):
    """Scan ``n_grid`` equispaced points, then refine inside the best bracket.

    With ``vectorized=True`` ``f`` is called once on the whole grid array.
    The result never loses to any grid sample.
    """
    xs = np.linspace(lo, hi, n_grid)
    ys = np.asarray(f(xs) if vectorized else [f(x) for x in xs], dtype=float)
    k = int(np.argmax(ys) if maximize else np.argmin(ys))
    if n_grid < 3 or hi == lo:
        return float(xs[k]), float(ys[k])
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, n_grid - 1)]
    scalar_f = (lambda x: float(f(np.array([x]))[0])) if vectorized else f
    x_ref, y_ref = golden_section(scalar_f, a, b, tol=tol, maximize=maximize)
    better = y_ref > ys[k] if maximize else y_ref < ys[k]
    if better:
        return float(x_ref), float(y_ref)
    return float(xs[k]), float(ys[k])
