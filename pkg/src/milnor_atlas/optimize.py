"""Self-contained Nelder-Mead simplex minimizer.

Deterministic given the starting point: no randomness inside.  Infinite
objective values are legal (used as barriers); the simplex reflects away
from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass
class NMResult:
    x: np.ndarray
    fx: float
    nfev: int
    iterations: int


def nelder_mead(
    fn: Callable[[np.ndarray], float],
    x0: Sequence[float],
    scale: float = 0.1,
    max_iter: int = 500,
    xatol: float = 1e-12,
    fatol: float = 1e-14,
) -> NMResult:
    """Minimize fn from x0 with an initial simplex of edge length ``scale``."""
    x0 = np.asarray(x0, dtype=float)
    m = len(x0)
    pts = [x0.copy()]
    for i in range(m):
        step = np.zeros(m)
        step[i] = scale
        pts.append(x0 + step)
    vals = [float(fn(p)) for p in pts]
    nfev = m + 1

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    it = 0
    while it < max_iter:
        order = np.argsort(vals, kind="stable")
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        spread_x = max(np.max(np.abs(p - pts[0])) for p in pts[1:])
        spread_f = vals[-1] - vals[0]
        if spread_x <= xatol and (not np.isfinite(spread_f) or spread_f <= fatol):
            break
        centroid = np.mean(pts[:-1], axis=0)
        reflected = centroid + alpha * (centroid - pts[-1])
        fr = float(fn(reflected))
        nfev += 1
        if vals[0] <= fr < vals[-2]:
            pts[-1], vals[-1] = reflected, fr
        elif fr < vals[0]:
            expanded = centroid + gamma * (reflected - centroid)
            fe = float(fn(expanded))
            nfev += 1
            if fe < fr:
                pts[-1], vals[-1] = expanded, fe
            else:
                pts[-1], vals[-1] = reflected, fr
        else:
            contracted = centroid + rho * (pts[-1] - centroid)
            fc = float(fn(contracted))
            nfev += 1
            if fc < vals[-1]:
                pts[-1], vals[-1] = contracted, fc
            else:
                for i in range(1, m + 1):
                    pts[i] = pts[0] + sigma * (pts[i] - pts[0])
                    vals[i] = float(fn(pts[i]))
                nfev += m
        it += 1

    best = int(np.argmin(vals))
    return NMResult(pts[best], float(vals[best]), nfev, it)


def polish(
    fn: Callable[[np.ndarray], float],
    x0: Sequence[float],
    scales: Sequence[float] = (0.3, 1e-3, 1e-6, 1e-9),
    max_iter: int = 500,
) -> NMResult:
    """Run nelder_mead repeatedly with shrinking simplex scales.

    Reliable on piecewise-smooth objectives (smallest-singular-value
    surfaces) where one simplex pass stalls before high accuracy.
    """
    x = np.asarray(x0, dtype=float)
    total_fev = 0
    best: NMResult | None = None
    for s in scales:
        res = nelder_mead(fn, x, scale=s, max_iter=max_iter)
        total_fev += res.nfev
        if best is None or res.fx <= best.fx:
            best = res
            x = res.x
    assert best is not None
    best.nfev = total_fev
    return best
