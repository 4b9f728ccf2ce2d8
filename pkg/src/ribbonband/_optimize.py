"""Golden-section refinement of grid-bracketed extrema."""

from __future__ import annotations

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, lo: float, hi: float, xtol: float = 1e-10) -> tuple[float, float]:
    """Minimum of a unimodal f on [lo, hi] to x-resolution xtol.

    Returns (x, f(x)).  Degenerate brackets collapse to the midpoint.
    """
    if hi < lo:
        lo, hi = hi, lo
    if hi - lo <= xtol:
        x = 0.5 * (lo + hi)
        return x, f(x)
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xtol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
    x = 0.5 * (lo + hi)
    return x, f(x)


def golden_max(f, lo: float, hi: float, xtol: float = 1e-10) -> tuple[float, float]:
    """Maximum of a unimodal f on [lo, hi] to x-resolution xtol."""
    x, neg = golden_min(lambda t: -f(t), lo, hi, xtol)
    return x, -neg


def refine_extremum(
    f, grid, values, mode: str, xtol: float = 1e-10
) -> tuple[float, float]:
    """Refine the discrete extremum of sampled values to xtol in x.

    grid/values are the samples; the bracket is the grid cell pair around
    the discrete arg-extremum (clipped at the ends).
    """
    import numpy as np

    values = np.asarray(values)
    i = int(np.argmin(values) if mode == "min" else np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if mode == "min":
        x, fx = golden_min(f, float(lo), float(hi), xtol)
        if values[i] < fx:
            return float(grid[i]), float(values[i])
    else:
        x, fx = golden_max(f, float(lo), float(hi), xtol)
        if values[i] > fx:
            return float(grid[i]), float(values[i])
    return x, fx
