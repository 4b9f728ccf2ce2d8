"""Band functions, band intervals, gaps, and multiplicity windows.

Band k (k = -N..N) is the k-th eigenvalue branch a -> lambda_k(J_a),
a in [0, 2]; its band interval sigma_k is the range of that continuous
function, the spectrum of the full ribbon operator being the union of
the sigma_k.  Extrema are located by a grid scan plus golden-section
refinement.  The zero-potential spectrum has a closed form, used both
as public API and as the regression pin for the generic path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._optimize import refine_extremum
from .errors import ConfigError
from .jacobi import (
    cos_node,
    eigenvalues_batch,
    sin_node,
    unperturbed_eigenvalue,
)
from .lattice import RibbonParams

DEFAULT_GRID_POINTS = 401
A_RESOLUTION = 1e-10


def default_grid(points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    if points < 3:
        raise ConfigError(f"grid needs at least 3 points, got {points}")
    return np.linspace(0.0, 2.0, points)


def band_function(k: int, params: RibbonParams, grid=None) -> np.ndarray:
    """Samples of lambda_k over the a grid (k-th sorted eigenvalue)."""
    N = params.N
    if not -N <= k <= N:
        raise ConfigError(f"band index k={k} outside -{N}..{N}")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    return eigenvalues_batch(params, grid, indices=[k + N])[:, 0]


def _band_eval(k: int, params: RibbonParams):
    idx = [k + params.N]

    def f(a: float) -> float:
        return float(eigenvalues_batch(params, [a], indices=idx)[0, 0])

    return f


def band_interval(
    k: int, params: RibbonParams, grid=None, xtol: float = A_RESOLUTION
) -> tuple[float, float]:
    """(min, max) of lambda_k over a in [0,2]: grid scan + golden refinement."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    samples = band_function(k, params, grid)
    f = _band_eval(k, params)
    _, lo = refine_extremum(f, grid, samples, "min", xtol)
    _, hi = refine_extremum(f, grid, samples, "max", xtol)
    return lo, hi


@dataclass(frozen=True)
class BandTable:
    """Sampled band functions with refined extrema.

    values[i, k+N] = lambda_k(grid[i]); refined_extrema[k+N] is the
    ((a_min, lambda_min), (a_max, lambda_max)) pair for band k.
    """

    params: RibbonParams
    grid: np.ndarray
    values: np.ndarray
    refined_extrema: tuple = field(default=())

    def band(self, k: int) -> np.ndarray:
        return self.values[:, k + self.params.N]


def band_table(params: RibbonParams, grid=None, xtol: float = A_RESOLUTION) -> BandTable:
    """Sample all bands on the grid and refine each band's extrema."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    values = eigenvalues_batch(params, grid)
    extrema = []
    for k in range(-params.N, params.N + 1):
        f = _band_eval(k, params)
        col = values[:, k + params.N]
        extrema.append(
            (
                refine_extremum(f, grid, col, "min", xtol),
                refine_extremum(f, grid, col, "max", xtol),
            )
        )
    return BandTable(params=params, grid=grid, values=values,
                     refined_extrema=tuple(extrema))


@dataclass(frozen=True)
class SpectrumReport:
    """Bands, gaps, and multiplicity windows of the ribbon spectrum.

    bands: (k, lo, hi, is_flat) per band index k = -N..N.
    gaps: maximal open intervals inside the convex hull covered by no
      positive-width band (a zero-width flat band does not split a gap).
    multiplicity_windows: ((x1, x2), count) partition of the union of
      positive-width bands by how many bands cover each window.  The count
      is per Jacobi band; the full operator carries twice that multiplicity
      for interior a, since two quasimomenta share each a value.
    """

    bands: tuple
    gaps: tuple
    multiplicity_windows: tuple


def flat_band_criterion(params: RibbonParams) -> bool:
    """True iff every odd-site potential equals v_1 exactly."""
    odd = params.v[0::2]
    return bool(np.all(odd == params.v[0]))


def _report_from_intervals(bands) -> SpectrumReport:
    """Gaps and multiplicity windows from finished (k, lo, hi, is_flat) rows."""
    solid = [(lo, hi) for (_, lo, hi, is_flat) in bands if not is_flat]
    if not solid:
        return SpectrumReport(bands=tuple(bands), gaps=(),
                              multiplicity_windows=())
    hull_lo = min(lo for lo, _ in solid)
    hull_hi = max(hi for _, hi in solid)
    edges = sorted({x for iv in solid for x in iv})
    gaps = []
    windows = []
    for x1, x2 in zip(edges[:-1], edges[1:]):
        if x2 <= x1:
            continue
        mid = 0.5 * (x1 + x2)
        count = sum(1 for lo, hi in solid if lo <= mid <= hi)
        if count == 0:
            if hull_lo < mid < hull_hi:
                if gaps and gaps[-1][1] == x1:
                    gaps[-1] = (gaps[-1][0], x2)
                else:
                    gaps.append((x1, x2))
        else:
            if windows and windows[-1][0][1] == x1 and windows[-1][1] == count:
                windows[-1] = ((windows[-1][0][0], x2), count)
            else:
                windows.append(((x1, x2), count))
    return SpectrumReport(bands=tuple(bands), gaps=tuple(gaps),
                          multiplicity_windows=tuple(windows))


def spectrum_report(
    params: RibbonParams, grid=None, flat_tol: float | None = None
) -> SpectrumReport:
    """Measure every band interval and assemble gaps/windows."""
    if flat_tol is None:
        flat_tol = 1e-10 * max(1.0, float(np.max(np.abs(params.v))))
    elif flat_tol <= 0:
        raise ConfigError(f"flat_tol must be positive, got {flat_tol}")
    rows = []
    for k in range(-params.N, params.N + 1):
        lo, hi = band_interval(k, params, grid)
        rows.append((k, lo, hi, hi - lo <= flat_tol))
    return _report_from_intervals(rows)


def unperturbed_spectrum(N: int) -> SpectrumReport:
    """Closed-form zero-potential report.

    sigma_0 = {0} (flat); for k > 0, sigma_k = [s_k, sqrt(5-4c_k)] when
    c_k >= 0 (minimum attained at a = c_k) and [1, sqrt(5-4c_k)] when
    c_k < 0 (minimum at a = 0); sigma_{-k} = -sigma_k.
    """
    if N < 1:
        raise ConfigError(f"N must be positive, got {N}")
    rows = []
    for k in range(-N, N + 1):
        if k == 0:
            rows.append((0, 0.0, 0.0, True))
            continue
        c = cos_node(abs(k), N)
        lo = sin_node(abs(k), N) if c >= 0 else 1.0
        hi = float(unperturbed_eigenvalue(abs(k), 2.0, N))
        if k > 0:
            rows.append((k, lo, hi, False))
        else:
            rows.append((k, -hi, -lo, False))
    rows.sort(key=lambda r: r[0])
    return _report_from_intervals(rows)
