"""Real-space model of the zigzag nanoribbon graph.

A ribbon of half-width N has p = 2N+1 sites per unit cell, indexed
k = 1..p across the ribbon; cells are indexed n along the axis.  Odd
rows couple within the cell to their even neighbours and across the
cell boundary:

    (H f)_{n,2k+1} = f_{n,2k} + f_{n-1,2k+2} + f_{n,2k+2} + v_{2k+1} f_{n,2k+1}
    (H f)_{n,2k}   = f_{n,2k-1} + f_{n+1,2k-1} + f_{n,2k+1} + v_{2k} f_{n,2k}

with Dirichlet rows f_{n,0} = f_{n,p+1} = 0.  The transverse potential
v_k is constant along the axis.  Only adjacency matters here; no vertex
coordinates are materialized.

This module owns finite sections of H, operator application, and the
compactly supported eigenvectors of the flat band (zero-width band at
v_1, present exactly when all odd potential entries equal v_1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import BoundaryClashError, ConfigError, CriterionViolation

DENSE_SIZE_CAP = 10_000  # rows; finite sections are oracle-scale only

PERIODIC = "periodic"
OPEN = "open"


@dataclass(frozen=True)
class RibbonParams:
    """Ribbon half-width N and transverse on-site potential v (length p = 2N+1).

    v is stored as a float array; v[j] is the potential on site j+1 in the
    1-based transverse indexing used throughout.
    """

    N: int
    v: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N!r}")
        v = self.v
        if v is None:
            v = np.zeros(self.p)
        v = np.asarray(v, dtype=float)
        if v.shape != (self.p,):
            raise ConfigError(
                f"potential length must be p = 2N+1 = {self.p}, got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ConfigError("potential entries must be finite")
        object.__setattr__(self, "v", v)

    @property
    def p(self) -> int:
        return 2 * self.N + 1


@dataclass(frozen=True)
class RibbonState:
    """Wavefunction on a finite section: values[n, k-1] = f_{n,k}."""

    values: np.ndarray
    boundary: str = PERIODIC

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] < 1:
            raise ConfigError("state values must be a (L, p) array")
        if self.boundary not in (PERIODIC, OPEN):
            raise ConfigError(f"unknown boundary {self.boundary!r}")
        object.__setattr__(self, "values", vals)

    @property
    def L(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def build_ribbon(params: RibbonParams, L: int, boundary: str = PERIODIC):
    """Assemble the (L*p) x (L*p) real-space Hamiltonian of a finite section.

    Site (n, k) maps to row n*p + (k-1).  Periodic sections wrap the axial
    couplings mod L and require L >= 3 so no wrap edge is double counted;
    open sections drop couplings that leave 0..L-1.

    Returns a symmetric scipy.sparse.csr_matrix.
    """
    p = params.p
    if boundary not in (PERIODIC, OPEN):
        raise ConfigError(f"unknown boundary {boundary!r}")
    if L < 2 or (boundary == PERIODIC and L < 3):
        raise ConfigError(f"L={L} too small for boundary={boundary}")
    size = L * p
    if size > DENSE_SIZE_CAP:
        raise ConfigError(
            f"section size {size} exceeds the dense cap {DENSE_SIZE_CAP}"
        )

    H = sp.lil_matrix((size, size))

    def site(n: int, k: int) -> int | None:
        # k is 1-based transverse index; returns flat row or None if dropped
        if boundary == PERIODIC:
            n %= L
        elif n < 0 or n >= L:
            return None
        return n * p + (k - 1)

    for n in range(L):
        for k in range(1, p + 1):
            i = site(n, k)
            H[i, i] = params.v[k - 1]
        # intra-cell chain edges (k, k+1)
        for k in range(1, p):
            i, j = site(n, k), site(n, k + 1)
            H[i, j] = 1.0
            H[j, i] = 1.0
        # cross edges (n, 2k+1) ~ (n-1, 2k+2), k = 0..N-1
        for k in range(params.N):
            i = site(n, 2 * k + 1)
            j = site(n - 1, 2 * k + 2)
            if j is not None:
                H[i, j] = 1.0
                H[j, i] = 1.0
    return H.tocsr()


def apply_hamiltonian(H, state: RibbonState) -> RibbonState:
    """Apply a finite-section Hamiltonian to a state (exact matvec)."""
    L, p = state.values.shape
    if H.shape != (L * p, L * p):
        raise ConfigError(
            f"dimension mismatch: H is {H.shape}, state is {L}x{p}"
        )
    out = H @ state.values.ravel()
    return RibbonState(out.reshape(L, p), state.boundary)


@dataclass(frozen=True)
class FlatBandVector:
    """Compactly supported flat-band eigenvector anchored at cell m.

    Row 2k+1 (k = 0..N) carries integer coefficients (-1)^k * C(k, j) at
    axial position m-j, j = 0..k; even rows vanish identically.  Axial
    support is [m-N, m].  Coefficients are exact integers.
    """

    N: int
    m: int

    def row_entries(self, k: int) -> list[tuple[int, int]]:
        """Entries of odd row 2k+1 as (axial position, integer coefficient)."""
        if not 0 <= k <= self.N:
            raise ConfigError(f"row index k={k} outside 0..{self.N}")
        sign = -1 if k % 2 else 1
        return [(self.m - j, sign * math.comb(k, j)) for j in range(k + 1)]

    def to_state(self, L: int, boundary: str = OPEN) -> RibbonState:
        """Materialize on a finite section of L cells.

        Open sections require the support [m-N, m] to fit inside 0..L-1;
        periodic sections wrap the positions mod L (needs L >= N+1 so the
        wrapped support does not self-overlap).
        """
        p = 2 * self.N + 1
        if boundary == OPEN:
            if self.m - self.N < 0 or self.m >= L:
                raise BoundaryClashError(
                    f"support [{self.m - self.N}, {self.m}] leaves the open "
                    f"section 0..{L - 1}"
                )
        elif boundary == PERIODIC:
            if L < self.N + 1:
                raise BoundaryClashError(
                    f"L={L} wraps the support of width {self.N + 1} onto itself"
                )
        else:
            raise ConfigError(f"unknown boundary {boundary!r}")
        vals = np.zeros((L, p))
        for k in range(self.N + 1):
            for n, c in self.row_entries(k):
                vals[n % L, 2 * k] = float(c)
        return RibbonState(vals, boundary)


def flat_band_vector(N: int, m: int) -> FlatBandVector:
    """The flat-band eigenvector anchored at cell m (exact integer data)."""
    if N < 1:
        raise ConfigError(f"N must be positive, got {N}")
    return FlatBandVector(N=N, m=int(m))


def verify_flat_eigen(params: RibbonParams, psi: FlatBandVector, L: int) -> float:
    """Max-norm residual of (H - v_1) psi on an open section of L cells.

    Exactly 0.0 when the flat-band criterion holds (the computation stays in
    small integers plus bitwise-identical potential products); strictly
    positive when some odd entry differs from v_1.  Raises BoundaryClashError
    when the support of psi touches the open boundary.
    """
    if psi.N != params.N:
        raise ConfigError(f"psi has N={psi.N}, params have N={params.N}")
    state = psi.to_state(L, OPEN)
    H = build_ribbon(params, L, OPEN)
    resid = apply_hamiltonian(H, state).values - params.v[0] * state.values
    return float(np.max(np.abs(resid)))


def expand_in_flat_basis(params: RibbonParams, state: RibbonState) -> np.ndarray:
    """Coefficients h with state = sum_m h[m] * psi^m, read off row 1.

    The anchored vectors have a single +1 on row 1 at their anchor cell, so
    h[m] = f_{m,1}.  Requires the state to lie in the flat-band eigenspace:
    ||(H - v_1) f||_max <= 1e-10 ||f||_max.
    """
    if state.p != params.p:
        raise ConfigError(
            f"state width {state.p} does not match p={params.p}"
        )
    H = build_ribbon(params, state.L, state.boundary)
    resid = apply_hamiltonian(H, state).values - params.v[0] * state.values
    scale = np.max(np.abs(state.values))
    if scale == 0.0:
        return np.zeros(state.L)
    if np.max(np.abs(resid)) > 1e-10 * scale:
        raise CriterionViolation(
            "state is not in the flat-band eigenspace "
            f"(relative residual {np.max(np.abs(resid)) / scale:.3e})"
        )
    return state.values[:, 0].copy()


def flat_basis_combination(
    N: int, coeffs, L: int, boundary: str = PERIODIC
) -> RibbonState:
    """Materialize sum_m coeffs[m] * psi^m on a finite section."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (L,):
        raise ConfigError(f"need one coefficient per cell, got {coeffs.shape}")
    vals = np.zeros((L, 2 * N + 1))
    for m in np.nonzero(coeffs)[0]:
        vals += coeffs[m] * flat_band_vector(N, int(m)).to_state(L, boundary).values
    return RibbonState(vals, boundary)
