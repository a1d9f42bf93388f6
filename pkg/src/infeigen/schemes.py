"""Discrete residual operators for the eigenfunction schemes.

Three residual kinds share the same building blocks:

* ``ground_state``      min(F1+, F2)
* ``higher``            min(F1+, F2) + max(F1-, F2) - F2
* ``infinity_harmonic`` F2

F1+/F1- approximate multiples of |grad u| - L*u and -|grad u| - L*u via
the steepest difference quotient; F2 is the Oberman approximation of a
multiple of -(infinity Laplacian).  Residuals are un-normalized: roots
are unchanged and reported norms match the fixed-point iteration.
Pinned nodes carry the residual u_i - v_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import Grid

__all__ = [
    "SchemeSpec",
    "f1_plus",
    "f1_minus",
    "f2_oberman",
    "steepest_ascent",
    "oberman_pair",
    "residual",
]

_KINDS = ("ground_state", "higher", "infinity_harmonic")


@dataclass(frozen=True)
class SchemeSpec:
    """Residual selector: kind plus the eigenvalue it uses (if any)."""

    kind: str
    lam: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind != "infinity_harmonic":
            if self.lam is None or not self.lam > 0:
                raise ValueError(f"{self.kind} scheme needs lambda > 0")


def _quotients(grid: Grid, u, i):
    t = grid.interior_pos[i]
    if t < 0:
        raise ValueError(f"node {i} is not interior")
    k = grid.nbr_count[t]
    idx = grid.nbr_idx[t, :k]
    dist = grid.nbr_dist[t, :k]
    return idx, dist, (u[i] - u[idx]) / dist


def f1_plus(grid: Grid, u, lam: float, i: int) -> float:
    """u_i - u_jmax - d_jmax * lam * u_i with jmax the steepest ascent
    neighbor (arg-max difference quotient, ties to smallest index)."""
    idx, dist, q = _quotients(grid, u, i)
    j = int(np.argmax(q))
    return u[i] - u[idx[j]] - dist[j] * lam * u[i]


def f1_minus(grid: Grid, u, lam: float, i: int) -> float:
    """Mirror of :func:`f1_plus` using the arg-min difference quotient."""
    idx, dist, q = _quotients(grid, u, i)
    j = int(np.argmin(q))
    return u[i] - u[idx[j]] - dist[j] * lam * u[i]


def f2_oberman(grid: Grid, u, i: int) -> float:
    """u_i - u*_i, where u*_i minimizes the discrete Lipschitz constant
    over the neighborhood (Oberman pair rule, lexicographic ties)."""
    idx, dist, _ = _quotients(grid, u, i)
    k = idx.size
    if k < 2:
        raise ValueError(f"node {i} has fewer than two neighbors")
    a, b = np.triu_indices(k, 1)       # row-major: lexicographic pair order
    q = np.abs(u[idx[a]] - u[idx[b]]) / (dist[a] + dist[b])
    j = int(np.argmax(q))
    r, s = a[j], b[j]
    ustar = (dist[s] * u[idx[r]] + dist[r] * u[idx[s]]) / (dist[r] + dist[s])
    return u[i] - ustar


def steepest_ascent(grid: Grid, u, i: int):
    """(neighbor index, distance, quotient) of the arg-max difference
    quotient at interior node i; used for consistency diagnostics."""
    idx, dist, q = _quotients(grid, u, i)
    j = int(np.argmax(q))
    return int(idx[j]), float(dist[j]), float(q[j])


def oberman_pair(grid: Grid, u, i: int):
    """(r, s, d_r, d_s) of the winning Lipschitz pair at node i."""
    idx, dist, _ = _quotients(grid, u, i)
    k = idx.size
    if k < 2:
        raise ValueError(f"node {i} has fewer than two neighbors")
    a, b = np.triu_indices(k, 1)
    q = np.abs(u[idx[a]] - u[idx[b]]) / (dist[a] + dist[b])
    j = int(np.argmax(q))
    r, s = a[j], b[j]
    return int(idx[r]), int(idx[s]), float(dist[r]), float(dist[s])


def residual(grid: Grid, u, spec: SchemeSpec) -> np.ndarray:
    """Full residual field F[u], one value per grid node."""
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.num_nodes,):
        raise ValueError("field length does not match grid")
    if np.any(grid.nbr_count < 2):
        raise ValueError("grid has an interior node with fewer than two neighbors")

    res = np.empty(grid.num_nodes)
    res[grid.pinned] = u[grid.pinned] - grid.pin_value[grid.pinned]

    jmax, jmin, f2 = _kernels.scheme_terms(
        u, grid.interior, grid.nbr_idx, grid.nbr_dist, grid.nbr_count
    )
    ui = u[grid.interior]
    rows = np.arange(grid.interior.size)
    if spec.kind == "infinity_harmonic":
        res[grid.interior] = f2
        return res

    lam = spec.lam
    f1p = ui - u[grid.nbr_idx[rows, jmax]] - grid.nbr_dist[rows, jmax] * lam * ui
    if spec.kind == "ground_state":
        res[grid.interior] = np.minimum(f1p, f2)
    else:
        f1m = ui - u[grid.nbr_idx[rows, jmin]] - grid.nbr_dist[rows, jmin] * lam * ui
        res[grid.interior] = np.minimum(f1p, f2) + np.maximum(f1m, f2) - f2
    return res
