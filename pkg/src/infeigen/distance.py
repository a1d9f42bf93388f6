"""Distance-to-boundary field and the geometric eigenvalues.

The first eigenvalue is the reciprocal in-radius, read off the maximum
of the grid distance function; the second is the reciprocal of the
largest radius of two disjoint balls, found by brute force over node
pairs (no general packing algorithm exists, so brute force is the
verifiable baseline).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import _kernels
from .grid import Grid

__all__ = [
    "EigenvalueEstimate",
    "distance_transform",
    "lambda1",
    "high_ridge",
    "lambda2_two_ball",
]


@dataclass(frozen=True)
class EigenvalueEstimate:
    """Eigenvalue with the ball radius and the node(s) attaining it."""

    lam: float
    radius: float
    witness: tuple

    def to_json(self) -> dict:
        return {"lambda": self.lam, "radius": self.radius,
                "witness": list(self.witness)}


def distance_transform(grid: Grid) -> np.ndarray:
    """Exact Euclidean distance from every node to the pinned-0 set."""
    zero_set = grid.pinned[grid.pin_value[grid.pinned] == 0.0]
    if zero_set.size == 0:
        raise ValueError("grid has no pinned-0 node")
    mask = np.ones((grid.n, grid.n), dtype=bool)
    mask[grid.lattice[zero_set, 0], grid.lattice[zero_set, 1]] = False
    edt = ndimage.distance_transform_edt(mask, sampling=grid.h)
    return edt[grid.lattice[:, 0], grid.lattice[:, 1]].astype(float)


def lambda1(d: np.ndarray) -> EigenvalueEstimate:
    """First eigenvalue: reciprocal of the maximal grid distance."""
    d = np.asarray(d, dtype=float)
    r1 = float(d.max())
    if not r1 > 0.0:
        raise ValueError("distance field is identically zero")
    witness = tuple(int(i) for i in np.flatnonzero(d == r1))
    return EigenvalueEstimate(lam=1.0 / r1, radius=r1, witness=witness)


def high_ridge(d: np.ndarray, tol: float) -> np.ndarray:
    """Nodes within ``tol`` of the maximal distance."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    d = np.asarray(d, dtype=float)
    return np.flatnonzero(d >= d.max() - tol)


def lambda2_two_ball(grid: Grid, d: np.ndarray) -> EigenvalueEstimate:
    """Second eigenvalue from the best pair of equal disjoint balls
    centered at interior nodes: r2 = max over pairs of
    min(d_i, d_j, |x_i - x_j| / 2).

    O(M^2) over interior nodes; intended for grids up to ~100x100.
    """
    d = np.asarray(d, dtype=float)
    idx = grid.interior
    if idx.size < 2:
        raise ValueError("need at least two interior nodes")
    di = d[idx]
    x = grid.nodes[idx, 0]
    y = grid.nodes[idx, 1]
    r2, a, b = _kernels.best_pair_radius(di, x, y)
    return EigenvalueEstimate(lam=1.0 / r2, radius=float(r2),
                              witness=(int(idx[a]), int(idx[b])))


def worker_count() -> int:
    """Worker cap from INF_EIGEN_THREADS (0 or unset means serial)."""
    try:
        return max(int(os.environ.get("INF_EIGEN_THREADS", "0")), 0)
    except ValueError:
        return 0
