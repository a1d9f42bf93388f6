"""Regular lattice grids restricted to a domain, with wide stencils.

A grid node is either *interior* (an unknown of the schemes) or *pinned*
(carries a prescribed value, e.g. zero on the boundary ring).  Lattice
points outside the open domain that touch an inside point through their
8-neighborhood are kept as pinned-0 boundary nodes, so the full square
[-1,1]^2 is discretized "including its boundary" while curved domains
get a one-cell boundary collar.  Node ordering is row-major by (y, x).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import DomainSpec, contains

__all__ = ["Grid", "build_grid", "set_pinned", "grid_errors", "dump_grid_csv"]


@dataclass(eq=False)
class Grid:
    """Immutable after construction; mutate only via :func:`set_pinned`.

    Neighbor arrays cover interior nodes only and are padded to the
    widest stencil: row t describes interior node ``interior[t]`` with
    ``nbr_count[t]`` valid entries, sorted by global node index.
    """

    domain: DomainSpec
    n: int
    h: float
    stencil_radius: int
    nodes: np.ndarray          # (M, 2) float, node coordinates
    lattice: np.ndarray        # (M, 2) int, (iy, ix) lattice position
    is_pinned: np.ndarray      # (M,) bool
    pin_value: np.ndarray      # (M,) float, meaningful where pinned
    interior: np.ndarray       # (Mi,) int, node indices
    pinned: np.ndarray         # (Mp,) int, node indices
    interior_pos: np.ndarray   # (M,) int, node idx -> row in nbr arrays, -1 if pinned
    nbr_idx: np.ndarray        # (Mi, kmax) int, padded with -1
    nbr_dist: np.ndarray       # (Mi, kmax) float, padded with +inf
    nbr_count: np.ndarray      # (Mi,) int

    @property
    def num_nodes(self) -> int:
        return self.nodes.shape[0]

    def neighbors_of(self, i: int):
        """(indices, distances) of interior node i, sorted by index."""
        t = self.interior_pos[i]
        if t < 0:
            raise ValueError(f"node {i} is pinned and has no neighbor list")
        k = self.nbr_count[t]
        return self.nbr_idx[t, :k], self.nbr_dist[t, :k]


def build_grid(domain: DomainSpec, n: int, s: int) -> Grid:
    """Restrict the n-per-axis lattice on [-1,1]^2 to ``domain``.

    Stencil radius ``s`` gives each deep-interior node (2s+1)^2 - 1
    neighbors; near the boundary, stencil entries that are not grid
    nodes are simply dropped.
    """
    if n < 5:
        raise ValueError("need n >= 5")
    if s < 1:
        raise ValueError("need stencil radius s >= 1")

    axis = np.linspace(-1.0, 1.0, n)
    h = 2.0 / (n - 1)
    inside = np.empty((n, n), dtype=bool)
    for iy in range(n):
        for ix in range(n):
            inside[iy, ix] = contains(domain, (axis[ix], axis[iy]))

    # Boundary collar: outside points adjacent (incl. diagonals) to an
    # inside point become pinned-0 nodes.
    collar = ndimage.binary_dilation(inside, np.ones((3, 3), bool)) & ~inside
    node_mask = inside | collar

    iy_all, ix_all = np.nonzero(node_mask)     # row-major: (y, x) order
    m = iy_all.size
    node_id = -np.ones((n, n), dtype=np.int64)
    node_id[iy_all, ix_all] = np.arange(m)
    nodes = np.column_stack([axis[ix_all], axis[iy_all]])
    lattice = np.column_stack([iy_all, ix_all])

    is_pinned = collar[iy_all, ix_all].copy()
    pin_value = np.zeros(m)

    # Punctures: pinned node nearest to each puncture point, value 0 by
    # default (typically reassigned via set_pinned).
    for px, py in domain.punctures:
        d2 = (nodes[:, 0] - px) ** 2 + (nodes[:, 1] - py) ** 2
        j = int(np.argmin(d2))
        is_pinned[j] = True
        pin_value[j] = 0.0

    interior = np.flatnonzero(~is_pinned)
    if interior.size == 0:
        raise ValueError(f"domain {domain.shape} has no interior node at n={n}")

    grid = Grid(
        domain=domain, n=n, h=h, stencil_radius=s,
        nodes=nodes, lattice=lattice,
        is_pinned=is_pinned, pin_value=pin_value,
        interior=interior, pinned=np.flatnonzero(is_pinned),
        interior_pos=np.empty(0, np.int64),
        nbr_idx=np.empty((0, 0), np.int64),
        nbr_dist=np.empty((0, 0)), nbr_count=np.empty(0, np.int64),
    )
    _assign_neighbors(grid, node_id)
    return grid


def _assign_neighbors(grid: Grid, node_id: np.ndarray) -> None:
    """Fill the padded neighbor arrays for the current interior set."""
    n, s = grid.n, grid.stencil_radius
    interior = grid.interior
    mi = interior.size
    kmax = (2 * s + 1) ** 2 - 1
    nbr_idx = np.full((mi, kmax), -1, dtype=np.int64)
    nbr_dist = np.full((mi, kmax), np.inf)
    nbr_count = np.zeros(mi, dtype=np.int64)

    nodes = grid.nodes
    for t, i in enumerate(interior):
        iy, ix = grid.lattice[i]
        y0, y1 = max(iy - s, 0), min(iy + s, n - 1)
        x0, x1 = max(ix - s, 0), min(ix + s, n - 1)
        block = node_id[y0:y1 + 1, x0:x1 + 1].ravel()   # (y, x) order: sorted ids
        block = block[(block >= 0) & (block != i)]
        k = block.size
        if k < 4:
            raise ValueError(f"interior node {i} has only {k} neighbors")
        nbr_idx[t, :k] = block
        diff = nodes[block] - nodes[i]
        nbr_dist[t, :k] = np.hypot(diff[:, 0], diff[:, 1])
        nbr_count[t] = k

    interior_pos = -np.ones(grid.num_nodes, dtype=np.int64)
    interior_pos[interior] = np.arange(mi)
    grid.interior_pos = interior_pos
    grid.nbr_idx = nbr_idx
    grid.nbr_dist = nbr_dist
    grid.nbr_count = nbr_count


def set_pinned(grid: Grid, assignments) -> Grid:
    """New grid with the listed (node index, value) pairs pinned.

    Pinned nodes lose their neighbor lists but remain usable as
    neighbors of other nodes.  Re-pinning an already pinned node just
    updates its value.
    """
    assignments = list(assignments)
    if not assignments:
        return grid
    is_pinned = grid.is_pinned.copy()
    pin_value = grid.pin_value.copy()
    for i, v in assignments:
        i = int(i)
        if not 0 <= i < grid.num_nodes:
            raise IndexError(f"node index {i} out of range")
        is_pinned[i] = True
        pin_value[i] = float(v)

    keep = ~is_pinned[grid.interior]           # rows of old interior to retain
    interior = grid.interior[keep]
    if interior.size == 0:
        raise ValueError("pinning removed every interior node")
    interior_pos = -np.ones(grid.num_nodes, dtype=np.int64)
    interior_pos[interior] = np.arange(interior.size)
    return Grid(
        domain=grid.domain, n=grid.n, h=grid.h,
        stencil_radius=grid.stencil_radius,
        nodes=grid.nodes, lattice=grid.lattice,
        is_pinned=is_pinned, pin_value=pin_value,
        interior=interior, pinned=np.flatnonzero(is_pinned),
        interior_pos=interior_pos,
        nbr_idx=grid.nbr_idx[keep], nbr_dist=grid.nbr_dist[keep],
        nbr_count=grid.nbr_count[keep],
    )


def grid_errors(grid: Grid, num_directions: int = 360):
    """Spatial and directional stencil errors (dx_i, dtheta_i).

    dx_i is the largest neighbor distance.  dtheta_i is the worst-case
    chord distance from a unit direction to the nearest normalized
    neighbor offset, approximated by sampling ``num_directions`` unit
    vectors.  Pinned nodes get NaN.
    """
    m = grid.num_nodes
    dx = np.full(m, np.nan)
    dtheta = np.full(m, np.nan)
    ang = 2.0 * np.pi * np.arange(num_directions) / num_directions
    dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    for t, i in enumerate(grid.interior):
        k = grid.nbr_count[t]
        idx = grid.nbr_idx[t, :k]
        offs = grid.nodes[idx] - grid.nodes[i]
        dist = grid.nbr_dist[t, :k]
        dx[i] = dist.max()
        units = offs / dist[:, None]
        gaps = np.linalg.norm(dirs[:, None, :] - units[None, :, :], axis=2)
        dtheta[i] = gaps.min(axis=1).max()
    return dx, dtheta


def dump_grid_csv(grid: Grid, path) -> None:
    """Debug dump: index, x, y, kind, pinned_value, neighbor_count."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["index", "x", "y", "kind", "pinned_value", "neighbor_count"])
        for i in range(grid.num_nodes):
            if grid.is_pinned[i]:
                w.writerow([i, repr(grid.nodes[i, 0]), repr(grid.nodes[i, 1]),
                            "pinned", repr(grid.pin_value[i]), 0])
            else:
                t = grid.interior_pos[i]
                w.writerow([i, repr(grid.nodes[i, 0]), repr(grid.nodes[i, 1]),
                            "interior", "", int(grid.nbr_count[t])])
