"""Damped fixed-point iteration on the Euler map E[u] = u - rho F[u].

The loop is Jacobi-style: the full residual is evaluated on the
previous iterate before any component is written, so results do not
depend on any parallel schedule.  Non-convergence within the iteration
budget is a legitimate outcome, reported rather than raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import eigsh

from .distance import distance_transform, high_ridge, lambda1
from .grid import Grid, set_pinned
from .schemes import SchemeSpec, residual

__all__ = [
    "InitSpec",
    "SolverConfig",
    "SolveReport",
    "euler_step",
    "normalize_parts",
    "initialize",
    "ridge_pins",
    "solve",
    "default_tol",
]

# Reference spacing of the 97x97 discretization; tolerances scale with
# (h / H_REF)^2 because the F2 term shrinks quadratically with h.
_H_REF = 2.0 / 96.0


@dataclass(frozen=True)
class InitSpec:
    """Initial iterate: distance | zero | random | laplacian_eigen | custom."""

    kind: str = "distance"
    seed: int = 0
    index: int = 1                      # which Laplacian eigenfunction
    field_values: np.ndarray | None = None

    def __post_init__(self):
        kinds = ("distance", "zero", "random", "laplacian_eigen", "custom")
        if self.kind not in kinds:
            raise ValueError(f"unknown init kind {self.kind!r}")
        if self.kind == "custom" and self.field_values is None:
            raise ValueError("custom init needs field_values")
        if self.kind == "laplacian_eigen" and self.index < 1:
            raise ValueError("laplacian_eigen index starts at 1")


@dataclass(frozen=True)
class SolverConfig:
    rho: float = 0.9
    max_iters: int = 3000
    tol: float | None = None            # None: 1e-7 * (h / h_97)^2
    normalize: bool = False
    init: InitSpec = field(default_factory=InitSpec)

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise ValueError("rho must lie in (0, 1]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol is not None and self.tol < 0:
            raise ValueError("tol must be >= 0")


@dataclass
class SolveReport:
    iterations: int
    crit: float
    residual_inf: float
    converged: bool
    eigen_defect: float | None = None

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "crit": self.crit,
            "residual_inf": self.residual_inf,
            "converged": self.converged,
            "eigen_defect": self.eigen_defect,
        }

    def dump(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=2)
            f.write("\n")


def default_tol(grid: Grid) -> float:
    return 1e-7 * (grid.h / _H_REF) ** 2


def euler_step(u: np.ndarray, residual_field: np.ndarray, rho: float) -> np.ndarray:
    if u.shape != residual_field.shape:
        raise ValueError("field shapes differ")
    return u - rho * residual_field


def normalize_parts(u: np.ndarray) -> np.ndarray:
    """Rescale positive and negative parts to unit sup-norm each."""
    pos = np.maximum(u, 0.0)
    neg = np.maximum(-u, 0.0)
    pmax = pos.max()
    nmax = neg.max()
    if pmax == 0.0 or nmax == 0.0:
        raise ValueError("iterate collapsed to one sign; cannot normalize parts")
    return pos / pmax - neg / nmax


def ridge_pins(grid: Grid, d: np.ndarray | None = None, tol: float | None = None):
    """Default ground-state pinning: the high ridge gets value r1."""
    if d is None:
        d = distance_transform(grid)
    if tol is None:
        tol = grid.h / 2.0
    r1 = lambda1(d).radius
    return [(int(i), r1) for i in high_ridge(d, tol)]


def pin_ground_state_ridge(grid: Grid, d: np.ndarray | None = None) -> Grid:
    return set_pinned(grid, ridge_pins(grid, d))


def initialize(grid: Grid, d: np.ndarray | None, init: InitSpec) -> np.ndarray:
    """Initial field per the init spec, pinned values forced."""
    m = grid.num_nodes
    if init.kind == "distance":
        if d is None:
            d = distance_transform(grid)
        u = np.asarray(d, dtype=float).copy()
    elif init.kind == "zero":
        u = np.zeros(m)
    elif init.kind == "random":
        rng = np.random.default_rng(init.seed)
        u = rng.uniform(-1.0, 1.0, m)
    elif init.kind == "laplacian_eigen":
        u = _laplacian_eigenfunction(grid, init.index)
    else:
        u = np.asarray(init.field_values, dtype=float).copy()
        if u.shape != (m,):
            raise ValueError("custom field length does not match grid")
    u[grid.pinned] = grid.pin_value[grid.pinned]
    return u


def _laplacian_eigenfunction(grid: Grid, k: int) -> np.ndarray:
    """k-th Dirichlet Laplacian eigenfunction, max-normalized.

    Closed form on the (un-punctured) square/rectangle, sparse 5-point
    eigensolve everywhere else."""
    dom = grid.domain
    if dom.shape in ("square", "rectangle") and not dom.punctures:
        if dom.shape == "square":
            a = b = 1.0
        else:
            a, b = dom.params["half_width"], dom.params["half_height"]
        modes = []
        for j in range(1, 7):
            for m_ in range(1, 7):
                mu = (j * np.pi / (2 * a)) ** 2 + (m_ * np.pi / (2 * b)) ** 2
                modes.append((mu, j, m_))
        modes.sort()
        if k > len(modes):
            raise ValueError(f"laplacian_eigen index {k} exceeds basis size")
        _, j, m_ = modes[k - 1]
        x, y = grid.nodes[:, 0], grid.nodes[:, 1]
        u = (np.sin(j * np.pi * (x + a) / (2 * a))
             * np.sin(m_ * np.pi * (y + b) / (2 * b)))
        return u / np.abs(u).max()
    return _sparse_laplacian_eigenfunction(grid, k)


def _sparse_laplacian_eigenfunction(grid: Grid, k: int) -> np.ndarray:
    mi = grid.interior.size
    if k > mi:
        raise ValueError(f"laplacian_eigen index {k} exceeds basis size")
    pos = {(int(iy), int(ix)): t
           for t, (iy, ix) in enumerate(grid.lattice[grid.interior])}
    rows, cols, vals = [], [], []
    inv_h2 = 1.0 / grid.h ** 2
    for t, (iy, ix) in enumerate(grid.lattice[grid.interior]):
        rows.append(t)
        cols.append(t)
        vals.append(4.0 * inv_h2)
        for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            s = pos.get((int(iy) + dy, int(ix) + dx))
            if s is not None:
                rows.append(t)
                cols.append(s)
                vals.append(-inv_h2)
    a = csr_matrix((vals, (rows, cols)), shape=(mi, mi))
    v0 = np.ones(mi)
    _, vecs = eigsh(a, k=k, sigma=0.0, which="LM", v0=v0)
    v = vecs[:, k - 1]
    lead = np.flatnonzero(np.abs(v) > 1e-8 * np.abs(v).max())[0]
    if v[lead] < 0:
        v = -v
    u = np.zeros(grid.num_nodes)
    u[grid.interior] = v / np.abs(v).max()
    return u


def solve(grid: Grid, spec: SchemeSpec, config: SolverConfig):
    """Iterate the Euler map until the combined stopping criterion
    crit = max(||u - u_prev||_inf / ||u||_inf, ||F[u_prev]||_inf) drops
    below tol or the iteration budget runs out.

    For normalized runs the report carries the least-squares eigenvalue
    defect c with F[u] ~ c u.  A normalized phase can only drive the
    residual down to |c|·||u||, so whenever it ends with |c| > 10 tol
    (converged or budget exhausted) the solve automatically restarts
    un-normalized from the intermediate field, anchoring the peaks of
    the intermediate solution at +/- 1/lambda; without the anchor each
    nodal domain drifts at its own geometric rate and the restart
    cannot settle on a root.
    """
    if config.normalize and spec.kind != "higher":
        raise ValueError("normalization is only meaningful for the higher scheme")
    tol = config.tol if config.tol is not None else default_tol(grid)

    u = initialize(grid, None, config.init)
    crit = np.inf
    k = 0
    while k < config.max_iters and crit > tol:
        u_prev = u
        res = residual(grid, u_prev, spec)
        u = euler_step(u_prev, res, config.rho)
        if config.normalize:
            u = normalize_parts(u)
        unorm = np.abs(u).max()
        step = np.abs(u - u_prev).max()
        if unorm == 0.0:
            rel = 0.0 if step == 0.0 else np.inf
        else:
            rel = step / unorm
        crit = max(rel, np.abs(res).max())
        k += 1

    final_res = residual(grid, u, spec)
    report = SolveReport(
        iterations=k,
        crit=float(crit),
        residual_inf=float(np.abs(final_res).max()),
        converged=bool(crit <= tol),
        eigen_defect=None,
    )
    if config.normalize:
        denom = float(u @ u)
        c = float(final_res @ u) / denom if denom > 0 else np.inf
        report.eigen_defect = c
        if abs(c) > 10.0 * tol:
            peak = 1.0 / spec.lam
            anchored = set_pinned(grid, [(int(np.argmax(u)), peak),
                                         (int(np.argmin(u)), -peak)])
            restart = replace(
                config, normalize=False,
                init=InitSpec(kind="custom", field_values=peak * u),
            )
            u, inner = solve(anchored, spec, restart)
            final_res = residual(anchored, u, spec)
            denom = float(u @ u)
            report = SolveReport(
                iterations=report.iterations + inner.iterations,
                crit=inner.crit,
                residual_inf=inner.residual_inf,
                converged=inner.converged,
                eigen_defect=float(final_res @ u) / denom if denom > 0 else np.inf,
            )
    return u, report
