"""Command-line front end: configured solves, experiment reproduction,
and field / report export.

Fields go to CSV (``x,y,value,kind`` in row-major node order, floats in
round-trip precision); reports and experiment summaries go to JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np
from scipy import ndimage

from .distance import (
    distance_transform,
    high_ridge,
    lambda1,
    lambda2_two_ball,
    worker_count,
)
from .geometry import GALLERY_DOMAINS, DomainSpec
from .grid import Grid, build_grid, set_pinned
from .schemes import SchemeSpec, oberman_pair, residual, steepest_ascent
from .solver import InitSpec, SolverConfig, default_tol, ridge_pins, solve
from . import continuum

__all__ = ["main", "linf_diff", "write_field_csv", "read_field_csv",
           "EXPERIMENTS"]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def linf_diff(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("field lengths differ")
    return float(np.abs(a - b).max())


# ---------------------------------------------------------------------------
# Field CSV

def write_field_csv(path, grid: Grid, values) -> None:
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.num_nodes,):
        raise ValueError("field length does not match grid")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["x", "y", "value", "kind"])
        for i in range(grid.num_nodes):
            kind = "pinned" if grid.is_pinned[i] else "interior"
            w.writerow([repr(float(grid.nodes[i, 0])),
                        repr(float(grid.nodes[i, 1])),
                        repr(float(values[i])), kind])


def read_field_csv(path):
    xs, ys, vals, kinds = [], [], [], []
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != ["x", "y", "value", "kind"]:
            raise ValueError(f"unexpected field CSV header: {header}")
        for row in r:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
            vals.append(float(row[2]))
            kinds.append(row[3])
    return (np.array(xs), np.array(ys), np.array(vals), np.array(kinds))


# ---------------------------------------------------------------------------
# Configured solve

def _scheme_from_config(cfg, grid: Grid):
    kind = cfg.get("kind", "ground_state")
    lam = cfg.get("lambda")
    if lam is None and kind != "infinity_harmonic":
        lam = lambda1(distance_transform(grid)).lam
    return SchemeSpec(kind=kind, lam=lam)


def _solver_from_config(cfg) -> SolverConfig:
    init_cfg = cfg.get("init", {})
    init = InitSpec(
        kind=init_cfg.get("kind", "distance"),
        seed=int(init_cfg.get("seed", 0)),
        index=int(init_cfg.get("index", 1)),
    )
    return SolverConfig(
        rho=float(cfg.get("rho", 0.9)),
        max_iters=int(cfg.get("max_iters", 3000)),
        tol=cfg.get("tol"),
        normalize=bool(cfg.get("normalize", False)),
        init=init,
    )


def _nearest_node(grid: Grid, x: float, y: float) -> int:
    d2 = (grid.nodes[:, 0] - x) ** 2 + (grid.nodes[:, 1] - y) ** 2
    return int(np.argmin(d2))


def cmd_solve(config_path: str) -> int:
    with open(config_path) as f:
        cfg = json.load(f)
    domain = DomainSpec.from_json(cfg["domain"])
    n = int(cfg.get("n", 97))
    s = int(cfg.get("stencil", 5))
    grid = build_grid(domain, n, s)

    pins = [(_nearest_node(grid, float(x), float(y)), float(v))
            for x, y, v in cfg.get("pins", [])]
    scheme_cfg = cfg.get("scheme", {})
    if pins:
        grid = set_pinned(grid, pins)
    elif scheme_cfg.get("kind", "ground_state") == "ground_state" \
            and not domain.punctures:
        # Zero solves the scheme too; pin the high ridge to r1 by default.
        grid = set_pinned(grid, ridge_pins(grid))

    spec = _scheme_from_config(scheme_cfg, grid)
    config = _solver_from_config(cfg.get("solver", {}))
    u, report = solve(grid, spec, config)

    out = cfg.get("output", {})
    if "field" in out:
        write_field_csv(out["field"], grid, u)
    if "report" in out:
        report.dump(out["report"])
    print(f"scheme={spec.kind} lambda="
          f"{_fmt(spec.lam) if spec.lam is not None else 'n/a'} "
          f"iterations={report.iterations} crit={_fmt(report.crit)} "
          f"residual_inf={_fmt(report.residual_inf)} "
          f"converged={report.converged}")
    return 0 if report.converged else 2


# ---------------------------------------------------------------------------
# Experiments

def _ground_state_solve(domain, n, s, pin_ridge=True, extra_pins=(),
                        init=None, lam=None, max_iters=3000):
    grid = build_grid(domain, n, s)
    d = distance_transform(grid)
    if lam is None:
        lam = lambda1(d).lam
    pins = list(extra_pins)
    if pin_ridge:
        pins += ridge_pins(grid, d)
    if pins:
        grid = set_pinned(grid, pins)
    spec = SchemeSpec("ground_state", lam)
    config = SolverConfig(init=init or InitSpec("distance"),
                          max_iters=max_iters)
    u, report = solve(grid, spec, config)
    return grid, u, report, lam


def _consistency_errors(grid: Grid, lam: float):
    """Mean scaled-scheme error against the continuum oracle on the
    smooth cosine bump, over central interior nodes."""
    x, y = grid.nodes[:, 0], grid.nodes[:, 1]
    phi = (np.cos(np.pi * x / 2) * np.cos(np.pi * y / 2))
    probe = [i for i in grid.interior
             if 0.1 <= abs(x[i]) <= 0.5 and 0.1 <= abs(y[i]) <= 0.5]
    probe = probe[:: max(len(probe) // 200, 1)]
    err1, err2 = [], []
    for i in probe:
        jet = continuum.cosine_bump_jet(x[i], y[i])
        gnorm = float(np.linalg.norm(jet.p))
        target1 = gnorm - lam * jet.u
        target2 = -continuum.infinity_laplacian(jet)
        jn, dist, q = steepest_ascent(grid, phi, i)
        err1.append(abs((q - lam * phi[i]) - target1))
        r, s_, dr, ds = oberman_pair(grid, phi, i)
        ustar = (ds * phi[r] + dr * phi[s_]) / (dr + ds)
        err2.append(abs((phi[i] - ustar) / (dr * ds) - target2))
    return float(np.mean(err1)), float(np.mean(err2))


def exp_stencil_study(outdir: Path, n: int, s: int, seed: int) -> dict:
    radii = (1, 2, 3, 5)
    summary = {"stencil_radii": list(radii), "runs": []}
    for radius in radii:
        grid, u, report, lam = _ground_state_solve(
            DomainSpec("square"), n, radius)
        write_field_csv(outdir / f"ground_state_s{radius}.csv", grid, u)
        e1, e2 = _consistency_errors(grid, lam)
        summary["runs"].append({
            "stencil_radius": radius,
            "iterations": report.iterations,
            "converged": report.converged,
            "residual_inf": report.residual_inf,
            "consistency_gradient_term": e1,
            "consistency_infinity_laplacian": e2,
        })
    return summary


def exp_square_vs_harmonic(outdir: Path, n: int, s: int, seed: int) -> dict:
    grid_gs, u_gs, rep_gs, lam = _ground_state_solve(DomainSpec("square"), n, s)
    write_field_csv(outdir / "ground_state.csv", grid_gs, u_gs)

    punctured = DomainSpec("square", punctures=((0.0, 0.0),))
    grid_h = build_grid(punctured, n, s)
    center = _nearest_node(grid_h, 0.0, 0.0)
    grid_h = set_pinned(grid_h, [(center, 1.0)])
    u_h, rep_h = solve(grid_h, SchemeSpec("infinity_harmonic"),
                       SolverConfig(init=InitSpec("distance")))
    write_field_csv(outdir / "harmonic_punctured.csv", grid_h, u_h)
    return {
        "lambda1": lam,
        "linf_diff": linf_diff(u_gs, u_h),
        "ground_state": rep_gs.to_json(),
        "harmonic": rep_h.to_json(),
    }


def exp_rectangle_nonuniqueness(outdir: Path, n: int, s: int, seed: int) -> dict:
    domain = DomainSpec("rectangle", {"half_width": 1.0, "half_height": 0.5},
                        punctures=((0.0, 0.0),))
    runs = {}
    fields = {}
    for init_kind in ("distance", "zero"):
        grid = build_grid(domain, n, s)
        origin = _nearest_node(grid, 0.0, 0.0)
        grid = set_pinned(grid, [(origin, 0.5)])
        d = distance_transform(grid)
        lam = lambda1(d).lam
        u, report = solve(grid, SchemeSpec("ground_state", lam),
                          SolverConfig(init=InitSpec(init_kind)))
        write_field_csv(outdir / f"init_{init_kind}.csv", grid, u)
        amax = int(np.argmax(u))
        runs[init_kind] = {
            "report": report.to_json(),
            "lambda": lam,
            "argmax_xy": [float(grid.nodes[amax, 0]), float(grid.nodes[amax, 1])],
            "max_value": float(u.max()),
        }
        fields[init_kind] = u
    return {
        "runs": runs,
        "linf_diff": linf_diff(fields["distance"], fields["zero"]),
    }


def exp_gallery(outdir: Path, n: int, s: int, seed: int) -> dict:
    summary = {}
    for name in GALLERY_DOMAINS:
        grid, u, report, lam = _ground_state_solve(DomainSpec(name), n, s)
        write_field_csv(outdir / f"{name}.csv", grid, u)
        summary[name] = {
            "lambda1": lam,
            "report": report.to_json(),
            "max_value": float(u.max()),
        }
    return summary


def _lattice_clusters(grid: Grid, node_idx) -> int:
    mask = np.zeros((grid.n, grid.n), dtype=bool)
    mask[grid.lattice[node_idx, 0], grid.lattice[node_idx, 1]] = True
    _, count = ndimage.label(mask, structure=np.ones((3, 3), int))
    return int(count)


def exp_dumbbell_ridge(outdir: Path, n: int, s: int, seed: int) -> dict:
    domain = DomainSpec("dumbbell")
    grid, u, report, lam = _ground_state_solve(domain, n, s)
    write_field_csv(outdir / "dumbbell.csv", grid, u)
    d = distance_transform(build_grid(domain, n, s))
    ridge = high_ridge(d, grid.h / 2)
    probe_grid = build_grid(domain, n, s)
    return {
        "lambda1": lam,
        "report": report.to_json(),
        "ridge_cluster_count": _lattice_clusters(probe_grid, ridge),
        "ridge_xy": [[float(a), float(b)] for a, b in probe_grid.nodes[ridge]],
    }


_SECOND_EF_DOMAINS = {
    "disk": DomainSpec("disk", {"radius": 0.9}),
    "heart": DomainSpec("heart"),
    "l_shape": DomainSpec("l_shape"),
}


def exp_second_eigenfunctions(outdir: Path, n: int, s: int, seed: int) -> dict:
    summary = {}
    for name, domain in _SECOND_EF_DOMAINS.items():
        grid = build_grid(domain, n, s)
        d = distance_transform(grid)
        est = lambda2_two_ball(grid, d)
        i, j = est.witness
        grid2 = set_pinned(grid, [(i, est.radius), (j, -est.radius)])
        u, report = solve(grid2, SchemeSpec("higher", est.lam),
                          SolverConfig(init=InitSpec("zero")))
        write_field_csv(outdir / f"second_{name}.csv", grid2, u)
        summary[name] = {
            "lambda2": est.lam,
            "radius2": est.radius,
            "witness_xy": [[float(a) for a in grid.nodes[w]]
                           for w in est.witness],
            "report": report.to_json(),
        }
    return summary


def _square_mode_lambda(grid: Grid, d, k: int) -> float:
    """Eigenvalue matching the k-th separable Laplacian mode: the nodal
    lines of sin(jθx)·sin(mθy) split the square into boxes, and the
    restriction of an eigenfunction to a nodal domain is a ground state
    there, so Λ is the reciprocal in-radius of one box on the grid."""
    modes = sorted((j * j + m * m, j, m)
                   for j in range(1, 7) for m in range(1, 7))
    _, j, m = modes[k - 1]
    dist = d.copy()
    if j > 1:
        dist = np.minimum(dist, np.abs(grid.nodes[:, 0]))
    if m > 1:
        dist = np.minimum(dist, np.abs(grid.nodes[:, 1]))
    return 1.0 / float(dist.max())


def exp_higher_square(outdir: Path, n: int, s: int, seed: int) -> dict:
    domain = DomainSpec("square")
    grid = build_grid(domain, n, s)
    d = distance_transform(grid)
    summary = {}
    for k in (1, 2, 3):
        lam = _square_mode_lambda(grid, d, k)
        spec = SchemeSpec("ground_state" if k == 1 else "higher", lam)
        u, report = solve(grid, spec,
                          SolverConfig(init=InitSpec("laplacian_eigen", index=k)))
        write_field_csv(outdir / f"square_ef{k}.csv", grid, u)
        denom = float(u @ u)
        res = residual(grid, u, spec)
        summary[f"ef{k}"] = {
            "scheme": spec.kind,
            "lambda": spec.lam,
            "report": report.to_json(),
            "eigen_defect": float(res @ u) / denom if denom > 0 else None,
        }
    return summary


def _nodal_domain_counts(grid: Grid, u, frac: float = 0.1):
    cut = frac * float(np.abs(u).max())
    pos = _lattice_clusters(grid, np.flatnonzero(u > cut))
    neg = _lattice_clusters(grid, np.flatnonzero(u < -cut))
    return pos, neg


def exp_triangle_normalized(outdir: Path, n: int, s: int, seed: int) -> dict:
    domain = DomainSpec("triangle")
    grid = build_grid(domain, n, s)
    d = distance_transform(grid)
    est = lambda2_two_ball(grid, d)
    u, report = solve(
        grid, SchemeSpec("higher", est.lam),
        SolverConfig(normalize=True, init=InitSpec("random", seed=seed)),
    )
    write_field_csv(outdir / "triangle_second.csv", grid, u)
    pos, neg = _nodal_domain_counts(grid, u)
    return {
        "lambda2": est.lam,
        "report": report.to_json(),
        "positive_nodal_domains": pos,
        "negative_nodal_domains": neg,
    }


EXPERIMENTS = {
    "stencil_study": exp_stencil_study,
    "square_vs_harmonic": exp_square_vs_harmonic,
    "rectangle_nonuniqueness": exp_rectangle_nonuniqueness,
    "gallery": exp_gallery,
    "dumbbell_ridge": exp_dumbbell_ridge,
    "second_eigenfunctions": exp_second_eigenfunctions,
    "higher_square": exp_higher_square,
    "triangle_normalized": exp_triangle_normalized,
}

# Pair searches are quadratic in node count, so experiments built on the
# two-ball eigenvalue default to the coarser grid.
_QUADRATIC_EXPERIMENTS = {"second_eigenfunctions"}


def cmd_experiment(name: str, outdir: str, n=None, s=None, seed=0) -> int:
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; "
                         f"choose from {sorted(EXPERIMENTS)}")
    if n is None:
        n = 49 if name in _QUADRATIC_EXPERIMENTS else 97
    if s is None:
        s = 3 if name in _QUADRATIC_EXPERIMENTS else 5
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    summary = EXPERIMENTS[name](out, n, s, seed)
    summary = {"experiment": name, "n": n, "stencil_radius": s,
               "seed": seed, **summary}
    with open(out / "summary.json", "w") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
    print(f"experiment {name}: wrote {out / 'summary.json'}")
    return 0


def cmd_distance(domain_json: str, n: int, out: str) -> int:
    domain = DomainSpec.from_json(domain_json)
    grid = build_grid(domain, n, 1)
    d = distance_transform(grid)
    write_field_csv(out, grid, d)
    est = lambda1(d)
    print(f"r1={_fmt(est.radius)} lambda1={_fmt(est.lam)}")
    return 0


# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="infeigen",
        description="Infinity Laplacian eigenfunctions via monotone "
                    "wide-stencil schemes",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run a solve from a JSON config")
    ps.add_argument("--config", required=True)

    pe = sub.add_parser("experiment", help="reproduce a named experiment")
    pe.add_argument("name", choices=sorted(EXPERIMENTS))
    pe.add_argument("--out", required=True)
    pe.add_argument("--n", type=int, default=None)
    pe.add_argument("--stencil", type=int, default=None)
    pe.add_argument("--seed", type=int, default=0)

    pd = sub.add_parser("distance", help="export a distance field")
    pd.add_argument("--domain", required=True,
                    help="domain spec as inline JSON")
    pd.add_argument("--n", type=int, default=97)
    pd.add_argument("--out", required=True)
    return p


def _apply_thread_cap():
    workers = worker_count()
    if workers > 0:
        import numba
        numba.set_num_threads(max(workers, 1))
    elif os.environ.get("INF_EIGEN_THREADS") == "0":
        import numba
        numba.set_num_threads(1)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    _apply_thread_cap()
    try:
        if args.command == "solve":
            return cmd_solve(args.config)
        if args.command == "experiment":
            return cmd_experiment(args.name, args.out, args.n,
                                  args.stencil, args.seed)
        if args.command == "distance":
            return cmd_distance(args.domain, args.n, args.out)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
