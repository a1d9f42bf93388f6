import json

import numpy as np
import pytest

from infeigen.cli import (
    EXPERIMENTS,
    linf_diff,
    main,
    read_field_csv,
    write_field_csv,
)
from infeigen.geometry import DomainSpec
from infeigen.grid import build_grid


def test_linf_diff_basic():
    assert linf_diff([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert linf_diff([0.0, 1.0, -3.0], [0.5, 1.0, 1.0]) == 4.0
    with pytest.raises(ValueError):
        linf_diff([1.0], [1.0, 2.0])


def test_field_csv_round_trip_is_bitwise(tmp_path):
    g = build_grid(DomainSpec("disk", {"radius": 0.9}), 17, 2)
    rng = np.random.default_rng(0)
    values = rng.normal(size=g.num_nodes) * 1e-7
    path = tmp_path / "field.csv"
    write_field_csv(path, g, values)
    xs, ys, vals, kinds = read_field_csv(path)
    assert np.array_equal(vals, values)
    assert np.array_equal(xs, g.nodes[:, 0])
    assert np.array_equal(ys, g.nodes[:, 1])
    assert np.array_equal(kinds == "pinned", g.is_pinned)


def test_field_csv_rejects_bad_input(tmp_path):
    g = build_grid(DomainSpec("square"), 9, 1)
    with pytest.raises(ValueError):
        write_field_csv(tmp_path / "x.csv", g, np.zeros(3))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_field_csv(bad)


def _run_solve(tmp_path, cfg):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    return main(["solve", "--config", str(cfg_path)])


def test_solve_default_square_ground_state(tmp_path, capsys):
    field = tmp_path / "u.csv"
    report = tmp_path / "report.json"
    code = _run_solve(tmp_path, {
        "domain": {"shape": "square"},
        "n": 25, "stencil": 2,
        "output": {"field": str(field), "report": str(report)},
    })
    assert code == 0
    rep = json.loads(report.read_text())
    assert rep["converged"] is True
    _, _, vals, _ = read_field_csv(field)
    g = build_grid(DomainSpec("square"), 25, 2)
    # Ground state peaks near the in-radius value 1.
    assert vals.max() == pytest.approx(1.0, abs=g.h)
    out = capsys.readouterr().out
    assert "converged=True" in out


def test_solve_budget_of_one_reports_non_convergence(tmp_path):
    code = _run_solve(tmp_path, {
        "domain": {"shape": "square"},
        "n": 25, "stencil": 2,
        "solver": {"max_iters": 1},
    })
    assert code == 2


def test_solve_malformed_config_exits_one(tmp_path, capsys):
    cfg_path = tmp_path / "broken.json"
    cfg_path.write_text("{not json")
    assert main(["solve", "--config", str(cfg_path)]) == 1
    assert "error:" in capsys.readouterr().err

    cfg_path2 = tmp_path / "badshape.json"
    cfg_path2.write_text(json.dumps({"domain": {"shape": "pentagon"}}))
    assert main(["solve", "--config", str(cfg_path2)]) == 1


def test_solve_with_explicit_pins_and_harmonic_scheme(tmp_path):
    field = tmp_path / "u.csv"
    code = _run_solve(tmp_path, {
        "domain": {"shape": "square", "punctures": [[0.0, 0.0]]},
        "n": 17, "stencil": 2,
        "scheme": {"kind": "infinity_harmonic"},
        "pins": [[0.0, 0.0, 1.0]],
        "output": {"field": str(field)},
    })
    assert code == 0
    _, _, vals, kinds = read_field_csv(field)
    assert vals.max() == pytest.approx(1.0)
    assert vals.min() >= -1e-12


def test_distance_command(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = main(["distance", "--domain", '{"shape": "square"}',
                 "--n", "25", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "lambda1=" in printed
    xs, ys, vals, kinds = read_field_csv(out)
    assert vals.max() == pytest.approx(1.0, abs=2 / 24)
    assert np.all(vals[kinds == "pinned"] == 0.0)


def test_experiment_rejects_unknown_name(tmp_path):
    with pytest.raises(SystemExit):
        main(["experiment", "no_such_study", "--out", str(tmp_path)])


def test_experiment_registry_is_complete():
    assert set(EXPERIMENTS) == {
        "stencil_study", "square_vs_harmonic", "rectangle_nonuniqueness",
        "gallery", "dumbbell_ridge", "second_eigenfunctions",
        "higher_square", "triangle_normalized",
    }


def test_rectangle_nonuniqueness_experiment_small(tmp_path):
    code = main(["experiment", "rectangle_nonuniqueness",
                 "--out", str(tmp_path), "--n", "25", "--stencil", "2"])
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    runs = summary["runs"]
    assert runs["distance"]["report"]["converged"]
    assert runs["zero"]["report"]["converged"]
    assert summary["linf_diff"] > 0.01
    # The zero-initialized branch concentrates at the pinned origin.
    assert runs["zero"]["argmax_xy"] == [0.0, 0.0]
    assert (tmp_path / "init_distance.csv").exists()
    assert (tmp_path / "init_zero.csv").exists()


def test_dumbbell_ridge_experiment_small(tmp_path):
    code = main(["experiment", "dumbbell_ridge",
                 "--out", str(tmp_path), "--n", "33", "--stencil", "2"])
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["ridge_cluster_count"] == 2
