import json

import numpy as np
import pytest

from infeigen.geometry import GALLERY_DOMAINS, DomainSpec, contains


def test_square_membership():
    sq = DomainSpec("square")
    assert contains(sq, (0.0, 0.0))
    assert not contains(sq, (1.0, 0.0))
    assert not contains(sq, (0.0, -1.0))


def test_rectangle_membership():
    r = DomainSpec("rectangle", {"half_width": 1.0, "half_height": 0.5})
    assert not contains(r, (0.0, 0.6))
    assert contains(r, (0.9, 0.4))


def test_disk_open_convention():
    d = DomainSpec("disk", {"radius": 1.0})
    assert contains(d, (0.999, 0.0))
    assert not contains(d, (1.0, 0.0))


@pytest.mark.parametrize("name", sorted({"square", "l_shape", "dumbbell",
                                         "heart", "square_minus_disk",
                                         *GALLERY_DOMAINS}))
def test_all_shapes_fit_in_box_and_are_nonempty(name):
    dom = DomainSpec(name)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1.5, 1.5, size=(4000, 2))
    inside = [p for p in pts if contains(dom, p)]
    assert inside, f"{name} looks empty"
    for x, y in inside:
        assert abs(x) < 1.0 and abs(y) < 1.0, f"{name} exceeds the unit box"


def test_square_dihedral_symmetry():
    sq = DomainSpec("square")
    rng = np.random.default_rng(1)
    for x, y in rng.uniform(-1.2, 1.2, size=(300, 2)):
        ref = contains(sq, (x, y))
        for sx in (1, -1):
            for sy in (1, -1):
                assert contains(sq, (sx * x, sy * y)) == ref
                assert contains(sq, (sx * y, sy * x)) == ref


@pytest.mark.parametrize("name,params", [
    ("square", {}),
    ("rectangle", {"half_width": 0.8, "half_height": 0.3}),
    ("disk", {"radius": 0.7}),
    ("ellipse", {"semi_axis_a": 0.9, "semi_axis_b": 0.4}),
    ("triangle", {"vertices": ((-0.9, -0.8), (0.8, -0.7), (0.1, 0.9))}),
])
def test_convex_shapes_closed_under_convex_combination(name, params):
    dom = DomainSpec(name, params)
    rng = np.random.default_rng(2)
    members = []
    while len(members) < 40:
        p = rng.uniform(-1, 1, 2)
        if contains(dom, p):
            members.append(p)
    for _ in range(200):
        a, b = rng.integers(0, len(members), 2)
        t = rng.uniform()
        mid = (1 - t) * members[a] + t * members[b]
        assert contains(dom, mid)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        DomainSpec("disk", {"radius": -1.0})
    with pytest.raises(ValueError):
        DomainSpec("triangle", {"vertices": ((0, 0), (1, 1), (2, 2))})
    with pytest.raises(ValueError):
        DomainSpec("nonagon")


def test_puncture_must_lie_inside():
    DomainSpec("square", punctures=((0.0, 0.0),))
    with pytest.raises(ValueError):
        DomainSpec("disk", {"radius": 0.5}, punctures=((0.9, 0.0),))


def test_json_round_trip():
    dom = DomainSpec("triangle",
                     {"vertices": ((-0.9, -0.9), (0.9, -0.9), (0.0, 0.9))},
                     punctures=((0.0, -0.2),))
    blob = json.dumps(dom.to_json())
    back = DomainSpec.from_json(blob)
    assert back == dom
    assert DomainSpec.from_json(dom.to_json()) == dom
