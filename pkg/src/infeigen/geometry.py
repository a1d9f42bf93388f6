"""Parametric 2-D domains as point-membership predicates.

All shapes live inside the computational box [-1, 1]^2 and use the
open-interior convention: points on the analytic boundary report False.
Grid construction classifies boundary-adjacent lattice nodes, so the
boundary never needs to be hit exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = ["DomainSpec", "contains", "GALLERY_DOMAINS"]

_SHAPES = {
    "square",
    "rectangle",
    "disk",
    "ellipse",
    "triangle",
    "l_shape",
    "dumbbell",
    "heart",
    "square_minus_disk",
}

# Default parameters per shape; user params override.
_DEFAULTS = {
    "square": {},
    "rectangle": {"half_width": 1.0, "half_height": 0.5},
    "disk": {"radius": 1.0},
    "ellipse": {"semi_axis_a": 0.9, "semi_axis_b": 0.55},
    "triangle": {"vertices": ((-0.9, -0.9), (0.9, -0.9), (0.0, 0.9))},
    "l_shape": {},
    "dumbbell": {"neck_half_width": 0.5, "neck_half_height": 0.1},
    "heart": {},
    "square_minus_disk": {"center": (0.5, 0.5), "radius": 0.35},
}

# Heart: classic sextic heart curve (x^2 + y^2 - 1)^3 - x^2 y^3 < 0,
# shrunk and shifted to fit inside [-1, 1]^2.
_HEART_SCALE = 0.75
_HEART_SHIFT = 0.15


@dataclass(frozen=True)
class DomainSpec:
    """Shape name, shape parameters, and puncture points.

    Punctures are isolated points removed from the interior; they become
    pinned grid nodes, not holes, and do not affect membership.
    """

    shape: str
    params: dict = field(default_factory=dict)
    punctures: tuple = ()

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")
        merged = dict(_DEFAULTS[self.shape])
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        object.__setattr__(
            self, "punctures", tuple((float(x), float(y)) for x, y in self.punctures)
        )
        self._validate()

    def _validate(self):
        p = self.params
        scalars = [v for k, v in p.items() if k not in ("vertices", "center")]
        if any(not (v > 0) for v in scalars):
            raise ValueError(f"shape parameters must be strictly positive: {p}")
        if self.shape == "triangle":
            (ax, ay), (bx, by), (cx, cy) = p["vertices"]
            area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if area2 == 0.0:
                raise ValueError("triangle vertices are collinear")
        for pt in self.punctures:
            if not contains(self, pt):
                raise ValueError(f"puncture {pt} lies outside the {self.shape}")

    # -- JSON wire format -------------------------------------------------

    def to_json(self) -> dict:
        params = {
            k: (list(map(list, v)) if k == "vertices" else
                (list(v) if k == "center" else v))
            for k, v in self.params.items()
        }
        return {
            "shape": self.shape,
            "params": params,
            "punctures": [list(pt) for pt in self.punctures],
        }

    @classmethod
    def from_json(cls, obj) -> "DomainSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        params = dict(obj.get("params", {}))
        if "vertices" in params:
            params["vertices"] = tuple(tuple(v) for v in params["vertices"])
        if "center" in params:
            params["center"] = tuple(params["center"])
        return cls(obj["shape"], params, tuple(map(tuple, obj.get("punctures", ()))))


def contains(domain: DomainSpec, point) -> bool:
    """True iff ``point`` lies in the open interior of the shape.

    Punctures are ignored here; they are handled at grid construction.
    """
    x, y = float(point[0]), float(point[1])
    p = domain.params
    s = domain.shape
    if s == "square":
        return abs(x) < 1.0 and abs(y) < 1.0
    if s == "rectangle":
        return abs(x) < p["half_width"] and abs(y) < p["half_height"]
    if s == "disk":
        return x * x + y * y < p["radius"] ** 2
    if s == "ellipse":
        a, b = p["semi_axis_a"], p["semi_axis_b"]
        return (x / a) ** 2 + (y / b) ** 2 < 1.0
    if s == "triangle":
        return _in_triangle(x, y, p["vertices"])
    if s == "l_shape":
        return abs(x) < 1.0 and abs(y) < 1.0 and (x < 0.0 or y < 0.0)
    if s == "dumbbell":
        w, hh = p["neck_half_width"], p["neck_half_height"]
        in_bulb = 0.2 < abs(x) < 1.0 and abs(y) < 0.4
        in_neck = abs(x) < w and abs(y) < hh
        return in_bulb or in_neck
    if s == "heart":
        hx = x / _HEART_SCALE
        hy = (y + _HEART_SHIFT) / _HEART_SCALE
        return (hx * hx + hy * hy - 1.0) ** 3 - hx * hx * hy ** 3 < 0.0
    if s == "square_minus_disk":
        cx, cy = p["center"]
        r = p["radius"]
        if not (abs(x) < 1.0 and abs(y) < 1.0):
            return False
        return (x - cx) ** 2 + (y - cy) ** 2 > r * r
    raise AssertionError(s)


def _in_triangle(x, y, verts) -> bool:
    # Strict interior: all three edge cross products share the triangle's
    # orientation sign.
    (ax, ay), (bx, by), (cx, cy) = verts
    orient = math.copysign(1.0, (bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
    for (px, py), (qx, qy) in (((ax, ay), (bx, by)), ((bx, by), (cx, cy)),
                               ((cx, cy), (ax, ay))):
        cross = (qx - px) * (y - py) - (qy - py) * (x - px)
        if cross * orient <= 0.0:
            return False
    return True


# Domains of the ground-state gallery, top row convex, bottom row not.
GALLERY_DOMAINS = (
    "square_minus_disk",
    "ellipse",
    "triangle",
    "l_shape",
    "dumbbell",
    "heart",
)
