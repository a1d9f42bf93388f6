"""Pointwise continuum operators on second-order jets.

These serve as consistency oracles for the discrete schemes.  The
eigenvalue operator comes in two forms: the sign-cased original and the
single-expression reformulation; both are evaluated exactly as written.
The u = 0 branch uses exact floating-point equality on purpose: the
operator is discontinuous in u, and smoothing would falsify the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SecondOrderJet",
    "infinity_laplacian",
    "eval_F_lambda",
    "eval_H_lambda",
    "aronsson_jet",
    "cosine_bump_jet",
]


@dataclass(frozen=True)
class SecondOrderJet:
    """Value, gradient, and (symmetrized) Hessian at a point."""

    u: float
    p: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(2)
        M = np.asarray(self.M, dtype=float).reshape(2, 2)
        M = 0.5 * (M + M.T)
        if not (np.isfinite(self.u) and np.all(np.isfinite(p))
                and np.all(np.isfinite(M))):
            raise ValueError("jet entries must be finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "M", M)


def infinity_laplacian(jet: SecondOrderJet) -> float:
    """Un-normalized infinity Laplacian p^T M p."""
    return float(jet.p @ jet.M @ jet.p)


def eval_F_lambda(jet: SecondOrderJet, lam: float) -> float:
    """Sign-cased eigenvalue operator."""
    u = jet.u
    gnorm = float(np.linalg.norm(jet.p))
    neg_inf_lap = -infinity_laplacian(jet)
    if u > 0.0:
        return min(gnorm - lam * u, neg_inf_lap)
    if u < 0.0:
        return max(-gnorm - lam * u, neg_inf_lap)
    return neg_inf_lap


def eval_H_lambda(jet: SecondOrderJet, lam: float) -> float:
    """Single-expression reformulation of the eigenvalue operator:
    min(|p| - lam*u, -p'Mp) + max(-|p| - lam*u, -p'Mp) + p'Mp."""
    u = jet.u
    gnorm = float(np.linalg.norm(jet.p))
    inf_lap = infinity_laplacian(jet)
    return (min(gnorm - lam * u, -inf_lap)
            + max(-gnorm - lam * u, -inf_lap)
            + inf_lap)


def aronsson_jet(x: float, y: float) -> SecondOrderJet:
    """Analytic jet of |x|^(4/3) - |y|^(4/3), the classic C^{1,1/3}
    infinity harmonic function.  Requires x != 0 and y != 0 for the
    Hessian to exist."""
    if x == 0.0 or y == 0.0:
        raise ValueError("Hessian undefined on the axes")
    u = abs(x) ** (4 / 3) - abs(y) ** (4 / 3)
    p = np.array([
        (4 / 3) * np.sign(x) * abs(x) ** (1 / 3),
        -(4 / 3) * np.sign(y) * abs(y) ** (1 / 3),
    ])
    M = np.diag([(4 / 9) * abs(x) ** (-2 / 3), -(4 / 9) * abs(y) ** (-2 / 3)])
    return SecondOrderJet(u=u, p=p, M=M)


def cosine_bump_jet(x: float, y: float) -> SecondOrderJet:
    """Smooth positive test profile cos(pi x / 2) cos(pi y / 2) on the
    square, with its analytic gradient and Hessian."""
    c = np.pi / 2
    cx, sx = np.cos(c * x), np.sin(c * x)
    cy, sy = np.cos(c * y), np.sin(c * y)
    u = cx * cy
    p = np.array([-c * sx * cy, -c * cx * sy])
    M = np.array([
        [-c * c * cx * cy, c * c * sx * sy],
        [c * c * sx * sy, -c * c * cx * cy],
    ])
    return SecondOrderJet(u=u, p=p, M=M)
