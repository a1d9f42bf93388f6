import numpy as np
import pytest

from infeigen.continuum import (
    SecondOrderJet,
    aronsson_jet,
    cosine_bump_jet,
    eval_F_lambda,
    eval_H_lambda,
    infinity_laplacian,
)


def _random_jet(rng, u=None):
    return SecondOrderJet(
        u=float(rng.normal()) if u is None else u,
        p=rng.normal(size=2),
        M=rng.normal(size=(2, 2)),
    )


def test_infinity_laplacian_picks_quadratic_form():
    jet = SecondOrderJet(u=3.0, p=(1.0, 0.0), M=np.diag([2.0, -7.0]))
    assert infinity_laplacian(jet) == 2.0
    zero_p = SecondOrderJet(u=1.0, p=(0.0, 0.0), M=np.diag([5.0, 5.0]))
    assert infinity_laplacian(zero_p) == 0.0


def test_aronsson_function_is_infinity_harmonic():
    jet = aronsson_jet(0.5, 0.25)
    assert abs(infinity_laplacian(jet)) < 1e-14
    for x, y in [(0.3, -0.7), (-0.9, 0.1), (0.01, 0.8)]:
        assert abs(infinity_laplacian(aronsson_jet(x, y))) < 1e-12


def test_aronsson_jet_rejects_axes():
    with pytest.raises(ValueError):
        aronsson_jet(0.0, 1.0)


def test_F_lambda_three_cases():
    up = SecondOrderJet(u=1.0, p=(1.0, 0.0), M=np.zeros((2, 2)))
    assert eval_F_lambda(up, 1.0) == 0.0
    mid = SecondOrderJet(u=0.0, p=(3.0, 4.0), M=np.diag([1.0, 0.0]))
    assert eval_F_lambda(mid, 5.0) == -9.0
    down = SecondOrderJet(u=-1.0, p=(1.0, 0.0), M=np.zeros((2, 2)))
    assert eval_F_lambda(down, 1.0) == 0.0


def test_H_lambda_hand_values():
    j1 = SecondOrderJet(u=1.0, p=(1.0, 0.0), M=np.zeros((2, 2)))
    assert eval_H_lambda(j1, 1.0) == 0.0
    j2 = SecondOrderJet(u=0.0, p=(1.0, 0.0), M=np.diag([-1.0, 0.0]))
    assert eval_H_lambda(j2, 7.3) == 1.0
    j3 = SecondOrderJet(u=2.0, p=(0.0, 0.0), M=np.zeros((2, 2)))
    lam = 1.7
    assert eval_H_lambda(j3, lam) == -lam * 2.0


def test_H_lambda_degenerate_ellipticity():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        jet_n = _random_jet(rng)
        a = rng.normal(size=(2, 2))
        m_big = jet_n.M + a @ a.T
        jet_m = SecondOrderJet(u=jet_n.u, p=jet_n.p, M=m_big)
        lam = float(rng.uniform(0.1, 5.0))
        assert eval_H_lambda(jet_m, lam) <= eval_H_lambda(jet_n, lam) + 1e-12


def test_F_lambda_degenerate_ellipticity_within_sign_case():
    rng = np.random.default_rng(8)
    for u in (-1.3, 0.0, 2.4):
        for _ in range(500):
            jet_n = _random_jet(rng, u=u)
            a = rng.normal(size=(2, 2))
            jet_m = SecondOrderJet(u=u, p=jet_n.p, M=jet_n.M + a @ a.T)
            lam = float(rng.uniform(0.1, 5.0))
            assert eval_F_lambda(jet_m, lam) <= eval_F_lambda(jet_n, lam) + 1e-12


def test_H_lambda_scaling_identity():
    # H(c u, c p, M / c) = c H(u, p, M) for c > 0, term by term.
    rng = np.random.default_rng(9)
    for _ in range(500):
        jet = _random_jet(rng)
        lam = float(rng.uniform(0.1, 5.0))
        for c in (0.5, 2.0, 10.0):
            scaled = SecondOrderJet(u=c * jet.u, p=c * jet.p, M=jet.M / c)
            got = eval_H_lambda(scaled, lam)
            want = c * eval_H_lambda(jet, lam)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_H_lambda_zero_case_identity():
    # For u = 0 and -p'Mp <= |p| (the touching-from-above situation):
    # H(0, p, M) = max(-|p|, -p'Mp).  Otherwise H collapses to |p|.
    rng = np.random.default_rng(10)
    seen_identity = seen_other = 0
    for _ in range(2000):
        jet = _random_jet(rng, u=0.0)
        lam = float(rng.uniform(0.1, 5.0))
        gnorm = float(np.linalg.norm(jet.p))
        neg_lap = -infinity_laplacian(jet)
        if neg_lap <= gnorm:
            want = max(-gnorm, neg_lap)
            seen_identity += 1
        else:
            want = gnorm
            seen_other += 1
        assert eval_H_lambda(jet, lam) == pytest.approx(want, abs=1e-14)
    assert seen_identity > 100 and seen_other > 100


def test_jet_symmetrization_and_validation():
    jet = SecondOrderJet(u=0.0, p=(1.0, 2.0), M=[[0.0, 2.0], [0.0, 0.0]])
    assert jet.M[0, 1] == jet.M[1, 0] == 1.0
    with pytest.raises(ValueError):
        SecondOrderJet(u=np.nan, p=(0, 0), M=np.zeros((2, 2)))


def test_cosine_bump_jet_against_finite_differences():
    eps = 1e-6
    for x, y in [(0.2, -0.3), (0.45, 0.1)]:
        jet = cosine_bump_jet(x, y)
        f = lambda a, b: np.cos(np.pi * a / 2) * np.cos(np.pi * b / 2)
        gx = (f(x + eps, y) - f(x - eps, y)) / (2 * eps)
        gy = (f(x, y + eps) - f(x, y - eps)) / (2 * eps)
        assert jet.p[0] == pytest.approx(gx, abs=1e-8)
        assert jet.p[1] == pytest.approx(gy, abs=1e-8)
        hxx = (f(x + eps, y) - 2 * f(x, y) + f(x - eps, y)) / eps**2
        assert jet.M[0, 0] == pytest.approx(hxx, abs=1e-3)
