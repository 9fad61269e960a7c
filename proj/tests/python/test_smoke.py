import math

import numpy as np
import pytest

import sphereppw as sp


def test_hemisphere():
    r = sp.ball_spectrum(3, math.pi / 2)
    assert r["lambda1"] == pytest.approx(3.0, rel=1e-10)
    assert r["lambda2"] == pytest.approx(8.0, rel=1e-10)
    assert r["equality"]


def test_s3_closed_form():
    for th in (0.5, 1.0, 2.0):
        assert sp.ball_spectrum(3, th)["lambda1"] == pytest.approx((math.pi / th) ** 2 - 1, rel=1e-10)


def test_scan_monotone():
    t = np.linspace(0.1, 1.5, 30)
    s = sp.scan(2, t)
    ratio = s["lambda2"] / s["lambda1"]
    assert np.all(np.diff(ratio) > 0)
    assert np.all(np.diff(s["scaled_lambda1"]) < 0)


def test_perturbation():
    r = sp.perturbation(2, 1.0)
    assert r["dlambda1_dc"] == pytest.approx(r["fd1"], abs=1e-6)
    assert r["dlambda1_dc"] < 0 < r["dlambda2_dc"]


def test_profile_hemisphere():
    g = sp.gap_profile(2, math.pi / 2, samples=200)
    assert np.allclose(g["q"], np.cos(g["theta"]), atol=1e-8)
    assert g["p_structure_ok"] and g["q_bounds_ok"]


def test_rearrange():
    s, v = sp.rearrange([1.0, 3.0, 2.0], [2.0, 1.0, 0.5])
    assert list(v) == [3.0, 2.0, 1.0]
    assert s[-1] == pytest.approx(3.5)
    assert sp.theta_of_volume(2, sp.cap_volume(2, 0.7)) == pytest.approx(0.7)


def test_chiti_self():
    assert sp.chiti_ball(2, 1.0)["verdict"] == "identical"


def test_domain():
    d = sp.domain("perturbed", amplitude=0.1, h=0.08, estimate=False)
    assert d["lambda2"] < d["lambda2_ball"]
    assert d["ppw_margins"]["lambda2"] > 0
    assert max(abs(x) for x in d["orthogonality"]) < 1e-8


def test_errors():
    with pytest.raises(ValueError):
        sp.ball_spectrum(1, 1.0)
    with pytest.raises(ValueError):
        sp.domain("sphere")


def test_criterion():
    r = sp.criterion(1)
    assert r["pass"] and len(r["checks"]) == 5
