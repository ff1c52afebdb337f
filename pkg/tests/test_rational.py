import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from rndf.errors import ClassError, DomainError, ValidityError
from rndf.rational import (
    b_map,
    classify,
    corner_asymptotic,
    fit_eighth_root,
    fit_point,
    gauss_sum,
    side_limits,
    spiral_asymptotic,
)
from rndf.series import EvalConfig, eval_phi, eval_R

CFG = EvalConfig(tol=1e-9)
EIGHTHS = [cmath.exp(1j * k * math.pi / 4) for k in range(8)]


def slope(hs, rs):
    return np.polyfit(np.log(hs), np.log(rs), 1)[0]


def test_classify_examples():
    assert classify(1, 2).klass == "spiral"
    assert classify(1, 8).klass == "corner"
    pt = classify(1, 6)
    assert pt.klass == "spiral" and pt.q_tilde == 3
    assert classify(2, 7).q_tilde == 7
    with pytest.raises(DomainError):
        classify(2, 4)


@given(st.integers(0, 500), st.integers(1, 500))
def test_classify_rule(p, q):
    if math.gcd(p, q) != 1:
        return
    pt = classify(p, q)
    assert (pt.klass == "spiral") == (q % 4 == 2)
    assert pt.q_tilde == (q if q % 2 else q // 2)
    assert pt.validity_radius == 1 / (16 * math.pi * pt.q_tilde**2)


def test_gauss_examples():
    assert gauss_sum(1, 0, 1) == 1
    assert abs(gauss_sum(1, 0, 3) - 1j * math.sqrt(3)) < 1e-14
    assert abs(gauss_sum(1, 0, 4) - 2 * (1 + 1j)) < 1e-14


def test_gauss_magnitudes_exhaustive():
    for q in range(1, 51):
        for p in range(q):
            if math.gcd(p, q) != 1:
                continue
            g = gauss_sum(p, 0, q)
            assert abs(g - oracles.gauss(p, 0, q)) < 1e-11
            mags = [math.sqrt(q), math.sqrt(2 * q), 0.0]
            assert min(abs(abs(g) - m) for m in mags) < 1e-11


@given(st.integers(-100, 100), st.integers(-100, 100), st.integers(1, 60))
def test_gauss_general_against_oracle(p, m, q):
    assert abs(gauss_sum(p, m, q) - oracles.gauss(p, m, q)) < 1e-10


def test_fit_at_origin():
    r = fit_eighth_root(classify(0, 1), CFG)
    assert r.k == 0 and r.residual < 0.2


CORNERS = [(p, q) for q in range(1, 21) if q % 4 != 2 for p in range(q) if math.gcd(p, q) == 1]


@pytest.mark.parametrize("p,q", CORNERS[::5])
def test_fit_matches_gauss_cross_check(p, q):
    pt = fit_point(p, q, CFG)
    assert min(abs(pt.e_fit - e) for e in EIGHTHS) < 1e-12
    g = gauss_sum(-p, 0, q) * math.sqrt(pt.q_tilde) / q
    assert abs(pt.e_fit - g) < 1e-9


def test_fit_rejects_spiral():
    with pytest.raises(ClassError):
        fit_eighth_root(classify(1, 2))
    with pytest.raises(ClassError):
        corner_asymptotic(classify(1, 2), 1e-4)
    with pytest.raises(ClassError):
        spiral_asymptotic(classify(1, 3), 1e-4)


def test_b_map():
    assert b_map(0.0, 2, 1) == 0
    assert abs(b_map(0.01, 2, 1) - 0.01 / (1 + 0.08 * math.pi)) < 1e-15
    assert round(b_map(0.01, 2, 1), 5) == 0.00799
    pole = -1 / (4 * math.pi * 2 * 3)
    with pytest.raises(DomainError):
        b_map(pole, 2, 3)


def test_corner_residual_orders():
    pt = fit_point(1, 3, CFG)
    f0 = eval_phi(pt.point, CFG)
    hs = np.geomspace(1e-3, 1e-6, 7)
    full, lead_only = [], []
    for h in hs:
        d = eval_phi(pt.point.shift(h), CFG) - f0
        a = corner_asymptotic(pt, h, CFG)
        assert a.order == 2.5 and a.validity_radius <= 1 / (16 * math.pi * 9)
        lead = pt.e_fit * (1 + 1j) / math.sqrt(2 * math.pi) * math.sqrt(h / 3)
        full.append(abs(d - a.value))
        lead_only.append(abs(d - lead))
    assert abs(slope(hs, full) - 2.5) <= 0.3
    assert abs(slope(hs, lead_only) - 1.5) <= 0.2


def test_corner_left_branch():
    pt = fit_point(1, 3, CFG)
    f0 = eval_phi(pt.point, CFG)
    hs = -np.geomspace(1e-4, 1e-6, 5)
    res = [abs(eval_phi(pt.point.shift(h), CFG) - f0 - corner_asymptotic(pt, h, CFG).value) for h in hs]
    assert abs(slope(-hs, res) - 2.5) <= 0.3


def test_validity_errors():
    pt = fit_point(1, 3, CFG)
    with pytest.raises(DomainError):
        corner_asymptotic(pt, 0.0)
    with pytest.raises(ValidityError):
        corner_asymptotic(pt, 0.01)
    with pytest.raises((DomainError, ValidityError)):
        spiral_asymptotic(classify(1, 2), 0.0)


def test_spiral_ratio_bounded():
    pt = classify(1, 2)
    f0 = eval_phi(pt.point, CFG)
    ratios = []
    for h in np.geomspace(1e-3, 1e-7, 9):
        d = eval_phi(pt.point.shift(h), CFG) - f0
        ratios.append(abs(d) / h**1.5)
    assert 0 < min(ratios) and max(ratios) / min(ratios) < 50


def test_spiral_leading_term():
    pt = fit_point(1, 2, CFG)
    f0 = eval_phi(pt.point, CFG)
    for h in (1e-4, -1e-4, 1e-5, -1e-5):
        d = eval_phi(pt.point.shift(h), CFG) - f0
        a = spiral_asymptotic(pt, h, CFG).value
        assert abs(d - a) <= 0.05 * abs(h) ** 1.5 + 1e-8


def test_side_limits_perpendicular():
    for p, q in CORNERS[::15]:
        r, l = side_limits(fit_point(p, q, CFG))
        assert abs(abs(cmath.phase(l / r)) - math.pi / 2) < 1e-12


@pytest.mark.parametrize("x", [(1, 3), (3, 5), (1, 1)])
def test_gerver_points(x):
    # R(pi x) has derivative -1/2 when p and q are odd
    u = x[0] / x[1]
    cfg = EvalConfig(tol=1e-9)
    errs = []
    for h in (1e-3, 1e-4, 1e-5, 1e-6):
        d = (eval_R(math.pi * (u + h), cfg) - eval_R(math.pi * (u - h), cfg)) / (2 * math.pi * h)
        errs.append(abs(d + 0.5))
    assert errs[-1] <= 0.05
    assert all(b < a for a, b in zip(errs, errs[1:]))
