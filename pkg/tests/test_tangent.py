import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rndf.errors import ConfigError, DegenerateError, DomainError, InconclusiveError
from rndf.rational import fit_point
from rndf.series import EvalConfig, TimePoint
from rndf.tangent import (
    Cone,
    OffsetSchedule,
    SweepSchedule,
    angular_coverage,
    ball_content_bounds,
    cone_member,
    diameter,
    max_angular_gap,
    merge_reports,
    no_tangent_certificate,
    probe_limit,
    secant_direction,
    segment_content,
)

CFG = EvalConfig(tol=1e-9)


def line(tp, cfg):
    return complex(tp.t())


def constant(tp, cfg):
    return 1 + 1j


def test_cone_examples():
    c = Cone(0j, 1 + 0j, math.pi / 4)
    assert cone_member(c, 0j)
    assert cone_member(c, (1 + 1j) / math.sqrt(2))
    assert not cone_member(c, -1 + 0j)
    assert cone_member(Cone(0j, 1 + 0j, math.pi / 4, double=True), -1 + 0j)
    with pytest.raises(ConfigError):
        Cone(0j, 2 + 0j, 0.5)
    with pytest.raises(ConfigError):
        Cone(0j, 1 + 0j, 0.0)


angles = st.floats(min_value=-math.pi, max_value=math.pi)


@given(angles, angles, st.floats(0.01, 3.1), st.floats(0.01, 3.1), st.floats(0.1, 10))
def test_cone_monotone_and_nested(dir_ang, z_ang, a1, a2, rad):
    d = cmath.exp(1j * dir_ang)
    z = rad * cmath.exp(1j * z_ang)
    lo, hi = sorted((a1, a2))
    if cone_member(Cone(0j, d, lo), z):
        assert cone_member(Cone(0j, d, hi), z)
    if cone_member(Cone(0j, d, lo), z):
        assert cone_member(Cone(0j, d, lo, double=True), z)


def test_secant_at_origin():
    for side, want in (("right", (1 + 1j) / math.sqrt(2)), ("left", (1 - 1j) / math.sqrt(2))):
        v = secant_direction(0.0, 1e-8, side, CFG)
        assert abs(abs(v) - 1) < 1e-12
        assert abs(cmath.phase(v / want)) < 1e-3


def test_secant_zero_increment():
    assert secant_direction(0.3, 1e-3, "right", CFG, curve=constant) is None
    with pytest.raises(DomainError):
        secant_direction(0.3, 0.0, "right", CFG)


def test_probe_limit_corner_matches_fit():
    pt = fit_point(1, 3, CFG)
    sched = OffsetSchedule(1e-3 / 9, 10**-0.5, 7, "right")
    rep = probe_limit(pt.point, sched, CFG, rel_tol=1e-3)
    assert rep.limit_candidate is not None and rep.dispersion < 1e-2
    want = pt.e_fit * (1 + 1j) / math.sqrt(2)
    assert abs(cmath.phase(rep.limit_candidate / want)) < 1e-2


def test_probe_limit_spiral_has_no_candidate():
    rep = probe_limit(TimePoint.rational(1, 2), SweepSchedule(1, 60, "right"), CFG, rel_tol=2e-2)
    assert rep.limit_candidate is None and rep.dispersion > 1


def test_probe_limit_constant_curve():
    with pytest.raises(DegenerateError):
        probe_limit(0.2, OffsetSchedule(1e-2, 0.5, 10), CFG, curve=constant)


def test_coverage_corner_clusters():
    rep = angular_coverage(TimePoint.rational(1, 3), OffsetSchedule(1e-3 / 9, 0.9, 100, "right"), CFG,
                           rel_tol=1e-3)
    assert rep.max_gap > math.pi
    assert max_angular_gap([]) == 2 * math.pi
    with pytest.raises(ConfigError):
        angular_coverage(0.0, OffsetSchedule(1e-3, 0.5, 10), CFG)


def test_sweep_gap_shrinks_as_count_doubles():
    tp = TimePoint.rational(1, 2)
    gaps = [angular_coverage(tp, SweepSchedule(1, n, "right"), CFG, rel_tol=2e-2).max_gap
            for n in (100, 200)]
    assert gaps[1] <= gaps[0]
    a = SweepSchedule(1, 100).offsets()
    b = SweepSchedule(1, 200).offsets()
    assert np.array_equal(a, b[:100]) and np.all(np.diff(b) < 0)


def test_merge_is_order_independent():
    tp = TimePoint.rational(1, 2)
    r = angular_coverage(tp, SweepSchedule(1, 100, "right"), CFG, rel_tol=2e-2)
    l = angular_coverage(tp, SweepSchedule(1, 100, "left"), CFG, rel_tol=2e-2)
    assert merge_reports(r, l).max_gap == merge_reports(l, r).max_gap <= min(r.max_gap, l.max_gap)


def test_certificate_corner():
    v = no_tangent_certificate(TimePoint.rational(1, 8), CFG)
    assert v.kind == "CornerMismatch"
    assert abs(v.evidence["angle_diff"] - math.pi / 2) < 2e-2


def test_certificate_spiral():
    v = no_tangent_certificate(TimePoint.rational(1, 2), CFG)
    assert v.kind == "SpiralSweep"
    assert max(v.evidence["max_gap"].values()) < 0.5


def test_certificate_irrational():
    v = no_tangent_certificate(TimePoint.named("pi-3"), EvalConfig())
    assert v.kind == "IrrationalArc" and v.evidence["arc"] >= 0.3


def test_certificate_reduces_by_period():
    v = no_tangent_certificate(TimePoint.rational(9, 8), CFG)
    assert v.kind == "CornerMismatch"


def test_segment_content():
    assert abs(segment_content(0.0, 1.0, 11, CFG, curve=line) - 1) < 1e-12
    widths = [segment_content(0.1, 0.1 + e, 9, EvalConfig(tol=1e-7)) for e in (1e-2, 1e-4, 1e-6)]
    assert widths[0] > widths[1] > widths[2] and widths[2] < 1e-2


def test_ball_bounds():
    b = ball_content_bounds(0.1, 0.01, CFG)
    assert b.lo == 0.01 and b.hi == 0.02
    assert 0.5 <= b.estimate / (2 * 0.01) <= 1
    with pytest.raises(InconclusiveError):
        ball_content_bounds(0.1, 5.0, EvalConfig(tol=1e-6))


points = st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=30)


@given(points, points, st.tuples(st.floats(-10, 10), st.floats(-10, 10)))
def test_diameter_subadditive(a, b, shared):
    A = [complex(*p) for p in a] + [complex(*shared)]
    B = [complex(*p) for p in b] + [complex(*shared)]
    assert diameter(A + B) <= diameter(A) + diameter(B) + 1e-9


@settings(max_examples=30)
@given(points)
def test_diameter_brute_force(a):
    z = np.array([complex(*p) for p in a])
    assert abs(diameter(z) - np.abs(z[:, None] - z[None, :]).max()) < 1e-9


def test_diameter_collinear():
    z = np.linspace(0, 1, 5000) * (1 + 2j)
    assert abs(diameter(z) - abs(1 + 2j)) < 1e-12
    assert diameter([1j]) == 0
    assert diameter(np.full(4, 2 + 1j)) == 0

