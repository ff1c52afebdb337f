"""Secant directions, cones and numerical certificates for missing tangents.

A point of the curve has a tangent on one side when normalized secants
converge; it has a tangent when both side limits exist and are opposite.
The probes here sample secants on offset schedules and report how tightly
the directions cluster or how evenly they cover the circle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from .contfrac import cf_expand, convergents, odd_denominator_subsequence
from .errors import (ConfigError, DegenerateError, DomainError, InconclusiveError, NumericError,
                     PrecisionExhaustedError)
from .rational import classify, fit_point
from .series import DEFAULT, TWO_PI, EvalConfig, TimePoint, as_point, eval_phi

Curve = Callable[[TimePoint, EvalConfig], complex]

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Cone:
    """Closed cone at ``vertex`` around ``direction`` (double: also -direction)."""

    vertex: complex
    direction: complex
    half_aperture: float
    double: bool = False

    def __post_init__(self):
        if not 0 < self.half_aperture < math.pi:
            raise ConfigError("half_aperture must lie in (0, pi)")
        if abs(abs(self.direction) - 1) > 1e-12:
            raise ConfigError("direction must have unit modulus")


def cone_member(cone: Cone, z: complex, slack: float = 1e-12) -> bool:
    w = z - cone.vertex
    if w == 0:
        return True
    ang = abs(cmath.phase(w / cone.direction))
    if cone.double:
        ang = min(ang, math.pi - ang)
    return ang <= cone.half_aperture + slack


@dataclass(frozen=True)
class OffsetSchedule:
    """Geometric offsets start * ratio**j, j < count, on one side."""

    start: float
    ratio: float
    count: int
    side: str = "right"

    def __post_init__(self):
        if not (self.start > 0 and 0 < self.ratio < 1 and self.count >= 1):
            raise ConfigError("need start > 0, ratio in (0, 1), count >= 1")
        if self.side not in ("left", "right"):
            raise ConfigError("side must be 'left' or 'right'")

    def offsets(self) -> np.ndarray:
        return self.start * self.ratio ** np.arange(self.count)


@dataclass(frozen=True)
class SweepSchedule:
    """Offsets 1 / tau_n with tau_n = P (n + frac(n g)) + t0, P = 32 pi q~^2.

    The odd sum in the spiral term repeats with period P in tau, so the
    fractional drift frac(n g) (g the golden ratio) walks the whole period and
    the secants visit every direction. Longer schedules extend shorter ones.
    """

    q_tilde: int
    count: int
    side: str = "right"
    t0: float = 0.0

    def __post_init__(self):
        if self.q_tilde < 1 or self.count < 1:
            raise ConfigError("need q_tilde >= 1 and count >= 1")
        if self.side not in ("left", "right"):
            raise ConfigError("side must be 'left' or 'right'")

    def offsets(self) -> np.ndarray:
        n = np.arange(1, self.count + 1)
        period = 32 * math.pi * self.q_tilde**2
        return 1.0 / (period * (n + (n * GOLDEN) % 1.0) + self.t0)


@dataclass
class ProbeReport:
    directions: list = field(default_factory=list)
    limit_candidate: complex | None = None
    dispersion: float = 0.0
    max_gap: float = 2 * math.pi
    skipped: int = 0


def _phi_curve(tp: TimePoint, cfg: EvalConfig) -> complex:
    return eval_phi(tp, cfg)


def increment(t: TimePoint, h: float, cfg: EvalConfig, curve: Curve = _phi_curve,
              rel_tol: float | None = None) -> tuple[complex, float]:
    """f(t + h) - f(t) and the tolerance it was computed with.

    With ``rel_tol`` the evaluation is repeated at tolerance rel_tol * |increment|
    when that is finer than ``cfg.tol``, capped by ``cfg.max_terms``.
    """
    d = curve(t.shift(h), cfg) - curve(t, cfg)
    tol = cfg.tol
    if rel_tol is not None:
        want = max(rel_tol * abs(d), 1.0 / (math.pi**2 * cfg.max_terms))
        if want < tol:
            fine = cfg.with_tol(want)
            d = curve(t.shift(h), fine) - curve(t, fine)
            tol = want
    return d, tol


def secant_direction(t, r: float, side: str, cfg: EvalConfig = DEFAULT,
                     curve: Curve = _phi_curve, rel_tol: float | None = None) -> complex | None:
    """(f(t +/- r) - f(t)) / |...|, or None when the increment is within 10 tol."""
    if not r > 0:
        raise DomainError("r must be positive")
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    t = as_point(t)
    d, tol = increment(t, r if side == "right" else -r, cfg, curve, rel_tol)
    if abs(d) <= 10 * tol:
        return None
    return d / abs(d)


def max_angular_gap(directions) -> float:
    if len(directions) == 0:
        return 2 * math.pi
    a = np.sort(np.angle(np.asarray(directions, dtype=complex)))
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * math.pi]]))
    return float(gaps.max())


def max_pairwise_angle(directions) -> float:
    d = np.asarray(directions, dtype=complex)
    if len(d) < 2:
        return 0.0
    return float(np.abs(np.angle(d[:, None] / d[None, :])).max())


def _collect(t, sched, cfg, curve, rel_tol) -> tuple[list, int]:
    t = as_point(t)
    dirs = []
    skipped = 0
    for r in sched.offsets():
        v = secant_direction(t, float(r), sched.side, cfg, curve, rel_tol)
        if v is None:
            skipped += 1
        else:
            dirs.append(v)
    if not dirs:
        raise DegenerateError("every offset gave a zero increment")
    return dirs, skipped


def probe_limit(t, sched, cfg: EvalConfig = DEFAULT, curve: Curve = _phi_curve,
                rel_tol: float | None = None) -> ProbeReport:
    """Secant directions on a schedule; a limit is proposed when the tail clusters.

    The tail is the second half of the resolved directions and the cluster
    test is a maximum pairwise angle below 1e-2 rad.
    """
    dirs, skipped = _collect(t, sched, cfg, curve, rel_tol)
    tail = dirs[len(dirs) // 2:] if len(dirs) >= 4 else dirs
    disp = max_pairwise_angle(tail)
    cand = None
    if disp < 1e-2:
        m = np.mean(tail)
        cand = complex(m / abs(m))
    return ProbeReport(dirs, cand, disp, max_angular_gap(dirs), skipped)


def angular_coverage(t, sched, cfg: EvalConfig = DEFAULT, curve: Curve = _phi_curve,
                     rel_tol: float | None = None) -> ProbeReport:
    """Secant directions with the largest empty arc they leave on the circle."""
    if sched.count < 100:
        raise ConfigError("angular coverage needs at least 100 offsets")
    dirs, skipped = _collect(t, sched, cfg, curve, rel_tol)
    return ProbeReport(dirs, None, max_pairwise_angle(dirs), max_angular_gap(dirs), skipped)


def merge_reports(*reports: ProbeReport) -> ProbeReport:
    dirs = [d for r in reports for d in r.directions]
    return ProbeReport(dirs, None, max_pairwise_angle(dirs) if dirs else 0.0,
                       max_angular_gap(dirs), sum(r.skipped for r in reports))


@dataclass(frozen=True)
class Verdict:
    kind: str  # CornerMismatch, SpiralSweep or IrrationalArc
    evidence: dict


def _reduce(t) -> TimePoint:
    """Representative with x in [0, 1]."""
    tp = as_point(t)
    if tp.var == "t":
        v = TWO_PI * tp.value
        return TimePoint(Fraction(0), v - math.floor(v), var="x", kind=tp.kind,
                         label=tp.label, ulp=TWO_PI * tp.ulp + Fraction(1, 10**40))
    v = tp.value
    if 0 <= v <= 1:
        return tp
    k = math.floor(v)
    if tp.offset == 0:
        return TimePoint(tp.base - k, Fraction(0), var="x", kind=tp.kind, label=tp.label, ulp=tp.ulp)
    return TimePoint(tp.base, tp.offset - k, var="x", kind=tp.kind, label=tp.label, ulp=tp.ulp)


def corner_evidence(p: int, q: int, cfg: EvalConfig = DEFAULT, decades=(3.0, 6.0),
                    rel_tol: float = 1e-3) -> dict:
    """Side limits at a corner point from geometric schedules on both sides."""
    pt = classify(p, q)
    qt = pt.q_tilde
    n = int(round((decades[1] - decades[0]) * 2)) + 1
    start = 10.0 ** (-decades[0]) / qt**2
    rep = {}
    for side in ("right", "left"):
        rep[side] = probe_limit(pt.point, OffsetSchedule(start, 10**-0.5, n, side), cfg,
                                rel_tol=rel_tol)
    r, l = rep["right"].limit_candidate, rep["left"].limit_candidate
    diff = abs(cmath.phase(l / r)) if r is not None and l is not None else None
    return {"right": r, "left": l, "angle_diff": diff,
            "dispersion": (rep["right"].dispersion, rep["left"].dispersion),
            "skipped": rep["right"].skipped + rep["left"].skipped}


def spiral_evidence(p: int, q: int, cfg: EvalConfig = DEFAULT, count: int = 200,
                    rel_tol: float = 2e-2) -> dict:
    pt = classify(p, q)
    gaps = {}
    for side in ("right", "left"):
        rep = angular_coverage(pt.point, SweepSchedule(pt.q_tilde, count, side), cfg, rel_tol=rel_tol)
        gaps[side] = rep.max_gap
    return {"max_gap": gaps, "count": count}


def irrational_evidence(x: TimePoint, cfg: EvalConfig = DEFAULT, q_max: int = 2000,
                        n_offsets: int = 16, q_hi: float = 0.1, rel_tol: float = 1e-3,
                        scales: int = 2) -> dict:
    """Secant directions from phi(x) towards phi at p_n/q_n + Q/q_n^2.

    The convergents used have odd denominators and lie on one side of x. For
    each one, Q runs over a grid keeping every sampled point on that side, so
    a one-sided tangent would force the directions together as q_n grows.
    """
    try:
        cf = cf_expand(x, 60)
    except PrecisionExhaustedError:
        cf = None
    if cf is None:
        # take as many quotients as the digits certify
        n = 60
        while n > 1 and cf is None:
            n -= 1
            try:
                cf = cf_expand(x, n)
            except PrecisionExhaustedError:
                pass
    cs = [c for c in odd_denominator_subsequence(convergents(cf, x)) if c.q <= q_max]
    if not cs:
        raise InconclusiveError("no odd-denominator convergents within reach")
    side = max(("left", "right"), key=lambda s: (sum(c.side == s for c in cs), s == "right"))
    cs = [c for c in cs if c.side == side][-scales:]
    if len(cs) < scales:
        raise InconclusiveError(f"the input digits support fewer than {scales} usable convergents")
    per_scale = []
    f0_cache = {}
    for c in cs:
        sign = 1 if side == "right" else -1  # p/q - x has this sign
        k_signed = sign * c.K
        # sampled points x + (Q + k_signed) / q^2 stay on the approximant's side
        lo = -k_signed + 0.1 * sign * c.K
        hi = sign * q_hi
        qs = np.linspace(lo, hi, n_offsets)
        dirs = []
        for Q in qs:
            base = TimePoint.rational(c.p, c.q).shift(Fraction(float(Q)) / (TWO_PI * c.q * c.q))
            scale = 0.05 / c.q**1.5
            tol = min(cfg.tol, rel_tol * scale)
            if 1.0 / (math.pi**2 * tol) > cfg.max_terms:
                raise InconclusiveError(f"q = {c.q} needs more than max_terms terms")
            sub = cfg.with_tol(tol)
            if tol not in f0_cache:
                f0_cache[tol] = eval_phi(x, sub)
            d = eval_phi(base, sub) - f0_cache[tol]
            if abs(d) > 100 * tol:
                dirs.append(d / abs(d))
        distinct = _distinct(dirs, 1e-3)
        arc = 2 * math.pi - max_angular_gap(dirs) if len(dirs) > 1 else 0.0
        per_scale.append({"p": c.p, "q": c.q, "K": c.K, "side": side,
                          "directions": len(dirs), "distinct": distinct, "arc": arc})
    k_prefix = [c.K for c in cs]
    return {"scales": per_scale, "K_prefix": k_prefix,
            "regime": "K>0" if min(k_prefix) > 1e-2 else "K->0"}


def _distinct(dirs, sep: float) -> int:
    a = np.sort(np.angle(np.asarray(dirs, dtype=complex)))
    if len(a) == 0:
        return 0
    return 1 + int((np.diff(a) > sep).sum())


def no_tangent_certificate(t, cfg: EvalConfig = DEFAULT, **kw) -> Verdict:
    """Numerical evidence that the curve has no tangent at ``t``.

    Corner points must show two converged side limits that are not opposite
    (angle difference away from pi by more than 0.1 rad). Spiral points must
    leave no empty arc of 0.5 rad on either side. Irrational points must show,
    at each of the deepest usable convergents, at least 10 distinct secant
    directions spanning at least 0.3 rad. Anything weaker is inconclusive.
    """
    x = _reduce(t)
    if x.is_rational:
        p, q = x.base.numerator, x.base.denominator
        pt = classify(p, q)
        if pt.klass == "corner":
            ev = corner_evidence(p, q, cfg, **kw)
            ev["e_fit"] = fit_point(p, q, cfg).e_fit
            if ev["angle_diff"] is None:
                raise InconclusiveError("side limits did not converge")
            if abs(ev["angle_diff"] - math.pi) <= 0.1:
                raise InconclusiveError("side limits look opposite")
            return Verdict("CornerMismatch", ev)
        ev = spiral_evidence(p, q, cfg, **kw)
        if max(ev["max_gap"].values()) >= 0.5:
            raise InconclusiveError("secant sweep left an arc of 0.5 rad uncovered")
        return Verdict("SpiralSweep", ev)
    ev = irrational_evidence(x, cfg, **kw)
    ok = [s["distinct"] >= 10 and s["arc"] >= 0.3 for s in ev["scales"]]
    if not ok or not all(ok):
        raise InconclusiveError(f"irrational arc test failed: {ev['scales']}")
    ev["arc"] = min(s["arc"] for s in ev["scales"])
    return Verdict("IrrationalArc", ev)


def diameter(points) -> float:
    """Largest distance within a finite planar point set."""
    z = np.asarray(points, dtype=complex).ravel()
    if len(z) < 2:
        return 0.0
    xy = np.column_stack([z.real, z.imag])
    try:
        idx = ConvexHull(xy).vertices
        z = z[idx]
    except (QhullError, ValueError):
        # collinear or tiny sets: the extremes along the spread direction
        c = z - z.mean()
        u = c[np.argmax(np.abs(c))]
        if u == 0:
            return 0.0
        proj = (c * np.conj(u / abs(u))).real
        return float(proj.max() - proj.min()) if len(z) > 3000 else float(
            np.abs(z[:, None] - z[None, :]).max())
    return float(np.abs(z[:, None] - z[None, :]).max())


def _sample(curve: Curve, a, b, n: int, cfg: EvalConfig) -> np.ndarray:
    a = as_point(a)
    span = float(as_point(b).value - a.value) if as_point(b).var == a.var else None
    if span is None:
        raise DomainError("endpoints must use the same variable")
    hs = np.linspace(0.0, span, n)
    if a.var == "x":
        hs = hs / (2 * math.pi)
    return np.array([curve(a.shift(float(h)), cfg) for h in hs])


def segment_content(a, b, n_samples: int, cfg: EvalConfig = DEFAULT, curve: Curve = _phi_curve,
                    max_samples: int = 1 << 16) -> float:
    """Diameter of the sampled image of [a, b], refined until stable to 1e-4."""
    if not as_point(a).value < as_point(b).value:
        raise DomainError("need a < b")
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    n = n_samples
    d = diameter(_sample(curve, a, b, n, cfg))
    while 2 * n - 1 <= max_samples:
        n = 2 * n - 1
        d2 = diameter(_sample(curve, a, b, n, cfg))
        if abs(d2 - d) < 1e-4:
            return d2
        d = d2
    return d


@dataclass(frozen=True)
class ContentBounds:
    lo: float
    hi: float
    estimate: float
    exit_offset: float


def ball_content_bounds(t, r: float, cfg: EvalConfig = DEFAULT, curve: Curve = _phi_curve,
                        n_grid: int = 100, max_offset: float | None = None) -> ContentBounds:
    """Bracket [r, 2r] for the content of the curve inside B(f(t), r), with an estimate.

    The estimate is the diameter of the arc from t to its first exit from
    the ball: it reaches the sphere and stays inside, so it lies in [r, 2r].
    """
    if not r > 0:
        raise DomainError("r must be positive")
    t = as_point(t)
    f0 = curve(t, cfg)
    limit = max_offset if max_offset is not None else 1 / (2 * math.pi)
    eps = min(1e-3 * r * r, limit)
    out = None
    while eps <= limit:
        if abs(curve(t.shift(eps), cfg) - f0) >= r:
            out = eps
            break
        eps *= 2
    if out is None:
        raise InconclusiveError("no sampled parameter leaves the ball")
    hs = np.linspace(0.0, out, n_grid + 1)
    vals = [f0]
    inside_h = 0.0
    for h in hs[1:]:
        v = curve(t.shift(float(h)), cfg)
        if abs(v - f0) >= r:
            out = float(h)
            break
        vals.append(v)
        inside_h = float(h)
    lo_h, hi_h = inside_h, out
    for _ in range(50):
        mid = 0.5 * (lo_h + hi_h)
        if mid in (lo_h, hi_h):
            break
        if abs(curve(t.shift(mid), cfg) - f0) >= r:
            hi_h = mid
        else:
            lo_h = mid
    vals.append(curve(t.shift(lo_h), cfg))
    # the crossing point on the sphere, from the first sample outside
    w = curve(t.shift(hi_h), cfg) - f0
    vals.append(f0 + r * w / abs(w))
    est = diameter(vals)
    if not (1 - 1e-12) * r <= est <= 2 * r * (1 + 1e-12):
        raise NumericError(f"content estimate {est:g} escaped [r, 2r]")
    return ContentBounds(r, 2 * r, min(max(est, r), 2 * r), hi_h)
