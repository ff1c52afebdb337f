"""Rational points: classification, eighth-root fits and local expansions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import ClassError, DomainError, NoConvergenceError, ValidityError
from .series import DEFAULT, EvalConfig, TimePoint, eval_phi, eval_Y, eval_Z

SQRT_2PI = math.sqrt(2 * math.pi)


def q_tilde(q: int) -> int:
    return q if q % 2 else q // 2


@dataclass(frozen=True)
class RationalPoint:
    """The point t = (p/q) / (2 pi) with its class and fitted constants.

    ``c_ratio`` holds |c| / q_tilde for the right and left sides. Corner
    points share one eighth root on both sides; spiral points carry the left
    one separately in ``e_left``.
    """

    p: int
    q: int
    klass: str
    q_tilde: int
    e_fit: complex | None = None
    c_ratio: tuple[float, float] | None = None
    e_left: complex | None = None

    @property
    def point(self) -> TimePoint:
        return TimePoint.rational(self.p, self.q)

    @property
    def validity_radius(self) -> float:
        return 1.0 / (16 * math.pi * self.q_tilde**2)


def classify(p: int, q: int) -> RationalPoint:
    """Corner when q = 0, 1, 3 mod 4 and spiral when q = 2 mod 4."""
    if q <= 0 or p < 0:
        raise DomainError("need p >= 0 and q > 0")
    if math.gcd(p, q) != 1:
        raise DomainError(f"{p}/{q} is not in lowest terms")
    klass = "spiral" if q % 4 == 2 else "corner"
    return RationalPoint(p, q, klass, q_tilde(q))


def gauss_sum(p: int, m: int, q: int) -> complex:
    """sum_{k=0}^{q-1} exp(2 pi i (p k^2 + m k) / q) with exact phase reduction."""
    if q <= 0:
        raise DomainError("q must be positive")
    k = np.arange(q, dtype=object) if q > 3 * 10**9 else np.arange(q, dtype=np.int64)
    r = ((p % q) * (k * k % q) + (m % q) * k) % q
    ang = 2 * np.pi * np.asarray(r, dtype=float) / q
    return complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))


def b_map(h: float, c: float, qt: int) -> float:
    """q~^2 h / (1 + 4 pi c q~ h)."""
    d = 1 + 4 * math.pi * c * qt * h
    if d == 0:
        raise DomainError("b_map pole: 1 + 4 pi c q~ h = 0")
    return qt * qt * h / d


def _wrap(a):
    return (np.asarray(a) + np.pi) % (2 * np.pi) - np.pi


@dataclass(frozen=True)
class RootFit:
    """Snapped eighth root exp(i k pi / 4) with the worst angular residual."""

    k: int
    residual: float
    used: int

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.k * math.pi / 4)


def _sqrt_branch(h: float) -> complex:
    # h^(1/2) with sqrt(-1) = -i
    return math.sqrt(h) if h > 0 else -1j * math.sqrt(-h)


def fit_eighth_root(pt: RationalPoint, cfg: EvalConfig = DEFAULT, decades=(4, 8)) -> RootFit:
    """Fit the eighth root in front of the leading corner term from secants.

    Directions are sampled on h = q~^-2 10^-a for a from ``decades[0]`` to
    ``decades[1]`` in half-decade steps. Their circular median, rotated back
    by pi/4, is snapped to the nearest multiple of pi/4.
    """
    if pt.klass != "corner":
        raise ClassError(f"{pt.p}/{pt.q} is a spiral point")
    base = pt.point
    f0 = eval_phi(base, cfg)
    angles = []
    for a in np.arange(decades[0], decades[1] + 0.25, 0.5):
        h = 10.0 ** (-a) / pt.q_tilde**2
        d = eval_phi(base.shift(h), cfg) - f0
        if abs(d) > 10 * cfg.tol:
            angles.append(cmath.phase(d) - math.pi / 4)
    if len(angles) < 3:
        raise NoConvergenceError("too few resolved secants; tighten tol")
    ang = np.array(angles)
    ref = cmath.phase(np.exp(1j * ang).sum())
    med = ref + float(np.median(_wrap(ang - ref)))
    k = int(round(med / (math.pi / 4))) % 8
    residual = float(np.max(np.abs(_wrap(ang - k * math.pi / 4))))
    if residual > 0.2:
        raise NoConvergenceError(f"eighth-root fit residual {residual:.3f} rad exceeds 0.2")
    return RootFit(k, residual, len(angles))


def _corner_terms(e: complex, qt: int, h: float, c: float, ytol: float, cfg: EvalConfig):
    s = _sqrt_branch(h)
    lead = e * (1 + 1j) / SQRT_2PI * s / math.sqrt(qt)
    y = eval_Y(b_map(h, c, qt), cfg.with_tol(ytol))
    second = -4 * e * (1 - 1j) / SQRT_2PI * y * qt**1.5 * (h * s)
    return lead, second


def _sub_tol(cfg: EvalConfig, scale: float) -> float:
    # tolerance for an inner sum multiplied by ``scale``
    return min(1e-3, max(cfg.tol / max(scale, 1e-300), 1.0 / cfg.max_terms))


def _fit_c(score, qt: int, sign: int, period: int) -> int:
    """Integer c in [q~, 4 q~] (times ``sign``) minimizing ``score``.

    Values of c that differ by ``period`` give the same fit.
    """
    cands = [sign * c for c in range(qt, 4 * qt + 1)]
    vals = [score(c) for c in cands]
    order = np.argsort(vals)
    best = vals[order[0]]
    others = [vals[i] for i in order[1:] if (cands[i] - cands[order[0]]) % period != 0]
    if others and best > 0.2 * min(others):
        raise NoConvergenceError("second-order fit has no clear optimum")
    return cands[order[0]]


def _probe_offsets(qt: int, side: int) -> list[float]:
    return [side * a / qt**2 for a in (1e-3, 3e-4, 1e-4)]


def fit_c_corner(pt: RationalPoint, e: complex, cfg: EvalConfig = DEFAULT) -> tuple[float, float]:
    """Least-squares |c| / q~ on each side from the second-order corner term."""
    qt = pt.q_tilde
    base = pt.point
    f0 = eval_phi(base, cfg)
    out = []
    for side in (1, -1):
        hs = _probe_offsets(qt, side)
        ds = [eval_phi(base.shift(h), cfg) - f0 for h in hs]

        def score(c):
            r = 0.0
            for h, d in zip(hs, ds):
                lead, second = _corner_terms(e, qt, h, c, 1e-5, cfg)
                r += abs(d - lead - second) / abs(h) ** 1.5
            return r

        out.append(abs(_fit_c(score, qt, side, 2 * qt)) / qt)
    return out[0], out[1]


def _spiral_shape(qt: int, h: float, c: float, ztol: float, cfg: EvalConfig) -> complex:
    # leading spiral term without its eighth root; the odd sum enters conjugated
    s = _sqrt_branch(h)
    z = eval_Z(b_map(h, c, qt), cfg.with_tol(ztol)).conjugate()
    return -16 * (1 - 1j) / SQRT_2PI * z * qt**1.5 * (h * s)


def fit_spiral(pt: RationalPoint, cfg: EvalConfig = DEFAULT) -> tuple[tuple[complex, complex], tuple[float, float]]:
    """Eighth roots and |c| / q~ on the right and left of a spiral point."""
    if pt.klass != "spiral":
        raise ClassError(f"{pt.p}/{pt.q} is a corner point")
    qt = pt.q_tilde
    base = pt.point
    f0 = eval_phi(base, cfg)
    roots = []
    cs = []
    for side in (1, -1):
        hs = _probe_offsets(qt, side)
        ds = [eval_phi(base.shift(h), cfg) - f0 for h in hs]
        fits = []
        for c in range(qt, 4 * qt + 1):
            r = np.array([d / _spiral_shape(qt, h, side * c, 1e-5, cfg) for h, d in zip(hs, ds)])
            k = round(cmath.phase(r.mean()) / (math.pi / 4)) % 8
            err = float(np.abs(r - cmath.exp(1j * k * math.pi / 4)).max())
            fits.append((err, c, k))
        err, c, k = min(fits)
        if err > 0.05:
            raise NoConvergenceError(f"spiral fit relative residual {err:.3f} too large")
        roots.append(cmath.exp(1j * k * math.pi / 4))
        cs.append(c / qt)
    return (roots[0], roots[1]), (cs[0], cs[1])


@lru_cache(maxsize=512)
def fit_point(p: int, q: int, cfg: EvalConfig = DEFAULT) -> RationalPoint:
    """Classified point with its eighth root and per-side c ratios fitted."""
    pt = classify(p, q)
    if pt.klass == "corner":
        e = fit_eighth_root(pt, cfg).value
        return replace(pt, e_fit=e, e_left=e, c_ratio=fit_c_corner(pt, e, cfg))
    (er, el), c = fit_spiral(pt, cfg)
    return replace(pt, e_fit=er, e_left=el, c_ratio=c)


@dataclass(frozen=True)
class AsymptoticTerm:
    value: complex
    order: float
    validity_radius: float


def _ensure_fit(pt: RationalPoint, cfg: EvalConfig) -> RationalPoint:
    return pt if pt.e_left is not None and pt.c_ratio is not None else fit_point(pt.p, pt.q, cfg)


def _c_signed(pt: RationalPoint, h: float) -> float:
    r = pt.c_ratio[0] if h > 0 else -pt.c_ratio[1]
    return r * pt.q_tilde


def _check_h(pt: RationalPoint, h: float):
    if h == 0:
        raise DomainError("h must be nonzero")
    if abs(h) >= pt.validity_radius:
        raise ValidityError(f"|h| = {abs(h):g} outside the validity radius {pt.validity_radius:g}")


def corner_asymptotic(pt: RationalPoint, h: float, cfg: EvalConfig = DEFAULT) -> AsymptoticTerm:
    """Two-term expansion of phi(t + h) - phi(t) at a corner point."""
    if pt.klass != "corner":
        raise ClassError(f"{pt.p}/{pt.q} is a spiral point")
    _check_h(pt, h)
    pt = _ensure_fit(pt, cfg)
    qt = pt.q_tilde
    ytol = _sub_tol(cfg, 4 / SQRT_2PI * qt**1.5 * abs(h) ** 1.5)
    lead, second = _corner_terms(pt.e_fit, qt, h, _c_signed(pt, h), ytol, cfg)
    return AsymptoticTerm(lead + second, 2.5, pt.validity_radius)


def spiral_asymptotic(pt: RationalPoint, h: float, cfg: EvalConfig = DEFAULT) -> AsymptoticTerm:
    """Leading term of phi(t + h) - phi(t) at a spiral point."""
    if pt.klass != "spiral":
        raise ClassError(f"{pt.p}/{pt.q} is a corner point")
    _check_h(pt, h)
    pt = _ensure_fit(pt, cfg)
    qt = pt.q_tilde
    ztol = _sub_tol(cfg, 16 / SQRT_2PI * qt**1.5 * abs(h) ** 1.5)
    e = pt.e_fit if h > 0 else pt.e_left
    v = e * _spiral_shape(qt, h, _c_signed(pt, h), ztol, cfg)
    return AsymptoticTerm(v, 2.5, pt.validity_radius)


def side_limits(pt: RationalPoint) -> tuple[complex, complex]:
    """Right and left tangent directions e(1 + i)/sqrt 2 and e(1 - i)/sqrt 2."""
    if pt.e_fit is None:
        raise DomainError("eighth root not fitted")
    return pt.e_fit * (1 + 1j) / math.sqrt(2), pt.e_fit * (1 - 1j) / math.sqrt(2)
