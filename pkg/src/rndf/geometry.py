"""Sampled images of the curve and box-counting dimension estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DomainError, ResolutionError
from .series import DEFAULT, EvalConfig, TimePoint, eval_phi, eval_phi_many, phi_on_grid

_GRID_MAX = 1 << 26


@dataclass
class Polyline:
    params: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        self.points = np.asarray(self.points, dtype=complex)
        if self.params.shape != self.points.shape or self.params.ndim != 1:
            raise ConfigError("params and points must be 1-d arrays of equal length")
        if len(self.params) > 1 and not np.all(np.diff(self.params) > 0):
            raise ConfigError("params must be strictly increasing")

    def __len__(self):
        return len(self.params)

    def max_gap(self) -> float:
        if len(self.points) < 2:
            return 0.0
        return float(np.abs(np.diff(self.points)).max())


def _grid_plan(a: Fraction, b: Fraction, n: int):
    """(M, i0) when the x-grid a + j (b - a)/(n - 1) is j'/M, else None."""
    step = (b - a) / (n - 1)
    if step.numerator != 1:
        return None
    M = step.denominator
    i0 = a * M
    if i0.denominator != 1 or M > _GRID_MAX:
        return None
    return M, int(i0)


def sample_curve(a, b, n: int, cfg: EvalConfig = DEFAULT, var: str = "t", threads: int = 1) -> Polyline:
    """``n`` uniform samples of the curve between parameters ``a`` and ``b``.

    With ``var="x"`` the endpoints are given in x = 2 pi t. When they are
    rational and the grid lines up with some j / M, all values come from one
    FFT; otherwise every sample is evaluated on its own. The returned params
    are always in t units.
    """
    if n < 2:
        raise DomainError("n must be at least 2")
    if var not in ("x", "t"):
        raise ConfigError("var must be 'x' or 't'")
    fa, fb = Fraction(a), Fraction(b)
    if not fa < fb:
        raise DomainError("need a < b")
    plan = _grid_plan(fa, fb, n) if var == "x" else None
    if plan is not None:
        M, i0 = plan
        pts = phi_on_grid(M, i0, n, cfg)
        params = (i0 + np.arange(n)) / M / (2 * math.pi)
        return Polyline(params, pts)
    step = (fb - fa) / (n - 1)
    tps = [TimePoint(Fraction(0), fa + j * step, var=var, kind="float") for j in range(n)]
    pts = eval_phi_many(tps, cfg, threads)
    params = np.array([tp.t() for tp in tps])
    return Polyline(params, pts)


def refine(poly: Polyline, max_gap: float, cfg: EvalConfig = DEFAULT,
           budget: int = 200_000) -> Polyline:
    """Insert parameter midpoints until consecutive points are closer than ``max_gap``."""
    params, points = poly.params, poly.points
    added = 0
    while True:
        bad = np.nonzero(np.abs(np.diff(points)) >= max_gap)[0]
        if len(bad) == 0:
            return Polyline(params, points)
        added += len(bad)
        if added > budget:
            raise ResolutionError(f"refinement needs more than {budget} extra samples")
        mids = 0.5 * (params[bad] + params[bad + 1])
        if np.any(mids <= params[bad]) or np.any(mids >= params[bad + 1]):
            raise ResolutionError("parameter spacing exhausted before the gaps closed")
        vals = np.array([eval_phi(float(t), cfg) for t in mids])
        params = np.insert(params, bad + 1, mids)
        points = np.insert(points, bad + 1, vals)


def resolved_period(n: int, max_gap: float, cfg: EvalConfig = DEFAULT, periods: int = 1) -> Polyline:
    """The image of ``periods`` periods from an n-point grid, refined to ``max_gap``."""
    poly = sample_curve(0, periods, n, cfg, var="x")
    return refine(poly, max_gap, cfg)


def box_count(poly, eps: float, anchor: complex = 0j) -> int:
    """Number of cells of the eps-grid anchored at ``anchor`` that contain a point."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    z = poly.points if isinstance(poly, Polyline) else np.asarray(poly, dtype=complex)
    if len(z) == 0:
        return 0
    ix = np.floor((z.real - anchor.real) / eps).astype(np.int64)
    iy = np.floor((z.imag - anchor.imag) / eps).astype(np.int64)
    ix -= ix.min()
    iy -= iy.min()
    key = ix * (int(iy.max()) + 1) + iy
    # consecutive samples usually share a cell
    keep = np.ones(len(key), dtype=bool)
    keep[1:] = key[1:] != key[:-1]
    return int(len(np.unique(key[keep])))


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    stderr: float
    eps: tuple
    counts: tuple


def dimension_estimate(poly, eps_lo: float, eps_hi: float, levels: int = 8) -> DimensionEstimate:
    """Least-squares slope of log N(eps) against log(1/eps).

    ``levels`` is the number of geometric eps levels per decade. The
    polyline must be fine enough that consecutive points are closer than
    eps_lo / 4.
    """
    if not 0 < eps_lo < eps_hi:
        raise DomainError("need 0 < eps_lo < eps_hi")
    if levels < 1:
        raise ConfigError("levels must be positive")
    if not isinstance(poly, Polyline):
        poly = Polyline(np.arange(len(poly), dtype=float), poly)
    gap = poly.max_gap()
    if gap >= eps_lo / 4:
        raise ResolutionError(f"largest sample gap {gap:.3g} is not below eps_lo / 4 = {eps_lo / 4:.3g}")
    count = max(2, int(round(math.log10(eps_hi / eps_lo) * levels)) + 1)
    eps = np.geomspace(eps_lo, eps_hi, count)
    counts = np.array([box_count(poly, e) for e in eps], dtype=float)
    x = np.log(1 / eps)
    y = np.log(counts)
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    dof = max(1, len(x) - 2)
    s2 = float(resid @ resid) / dof
    stderr = math.sqrt(s2 / float(((x - x.mean()) ** 2).sum()))
    return DimensionEstimate(float(coef[0]), stderr, tuple(eps), tuple(int(c) for c in counts))


def segment_polyline(n: int = 100_001) -> Polyline:
    t = np.linspace(0.0, 1.0, n)
    return Polyline(t, t.astype(complex))


def koch_polyline(depth: int = 9) -> Polyline:
    """Koch curve on [0, 1] after ``depth`` refinements (dimension log 4 / log 3)."""
    z = np.array([0, 1], dtype=complex)
    rot = np.exp(1j * math.pi / 3)
    for _ in range(depth):
        a, b = z[:-1], z[1:]
        d = (b - a) / 3
        p1 = a + d
        p2 = p1 + d * rot
        p3 = a + 2 * d
        mid = np.column_stack([a, p1, p2, p3]).ravel()
        z = np.concatenate([mid, z[-1:]])
    return Polyline(np.linspace(0.0, 1.0, len(z)), z)


def square_polyline(k: int = 1000) -> Polyline:
    """Serpentine path through the lattice (i + j i) / k, 0 <= i, j < k, in [0, 1)^2."""
    i = np.arange(k)
    rows = []
    for r in range(k):
        cols = i if r % 2 == 0 else i[::-1]
        rows.append((cols + 1j * r) / k)
    z = np.concatenate(rows)
    return Polyline(np.linspace(0.0, 1.0, len(z)), z)
