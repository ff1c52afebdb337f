"""Rescaled local pictures of the curve near good rational approximations.

``H(s)`` is the curve seen from a corner point after zooming by the
denominator; ``c`` is the ratio that fixes the Moebius-type map
``beta(s) = s / (1 + 4 pi c s)``. Corner grids and windows locate the small
copies of the whole curve that appear as ``s -> 0``, and ``g_rescaled`` zooms
into one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DomainError, NumericError, RangeError
from .series import DEFAULT, EvalConfig, TimePoint, eval_phi, eval_Y

_PREF = math.sqrt(math.pi) * (1 - 1j) / math.sqrt(2)
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class ScaleParams:
    c: float
    m: int = 1
    mu: float = 1.5
    alpha: float = 0.0

    def __post_init__(self):
        _check_c(self.c)
        if self.m < 1:
            raise ConfigError("m must be a positive integer")
        if not 1 <= self.mu <= 2:
            raise ConfigError("mu must lie in [1, 2]")
        if not 0 <= self.alpha < 1:
            raise ConfigError("alpha must lie in [0, 1)")


@dataclass(frozen=True)
class WindowLocation:
    m: int
    alpha: float


def _check_c(c: float):
    if not 1 <= c <= 4:
        raise DomainError(f"c must lie in [1, 4], got {c}")


def beta_map(s: float, c: float) -> float:
    if s < 0:
        raise DomainError("s must be non-negative")
    _check_c(c)
    return s / (1 + 4 * math.pi * c * s)


def _oscillatory_sum(beta: float, c: float, u: float, tol: float) -> complex:
    """sum_k I_k / k^2 with I_k = int_0^beta exp(-i w_k r) (1 - 4 pi c r)^(-5/2) dr.

    w_k = 4 pi^2 k^2. Small k use Gauss-Legendre panels in w = -log(1 - 4 pi c r);
    large k use the endpoint expansion in powers of 1 / (i w_k).
    """
    a = 4 * math.pi * c
    g_end = u**-2.5
    # endpoint expansion ratios (5/2 + m) a / (u w) stay below 1/2 for m <= 40
    k0 = max(8, math.ceil(math.sqrt(2 * 42.5 * a / (u * 4 * math.pi**2))))
    # remainder beyond kmax: sum_{k > kmax} 2 (1 + g_end) / (w_k k^2)
    kmax = max(k0 + 1, math.ceil((2 * (1 + g_end) / (4 * math.pi**2 * 3 * tol)) ** (1 / 3)))
    if kmax > 5 * 10**7:
        raise NumericError("oscillatory sum needs too many terms")

    total = 0j
    W = -math.log(u)
    for k in range(1, k0 + 1):
        om = 4 * math.pi**2 * k * k
        panels = int(math.ceil(om * beta / math.pi + 2 * W)) + 4
        edges = np.linspace(0.0, W, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        w = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        wt = (half[:, None] * _GL_W[None, :]).ravel()
        r = -np.expm1(-w) / a
        f = np.exp(-1j * om * r + 1.5 * w) / a
        total += complex(np.dot(wt, f)) / (k * k)

    ks = np.arange(k0 + 1, kmax + 1, dtype=float)
    om = 4 * math.pi**2 * ks * ks
    end_phase = np.exp(-1j * np.mod(om * beta, 2 * math.pi))
    acc = np.zeros_like(om, dtype=complex)
    coef = 1.0  # prod_{j<m} (5/2 + j) a^m
    inv = 1.0 / (1j * om)
    power = inv.copy()
    for m in range(60):
        term = coef * (1.0 - end_phase * u ** (-2.5 - m)) * power
        acc += term
        if np.abs(term[0]) < 1e-3 * tol * (k0 + 1) ** 2:
            break
        coef *= (2.5 + m) * a
        power = power * inv
    else:
        raise NumericError("endpoint expansion did not settle")
    total += complex(np.sum(acc / (ks * ks)))
    return total


def h_closed(s: float, c: float, cfg: EvalConfig = DEFAULT) -> complex:
    """Closed form of the rescaled curve: a boundary term minus a weighted integral of phi.

    The integrand's series is integrated term by term, so the only errors
    are the truncations, each kept below a third of ``cfg.tol``.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    _check_c(c)
    beta = beta_map(s, c)
    return _h_from_beta(TimePoint.from_float(beta), beta, 1.0 / (1 + 4 * math.pi * c * s), c, cfg)


def _h_from_beta(bp: TimePoint, beta: float, u: float, c: float, cfg: EvalConfig) -> complex:
    # u = 1 - 4 pi c beta; bp carries beta exactly when it is known exactly
    a = 4 * math.pi * c
    amp = abs(_PREF) * u**-1.5
    phi_b = eval_phi(bp, cfg.with_tol(cfg.tol / (3 * amp)))
    g0 = (2.0 / 3.0) * (u**-1.5 - 1) / a
    g1 = ((2.0 / 3.0) * (u**-1.5 - 1) - 2 * (u**-0.5 - 1)) / (a * a)
    weight = abs(_PREF) * 6 * math.pi * c / (2 * math.pi**2)
    osc = _oscillatory_sum(beta, c, u, cfg.tol / (3 * weight))
    J = g0 / 12 + 1j * g1 - osc / (2 * math.pi**2)
    v = _PREF * (phi_b * u**-1.5 - 6 * math.pi * c * J)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise NumericError("non-finite closed-form value")
    return v


def h_at_corner_index(nu, c: float, cfg: EvalConfig = DEFAULT) -> complex:
    """h_closed at s = s_{nu} (fractional index allowed).

    There beta = 1 / (8 pi nu) whatever c is, so a rational ``nu`` (int or
    Fraction) puts phi(beta) at a rational point where it has a closed form.
    """
    _check_c(c)
    nu = Fraction(nu)
    if 4 * nu - 2 * Fraction(c) <= 0:
        raise DomainError("4 nu - 2c must be positive")
    bp = TimePoint(1 / (4 * nu), var="x", kind="rational" if isinstance(nu, Fraction) else "float")
    beta = 1.0 / (8 * math.pi * float(nu))
    u = 1 - c / (2 * float(nu))
    return _h_from_beta(bp, beta, u, c, cfg)


def h_series(s: float, c: float, cfg: EvalConfig = DEFAULT) -> complex:
    """Two-term small-s expansion sqrt(s) + 4 i Y(beta(s)) s^(3/2)."""
    if not 0 < s <= 0.1:
        raise DomainError("s must lie in (0, 0.1]")
    beta = beta_map(s, c)
    ytol = min(1e-3, max(cfg.tol / (4 * s**1.5), 1.0 / cfg.max_terms))
    y = eval_Y(Fraction(beta), cfg.with_tol(ytol))
    return math.sqrt(s) + 4j * y * s**1.5


def s_at(c: float, m: float) -> float:
    """Corner parameter 1 / (2 pi (4 m - 2 c)), also at fractional m."""
    d = 4 * m - 2 * c
    if d <= 0:
        raise DomainError("4m - 2c must be positive")
    return 1.0 / (2 * math.pi * d)


def corner_grid(c: float, m: int) -> tuple[float, float, float]:
    """(s_m, s~_m, s_{c,m}): where 1/(4 beta) is 2 pi m, (2m + 1) pi and the copy start."""
    _check_c(c)
    d2 = 2 * m + 1 - c
    if 4 * m - 2 * c <= 0 or d2 <= 0:
        raise DomainError("degenerate denominator")
    sm = s_at(c, m)
    return sm, 1.0 / (4 * math.pi * d2), sm


def locate_window(K: float, c: float) -> WindowLocation:
    """m and alpha with K / (2 pi) = s_{m + alpha} and s_{m+1} < K / (2 pi) <= s_m."""
    if not 0 < K < 1:
        raise RangeError("K must lie in (0, 1)")
    _check_c(c)
    v = (1.0 / K + 2 * c) / 4
    m = math.floor(v)
    if m < 1 or 4 * m - 2 * c <= 0:
        raise RangeError("K too large: no corner window contains it")
    # rounding can put K / (2 pi) a hair outside the window found from v
    s = K / (2 * math.pi)
    while s > s_at(c, m):
        m -= 1
        if m < 1 or 4 * m - 2 * c <= 0:
            raise RangeError("K too large: no corner window contains it")
    while s <= s_at(c, m + 1):
        m += 1
    alpha = min(max(v - m, 0.0), math.nextafter(1.0, 0.0))
    return WindowLocation(int(m), alpha)


def g_rescaled(s, mu, c: float, m: int, cfg: EvalConfig = DEFAULT) -> complex:
    """s_{m+mu}^(-3/2) (H(s) - H(s_{m+mu})) for s in the window (s_{m+1}, s_m].

    ``s`` may also be a :class:`WindowLocation`, meaning s_{m + alpha}; with
    rational alpha and mu both values of H use exact rational arguments.
    """
    if not 1 <= mu <= 2:
        raise DomainError("mu must lie in [1, 2]")
    _check_c(c)
    if isinstance(s, WindowLocation):
        if s.m != m:
            raise RangeError("window location belongs to another window")
        if not 0 <= s.alpha < 1:
            raise RangeError("alpha must lie in [0, 1)")
        nu_s = m + Fraction(s.alpha)
    else:
        lo, hi = s_at(c, m + 1), s_at(c, m)
        if not lo < s <= hi:
            raise RangeError(f"s = {s:g} outside the window ({lo:g}, {hi:g}]")
        nu_s = None
    nu_ref = m + Fraction(mu)
    ref = s_at(c, float(nu_ref))
    scale = ref**-1.5
    sub = cfg.with_tol(cfg.tol / (2 * scale))
    h_s = h_at_corner_index(nu_s, c, sub) if nu_s is not None else h_closed(s, c, sub)
    return scale * (h_s - h_at_corner_index(nu_ref, c, sub))


def limit_law(mu: float, alpha: float, factor: float = 16 * math.pi**2 / 3,
              cfg: EvalConfig = DEFAULT) -> complex:
    """factor * i * (phi((2 - mu) / 2 pi) - phi((2 - alpha) / 2 pi))."""
    return factor * 1j * (_phi_x(2 - mu, cfg) - _phi_x(2 - alpha, cfg))


def _phi_x(x: float, cfg: EvalConfig) -> complex:
    return eval_phi(TimePoint(Fraction(0), Fraction(x), var="x", kind="float"), cfg)
