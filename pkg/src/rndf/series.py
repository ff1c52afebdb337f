"""Truncated evaluation of the curve and its companion series.

All sums here are weighted quadratic exponential sums and share one compiled
kernel. Arguments are carried as :class:`TimePoint` objects so that rational
points and small offsets from them keep exact phases.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.special import zeta

from . import _kernels
from .constants import NAMED_DIGITS, TWO_PI_DIGITS
from .errors import CapacityError, ConfigError, DomainError, NumericError

TWO_PI = Fraction(TWO_PI_DIGITS)
PI = TWO_PI / 2

# tail constants: |sum_{k>N} w_k| <= C / N for each series
TAIL_PHI = 1.0 / math.pi**2
TAIL_PHI_D = 1.0 / math.pi
TAIL_R = 1.0
TAIL_Y = 1.0
TAIL_Z = 1.0

# residue tables above this size fall back to direct summation
_HURWITZ_MAX = 1 << 20
_MAX_Q = 1 << 31


@dataclass(frozen=True)
class EvalConfig:
    """Accuracy settings shared by every evaluator.

    ``tol`` is the certified absolute error of each returned value,
    ``max_terms`` caps the truncation length and ``precision_digits`` is the
    number of decimal digits kept from irrational inputs.
    """

    tol: float = 1e-8
    max_terms: int = 10**9
    precision_digits: int = 32

    def __post_init__(self):
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ConfigError(f"tol must be positive and finite, got {self.tol!r}")
        if int(self.max_terms) < 1:
            raise ConfigError("max_terms must be at least 1")
        if int(self.precision_digits) < 16:
            raise ConfigError("precision_digits must be at least 16")

    def with_tol(self, tol: float) -> "EvalConfig":
        return replace(self, tol=tol)


DEFAULT = EvalConfig()


def truncation_length(tol: float, constant: float = TAIL_PHI) -> int:
    """Smallest N with constant / N <= tol."""
    if not (math.isfinite(tol) and tol > 0):
        raise ConfigError(f"tol must be positive and finite, got {tol!r}")
    n = max(1, math.ceil(constant / tol))
    # guard against rounding in the division
    while n > 1 and constant / (n - 1) <= tol:
        n -= 1
    while constant / n > tol:
        n += 1
    return n


def _truncate(digits: str, keep: int) -> Fraction:
    """Fraction of a decimal literal cut to ``keep`` significant digits."""
    sign = ""
    s = digits.strip()
    if s[0] in "+-":
        sign, s = s[0], s[1:]
    intpart, _, frac = s.partition(".")
    allds = (intpart + frac).lstrip("0")
    lead = len(intpart + frac) - len(allds)
    if len(allds) <= keep:
        return Fraction(sign + s)
    cut = allds[:keep] + "0" * (len(allds) - keep)
    whole = "0" * lead + cut
    text = whole[: len(intpart)] + "." + whole[len(intpart):]
    return Fraction(sign + text)


def _last_place(digits: str, keep: int | None) -> Fraction:
    """Unit of the last significant place kept from a decimal literal."""
    s = digits.strip().lstrip("+-")
    intpart, _, frac = s.partition(".")
    sig = (intpart + frac).lstrip("0")
    lead = len(intpart + frac) - len(sig)
    n = len(sig) if keep is None else min(keep, len(sig))
    places = lead + n - len(intpart)  # digits after the point
    return Fraction(1, 10**places) if places >= 0 else Fraction(10 ** (-places))


@dataclass(frozen=True)
class TimePoint:
    """A real argument held as an exact rational part plus a fine remainder.

    With ``var == "x"`` the stored number is the rescaled variable x = 2 pi t,
    so ``TimePoint.rational(p, q)`` is the point t = (p/q) / (2 pi). With
    ``var == "t"`` the stored number is t itself.
    """

    base: Fraction
    offset: Fraction = Fraction(0)
    var: str = "x"
    kind: str = "rational"
    label: str = field(default="", compare=False)
    ulp: Fraction = field(default=Fraction(0), compare=False)  # input uncertainty

    def __post_init__(self):
        if self.var not in ("x", "t"):
            raise ConfigError(f"var must be 'x' or 't', got {self.var!r}")

    @classmethod
    def rational(cls, p: int, q: int) -> "TimePoint":
        if q <= 0:
            raise DomainError("denominator must be positive")
        return cls(Fraction(p, q), var="x", kind="rational", label=f"{p}/{q}")

    @classmethod
    def decimal(cls, digits: str, var: str = "x") -> "TimePoint":
        return cls(Fraction(0), Fraction(digits), var=var, kind="decimal", label=digits,
                   ulp=_last_place(digits, None))

    @classmethod
    def named(cls, name: str, precision_digits: int = 200) -> "TimePoint":
        if name not in NAMED_DIGITS:
            raise DomainError(f"unknown constant {name!r}; choose from {sorted(NAMED_DIGITS)}")
        value = _truncate(NAMED_DIGITS[name], precision_digits)
        return cls(Fraction(0), value, var="x", kind="named", label=name,
                   ulp=_last_place(NAMED_DIGITS[name], precision_digits))

    @classmethod
    def from_float(cls, v: float, var: str = "t") -> "TimePoint":
        if not math.isfinite(v):
            raise DomainError("argument must be finite")
        return cls(Fraction(0), Fraction(v), var=var, kind="float", label=repr(float(v)),
                   ulp=Fraction(math.ulp(v)))

    @property
    def value(self) -> Fraction:
        return self.base + self.offset

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational" and self.offset == 0 and self.var == "x"

    def x_parts(self) -> tuple[Fraction, Fraction]:
        """The rescaled variable as (exact rational part, remainder)."""
        if self.var == "x":
            return self.base, self.offset
        return Fraction(0), TWO_PI * self.value

    def x(self) -> float:
        b, o = self.x_parts()
        return float(b + o)

    def t(self) -> float:
        if self.var == "t":
            return float(self.value)
        return float(self.value / TWO_PI)

    def shift(self, h) -> "TimePoint":
        """The point t + h, with h given in t units (float or Fraction)."""
        h = Fraction(h)
        if self.var == "x":
            return replace(self, offset=self.offset + TWO_PI * h)
        return replace(self, offset=self.offset + h)

    def bracket(self) -> tuple[Fraction, Fraction]:
        """Interval certainly containing the intended value."""
        v = self.value
        return v - self.ulp, v + self.ulp


def as_point(v, var: str = "t") -> TimePoint:
    if isinstance(v, TimePoint):
        return v
    if isinstance(v, (Fraction, int)) and not isinstance(v, bool):
        return TimePoint(Fraction(v), var=var, kind="rational", label=str(v))
    return TimePoint.from_float(float(v), var=var)


def _phase(rat: Fraction, off: Fraction) -> tuple[int, int, float, float]:
    rat = rat - math.floor(rat)
    if rat.denominator >= _MAX_Q:
        off, rat = off + rat, Fraction(0)
    off = off - math.floor(off)
    yh = float(off)
    yl = float(off - Fraction(yh))
    return rat.numerator, rat.denominator, yh, yl


def _hurwitz(P: int, Q: int, start: int, step: int) -> complex:
    # sum over residues r of the period L: exp(2 pi i r^2 P/Q) zeta(2, r/L) / L^2
    L = Q * step
    r = np.arange(start, L + 1, step, dtype=np.int64)
    ph = ((r % Q) * (r % Q) % Q) * P % Q
    w = zeta(2.0, r / L) / float(L) ** 2
    ang = 2.0 * np.pi * ph / Q
    return complex(math.fsum(np.cos(ang) * w), math.fsum(np.sin(ang) * w))


def _qsum_exact(rat: Fraction, off: Fraction, start: int, step: int, n: int) -> tuple[complex, bool]:
    """Quadratic sum and whether it was summed in closed form."""
    P, Q, yh, yl = _phase(rat, off)
    if yh == 0.0 and yl == 0.0 and Q * step <= _HURWITZ_MAX:
        return _hurwitz(P, Q, start, step), True
    return _kernels.qsum(P, Q, yh, yl, start, step, n), False


@dataclass(frozen=True)
class SeriesValue:
    """A value together with its certified error bound and terms used."""

    value: complex
    err_bound: float
    terms: int


# closed-form residue sums are accurate to a few ulps of the total
_CLOSED_ERR = 1e-14


def _check(v: complex) -> complex:
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise NumericError("non-finite series value")
    return v


def _terms(cfg: EvalConfig, constant: float) -> int:
    n = truncation_length(cfg.tol, constant)
    if n > cfg.max_terms:
        raise CapacityError(
            f"tolerance {cfg.tol:g} needs {n} terms, above max_terms={cfg.max_terms}"
        )
    return n


@lru_cache(maxsize=4096)
def _phi_sum(rat: Fraction, off: Fraction, n: int) -> tuple[complex, bool]:
    return _qsum_exact(-rat, -off, 1, 1, n)


def phi_value(t, cfg: EvalConfig = DEFAULT) -> SeriesValue:
    """The curve at ``t`` with a certified truncation bound."""
    tp = as_point(t)
    rat, off = tp.x_parts()
    P, Q, yh, yl = _phase(-rat, -off)
    closed = yh == 0.0 and yl == 0.0 and Q <= _HURWITZ_MAX
    n = 0 if closed else _terms(cfg, TAIL_PHI)
    s, closed = _phi_sum(rat, off, n)
    lin = float((rat + off) / TWO_PI)
    v = complex(1.0 / 12.0 - s.real / (2 * math.pi**2), lin - s.imag / (2 * math.pi**2))
    bound = _CLOSED_ERR if closed else TAIL_PHI / n
    return SeriesValue(_check(v), bound, n)


def eval_phi(t, cfg: EvalConfig = DEFAULT) -> complex:
    """sum over k in Z of (exp(-4 pi^2 i k^2 t) - 1) / (-4 pi^2 k^2), k = 0 term i t."""
    return phi_value(t, cfg).value


def eval_phi_many(points: Sequence, cfg: EvalConfig = DEFAULT, threads: int = 1) -> np.ndarray:
    """Vector of curve values; kernels release the GIL so threads overlap."""
    pts = [as_point(p) for p in points]
    if threads <= 1 or len(pts) < 2:
        return np.array([eval_phi(p, cfg) for p in pts], dtype=complex)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return np.array(list(ex.map(lambda p: eval_phi(p, cfg), pts)), dtype=complex)


def phi_on_grid(M: int, i0: int, n: int, cfg: EvalConfig = DEFAULT) -> np.ndarray:
    """Curve values at x_j = (i0 + j) / M for j < n, from one FFT of length M."""
    if M < 1 or n < 1:
        raise ConfigError("grid size and count must be positive")
    N = _terms(cfg, TAIL_PHI)
    A = _kernels.bin_squares(M, 1, 1, N)
    S = np.fft.fft(A)
    j = np.arange(i0, i0 + n, dtype=np.int64)
    s = S[j % M]
    x = j / M
    out = 1.0 / 12.0 - s / (2 * math.pi**2) + 1j * x / (2 * math.pi)
    if not np.all(np.isfinite(out)):
        raise NumericError("non-finite grid value")
    return out


def phi_d_value(x, cfg: EvalConfig = DEFAULT) -> SeriesValue:
    tp = as_point(x, var="x")
    rat, off = tp.x_parts()
    P, Q, yh, yl = _phase(rat / 2, off / 2)
    closed = yh == 0.0 and yl == 0.0 and Q <= _HURWITZ_MAX
    n = 0 if closed else _terms(cfg, TAIL_PHI_D)
    s, closed = _qsum_exact(rat / 2, off / 2, 1, 1, n)
    bound = _CLOSED_ERR if closed else TAIL_PHI_D / n
    return SeriesValue(_check(-1j * s / math.pi), bound, n)


def eval_phi_d(x, cfg: EvalConfig = DEFAULT) -> complex:
    """sum_{n >= 1} exp(i pi n^2 x) / (i pi n^2)."""
    return phi_d_value(x, cfg).value


def eval_R(x, cfg: EvalConfig = DEFAULT, pi_units: bool = False) -> float:
    """sum_{n >= 1} sin(n^2 x) / n^2; with ``pi_units`` the argument is pi x."""
    tp = as_point(x, var="x")
    rat, off = tp.x_parts()
    if pi_units:
        u_rat, u_off = rat / 2, off / 2
    else:
        u_rat, u_off = Fraction(0), (rat + off) / TWO_PI
    P, Q, yh, yl = _phase(u_rat, u_off)
    closed = yh == 0.0 and yl == 0.0 and Q <= _HURWITZ_MAX
    n = 0 if closed else _terms(cfg, TAIL_R)
    s, _ = _qsum_exact(u_rat, u_off, 1, 1, n)
    return _check(s).imag


def _inverse(h) -> Fraction:
    h = Fraction(h)
    if h == 0:
        raise DomainError("h must be nonzero")
    return 1 / h


def eval_Y(h, cfg: EvalConfig = DEFAULT) -> complex:
    """sum_{k >= 1} exp(i k^2 / (4 h)) / k^2."""
    u = _inverse(h) / (4 * TWO_PI)
    n = _terms(cfg, TAIL_Y)
    s, _ = _qsum_exact(Fraction(0), u, 1, 1, n)
    return _check(s)


def eval_Z(h, cfg: EvalConfig = DEFAULT) -> complex:
    """sum over odd k >= 1 of exp(-i k^2 / (16 h)) / k^2."""
    u = -_inverse(h) / (16 * TWO_PI)
    n = _terms(cfg, TAIL_Z)
    s, _ = _qsum_exact(Fraction(0), u, 1, 2, n)
    return _check(s)


def partial_sums(tp: TimePoint, ns: Iterable[int]) -> list[complex]:
    """Direct partial sums of the curve series, for convergence studies."""
    rat, off = tp.x_parts()
    P, Q, yh, yl = _phase(-rat, -off)
    lin = float((rat + off) / TWO_PI)
    out = []
    for n in ns:
        s = _kernels.qsum(P, Q, yh, yl, 1, 1, int(n))
        out.append(complex(1.0 / 12.0 - s.real / (2 * math.pi**2), lin - s.imag / (2 * math.pi**2)))
    return out
