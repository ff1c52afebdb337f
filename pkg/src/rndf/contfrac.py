"""Continued fractions of points in [0, 1] and their convergents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PrecisionExhaustedError
from .series import TimePoint


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients [a0; a1, a2, ...] of a point in [0, 1]."""

    quotients: tuple[int, ...]
    exact: bool = False  # the expansion terminated on a rational input


@dataclass(frozen=True)
class Convergent:
    """The n-th convergent p/q, its normalized error K = q^2 |x - p/q| and side."""

    n: int
    p: int
    q: int
    K: float
    side: str  # "left" when p/q < x, "right" when p/q > x


def cf_expand(x: TimePoint, n_terms: int) -> ContinuedFraction:
    """First ``n_terms`` partial quotients a0, a1, ..., certified by the input digits.

    A quotient is emitted only when both ends of the input's uncertainty
    interval produce it. Rational inputs terminate exactly.
    """
    if n_terms < 1:
        raise DomainError("n_terms must be positive")
    if x.var != "x":
        raise DomainError("continued fractions act on the rescaled variable x")
    if not 0 <= x.value <= 1:
        raise DomainError("x must lie in [0, 1]")
    lo, hi = x.bracket()
    quotients = []
    a, b = lo, hi
    while len(quotients) < n_terms:
        fa, fb = math.floor(a), math.floor(b)
        if fa != fb:
            raise PrecisionExhaustedError(
                f"input digits certify only {len(quotients)} quotients, requested {n_terms}"
            )
        quotients.append(fa)
        ra, rb = a - fa, b - fb
        if ra == 0 or rb == 0:
            if ra == rb:
                return ContinuedFraction(tuple(quotients), exact=True)
            raise PrecisionExhaustedError("input digits cannot certify the next quotient")
        a, b = 1 / rb, 1 / ra
    return ContinuedFraction(tuple(quotients), exact=False)


def convergents(cf: ContinuedFraction, x: TimePoint) -> list[Convergent]:
    """Convergents p_n/q_n for n >= 1, with K_n and the side of approach.

    The terminal convergent of a rational input equals x and is omitted.
    """
    val = x.value if x.var == "x" else None
    if val is None:
        raise DomainError("convergents need the rescaled variable x")
    a = cf.quotients
    p_prev, q_prev = 1, 0
    p, q = a[0], 1
    out = []
    for n in range(1, len(a)):
        p, p_prev = a[n] * p + p_prev, p
        q, q_prev = a[n] * q + q_prev, q
        gap = val - Fraction(p, q)
        if gap == 0:
            break
        K = float(q * q * abs(gap))
        out.append(Convergent(n, p, q, K, "left" if gap > 0 else "right"))
    return out


def odd_denominator_subsequence(cs: list[Convergent]) -> list[Convergent]:
    return [c for c in cs if c.q % 2 == 1]


def side_filtered(cs: list[Convergent], side: str) -> list[Convergent]:
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    return [c for c in cs if c.side == side]
