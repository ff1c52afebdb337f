"""Compiled kernels for weighted quadratic exponential sums.

Every series in the package reduces to

    S(u) = sum_{k = start, start + step, ... <= N} exp(2 pi i k^2 u) / k^2

with ``u = P/Q + (yh + yl)``: an exact rational part and a double-double part.
Phases are reduced modulo one before any floating multiplication, so the
size of ``k`` never costs accuracy.
"""

import math

import numpy as np
from numba import njit

_SPLIT = 134217729.0  # 2**27 + 1
_TAU = 2.0 * math.pi

LANES = 256
BLOCK = 1024


@njit(cache=True, inline="always")
def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@njit(cache=True, inline="always")
def _frac_mul(m, yh, yl):
    # frac(m * (yh + yl)) as a double-double, m an integer-valued float
    ph, pl = _two_prod(m, yh)
    ph -= math.floor(ph)
    s = pl + m * yl
    zh = ph + s
    zl = s - (zh - ph)
    f = math.floor(zh)
    return zh - f, zl


@njit(cache=True)
def turn(k, P, Q, yh, yl, square):
    """frac(k^2 u) when ``square`` else frac(k u), for u = P/Q + yh + yl."""
    km = k % Q
    if square:
        r = ((km * km) % Q) * P % Q
        a, b = _frac_mul(float(k), yh, yl)
        a, b = _frac_mul(float(k), a, b)
    else:
        r = km * P % Q
        a, b = _frac_mul(float(k), yh, yl)
    f = r / Q + a + b
    return f - math.floor(f)


# error_model="numpy" drops the zero-division branch so the loop vectorizes
@njit(cache=True, error_model="numpy", nogil=True)
def _lane_loop(zr, zi, wr, wi, kk, ar, ai, cc, cs, sf, nit):
    n = zr.shape[0]
    for _ in range(nit):
        for j in range(n):
            inv = 1.0 / (kk[j] * kk[j])
            ar[j] += zr[j] * inv
            ai[j] += zi[j] * inv
            t = zr[j] * wr[j] - zi[j] * wi[j]
            zi[j] = zr[j] * wi[j] + zi[j] * wr[j]
            zr[j] = t
            t = wr[j] * cc - wi[j] * cs
            wi[j] = wr[j] * cs + wi[j] * cc
            wr[j] = t
            kk[j] += sf


@njit(cache=True, nogil=True)
def qsum(P, Q, yh, yl, start, step, N):
    """Weighted quadratic sum over k = start, start + step, ... <= N.

    Each of LANES interleaved chains advances by a two-term recurrence and is
    re-anchored from exact phases every BLOCK steps. Block sums are combined
    with compensated addition.
    """
    L = LANES
    S = L * step
    cf = turn(2 * S * S, P, Q, yh, yl, False)
    cc = math.cos(_TAU * cf)
    cs = math.sin(_TAU * cf)
    zr = np.empty(L)
    zi = np.empty(L)
    wr = np.empty(L)
    wi = np.empty(L)
    kk = np.empty(L)
    ar = np.zeros(L)
    ai = np.zeros(L)
    tr = 0.0
    ti = 0.0
    cr = 0.0
    ci = 0.0
    k0 = start
    while k0 <= N:
        for j in range(L):
            kj = k0 + j * step
            f = turn(kj, P, Q, yh, yl, True)
            zr[j] = math.cos(_TAU * f)
            zi[j] = math.sin(_TAU * f)
            g = turn(2 * S * kj + S * S, P, Q, yh, yl, False)
            wr[j] = math.cos(_TAU * g)
            wi[j] = math.sin(_TAU * g)
            kk[j] = float(kj)
            ar[j] = 0.0
            ai[j] = 0.0
        nit = min(BLOCK, (N - k0) // S + 1)
        _lane_loop(zr, zi, wr, wi, kk, ar, ai, cc, cs, float(S), nit)
        br = 0.0
        bi = 0.0
        for j in range(L):
            br += ar[j]
            bi += ai[j]
        # the last row may run past N
        kl = k0 + (nit - 1) * S
        for j in range(L):
            kj = kl + j * step
            if kj > N:
                f = turn(kj, P, Q, yh, yl, True)
                inv = 1.0 / (float(kj) * float(kj))
                br -= math.cos(_TAU * f) * inv
                bi -= math.sin(_TAU * f) * inv
        y = br - cr
        t = tr + y
        cr = (t - tr) - y
        tr = t
        y = bi - ci
        t = ti + y
        ci = (t - ti) - y
        ti = t
        k0 += S * nit
    return complex(tr, ti)


@njit(cache=True, nogil=True)
def qsum_direct(P, Q, yh, yl, start, step, N):
    """Term-by-term version of ``qsum``, used as an independent check."""
    tr = 0.0
    ti = 0.0
    cr = 0.0
    ci = 0.0
    k = start
    while k <= N:
        f = turn(k, P, Q, yh, yl, True)
        inv = 1.0 / (float(k) * float(k))
        y = math.cos(_TAU * f) * inv - cr
        t = tr + y
        cr = (t - tr) - y
        tr = t
        y = math.sin(_TAU * f) * inv - ci
        t = ti + y
        ci = (t - ti) - y
        ti = t
        k += step
    return complex(tr, ti)


@njit(cache=True, nogil=True)
def bin_squares(M, start, step, N):
    """A[r] = sum of 1/k^2 over k <= N in the progression with k^2 = r mod M."""
    A = np.zeros(M)
    k = start
    while k <= N:
        km = k % M
        A[(km * km) % M] += 1.0 / (float(k) * float(k))
        k += step
    return A
