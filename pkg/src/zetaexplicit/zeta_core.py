"""zeta(s), zeta'(s), zeta'/zeta, log zeta, Riemann-Siegel theta and Hardy's Z.

zeta and zeta' come from one Euler-Maclaurin pass.  The main sum
``sum_{n<N} n^-s`` is done in fixed point: ``p^-s`` is computed once per
prime, every composite is one complex multiply of already-known values
(complete multiplicativity), which keeps heights up to a few 10^4 cheap
at 30+ digits.  The Bernoulli tail is summed until Backlund's remainder
bound drops below target; if the tail starts to diverge, N is doubled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp

from .config import GUARD_DIGITS, resolve_prec
from .errors import DomainError, NearZeroError, PathThroughZeroError, PoleError, PrecisionError
from .numerics import Cx, _loggamma, to_mpc, wrap

N_MAX = 1 << 22
FIXED_GUARD_BITS = 32


@dataclass(frozen=True)
class EvalPoint:
    sigma: float
    t: float
    prec: int

    def __post_init__(self):
        if self.t < 0:
            raise DomainError("EvalPoint.t must be >= 0; use the conjugate point")

    @property
    def s(self):
        return mpmath.mpc(self.sigma, self.t)


def _resolve(s, prec):
    p = resolve_prec(prec if prec is not None else getattr(s, "prec", None))
    return p


# ---------------------------------------------------------------------------
# fixed-point main sum


@lru_cache(maxsize=8)
def _spf(n: int):
    """Smallest-prime-factor table for 0..n-1 as a Python list."""
    spf = np.arange(n, dtype=np.int64)
    for p in range(2, int(math.isqrt(max(n - 1, 0))) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            mask = block == np.arange(p * p, n, p)
            block[mask] = p
            spf[p * p :: p] = block
    return spf.tolist()


@lru_cache(maxsize=16)
def _prime_logs(n: int, bits: int):
    """(mpf log p for primes p < n, fixed-point log n for all n < n) at ``bits``."""
    spf = _spf(n)
    F = bits + FIXED_GUARD_BITS
    with mp.workprec(bits + 20):
        lnp = {}
        fixed = [0] * n
        for k in range(2, n):
            p = spf[k]
            if p == k:
                lnp[k] = mpmath.log(k)
                fixed[k] = _to_fixed(lnp[k], F)
            else:
                fixed[k] = fixed[p] + fixed[k // p]
    return lnp, fixed


def _to_fixed(x, F: int) -> int:
    sign, man, exp, _ = x._mpf_
    sh = exp + F
    v = int(man) << sh if sh >= 0 else int(man) >> -sh
    return -v if sign else v


def _main_sum(s, N: int, derivative: bool):
    """sum_{n<N} n^-s and (optionally) sum_{n<N} log(n) n^-s."""
    bits = mp.prec
    F = bits + FIXED_GUARD_BITS
    spf = _spf(N)
    lnp, lfix = _prime_logs(N, bits)
    re = [0] * N
    im = [0] * N
    one = 1 << F
    re[1] = one
    sr, si = one, 0
    dr = di = 0
    ms = -s
    for n in range(2, N):
        p = spf[n]
        if p == n:
            z = mpmath.exp(ms * lnp[n])
            a = _to_fixed(z.real, F)
            b = _to_fixed(z.imag, F)
        else:
            m = n // p
            ar, ai, br, bi = re[p], im[p], re[m], im[m]
            a = (ar * br - ai * bi) >> F
            b = (ar * bi + ai * br) >> F
        re[n] = a
        im[n] = b
        sr += a
        si += b
        if derivative:
            ln = lfix[n]
            dr += ln * a
            di += ln * b
    total = mpmath.mpc(mpmath.ldexp(sr, -F), mpmath.ldexp(si, -F))
    if not derivative:
        return total, None
    dtotal = mpmath.mpc(mpmath.ldexp(dr, -2 * F), mpmath.ldexp(di, -2 * F))
    return total, dtotal


@lru_cache(maxsize=16)
def _em_coeffs(bits: int, count: int = 400):
    with mp.workprec(bits):
        return tuple(mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) for k in range(1, count + 1))


class _Diverging(Exception):
    pass


def _initial_n(s, digits: float) -> int:
    t = abs(float(s.imag))
    return max(20, math.ceil(2.5 * (digits + math.sqrt(t))), math.ceil(abs(complex(s)) / math.pi))


def _em_tail(s, N: int, derivative: bool, tol):
    """Euler-Maclaurin correction terms at N; raises _Diverging when N is too small.

    Term k is B_2k/(2k)! (s)_{2k-1} N^(-s-2k+1); it is advanced by one ratio
    multiply per step.  Its s-derivative is term_k * (R_k - log N) with
    R_k = sum_{j<2k-1} 1/(s+j).
    """
    coeffs = _em_coeffs(mp.prec + 20)
    lnN = mpmath.log(N)
    Ns = mpmath.exp(-s * lnN)
    sm1 = s - 1
    head = Ns * N / sm1
    val = head + Ns / 2
    der = head * (-lnN - 1 / sm1) - lnN * Ns / 2 if derivative else None
    inv_n2 = mpmath.mpf(1) / (N * N)
    T = coeffs[0] * s * Ns / N
    R = 1 / s if derivative else None
    sigma = float(s.real)
    prev = None
    for k in range(1, len(coeffs)):
        val += T
        if derivative:
            der += T * (R - lnN)
        a1, a2 = s + (2 * k - 1), s + 2 * k
        T = T * (a1 * a2) * (coeffs[k] / coeffs[k - 1] * inv_n2)
        if derivative:
            R += 1 / a1 + 1 / a2
        mag = abs(T.real) + abs(T.imag)
        est = mag * (1 + abs(s + 2 * k + 1)) / (sigma + 2 * k + 1)
        if derivative:
            est *= abs(R) + lnN + 1
        if est < tol:
            return val, der
        if prev is not None and mag > prev and k > 3:
            raise _Diverging
        prev = mag
    raise _Diverging


def _zeta_em(s, derivative: bool = False):
    """(zeta(s), zeta'(s) or None) at the ambient precision; s != 1."""
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s == 0:
        # every tail term carries the factor s; closed forms avoid the 0 * inf bookkeeping
        return mpmath.mpc(-0.5), (-mpmath.log(2 * mp.pi) / 2 if derivative else None)
    digits = mp.dps
    tol = mpmath.mpf(10) ** (-(digits + 2))
    N = _initial_n(s, digits - GUARD_DIGITS)
    while N <= N_MAX:
        try:
            tail, dtail = _em_tail(s, N, derivative, tol)
        except _Diverging:
            N *= 2
            continue
        main, dmain = _main_sum(s, N, derivative)
        if derivative:
            return main + tail, dtail - dmain
        return main + tail, None
    raise PrecisionError(f"Euler-Maclaurin needs N > {N_MAX} at s = {s}")


def _zeta_any(s, derivative=False):
    """Handles Im s < 0 through conjugate symmetry."""
    if s.imag < 0:
        z, d = _zeta_em(mpmath.conj(s), derivative)
        return mpmath.conj(z), (mpmath.conj(d) if d is not None else None)
    return _zeta_em(s, derivative)


# ---------------------------------------------------------------------------
# public zeta surface


def zeta(s, prec=None) -> Cx:
    """zeta(s) by Euler-Maclaurin summation; relative error < 10^(5 - prec)."""
    p = _resolve(s, prec)
    with mp.workdps(p + GUARD_DIGITS):
        z, _ = _zeta_any(to_mpc(s))
        return wrap(z, p)


def zeta_and_deriv(s, prec=None) -> tuple[Cx, Cx]:
    p = _resolve(s, prec)
    with mp.workdps(p + GUARD_DIGITS):
        z, d = _zeta_any(to_mpc(s), derivative=True)
        return wrap(z, p), wrap(d, p)


def _check_not_zero(z, p):
    if abs(z) < mpmath.mpf(10) ** (-p / 2):
        raise NearZeroError(f"|zeta(s)| = {mpmath.nstr(abs(z), 5)} is within the zero threshold")


def _zeta_log_deriv(s, p):
    z, d = _zeta_any(s, derivative=True)
    _check_not_zero(z, p)
    return d / z


def zeta_log_deriv(s, prec=None) -> Cx:
    """zeta'(s)/zeta(s); relative error < 10^(6 - prec).

    Raises NearZeroError when |zeta(s)| < 10^(-prec/2), i.e. s is within
    roughly that distance of a zero.
    """
    p = _resolve(s, prec)
    with mp.workdps(p + GUARD_DIGITS):
        return wrap(_zeta_log_deriv(to_mpc(s), p), p)


LOG_ZETA_ANCHOR = mpmath.mpf(9) / 8


def _log_zeta(s, p):
    t = s.imag
    sigma = s.real
    anchor = max(sigma, LOG_ZETA_ANCHOR)
    z_prev, _ = _zeta_any(mpmath.mpc(anchor, t))
    # |arg zeta| <= log zeta(sigma) < pi for sigma >= 9/8: principal log is the Dirichlet branch
    acc = mpmath.log(z_prev)
    cur = anchor
    h = mpmath.mpf(1) / 16
    h_min = mpmath.mpf(10) ** (-p / 2)
    quarter = mp.pi / 4
    while cur > sigma:
        nxt = max(sigma, cur - h)
        z, _ = _zeta_any(mpmath.mpc(nxt, t))
        if abs(z) < h_min:
            raise PathThroughZeroError(f"zeta vanishes near {mpmath.nstr(nxt, 8)} + {mpmath.nstr(t, 8)}i")
        d = mpmath.log(z / z_prev)
        if abs(d.imag) > quarter:
            h /= 2
            if h < h_min:
                raise PathThroughZeroError(f"step control collapsed near sigma = {mpmath.nstr(nxt, 8)}")
            continue
        acc += d
        cur = nxt
        z_prev = z
        h = min(h * 2, mpmath.mpf(1) / 16)
    return acc


def log_zeta(s, prec=None) -> Cx:
    """log zeta(s) on the branch continued horizontally from sigma = 9/8."""
    p = _resolve(s, prec)
    with mp.workdps(p + GUARD_DIGITS):
        return wrap(_log_zeta(to_mpc(s), p), p)


# ---------------------------------------------------------------------------
# theta and Z


@lru_cache(maxsize=16)
def _theta_coeffs(bits: int, count: int = 200):
    with mp.workprec(bits):
        out = []
        for k in range(1, count + 1):
            b = abs(mpmath.bernoulli(2 * k))
            out.append((1 - mpmath.ldexp(1, 1 - 2 * k)) * b / (4 * k * (2 * k - 1)))
        return tuple(out)


def _theta_direct(t):
    lg = _loggamma(mpmath.mpc(0.25, t / 2))
    return lg.imag - t / 2 * mpmath.log(mp.pi)


def _theta(t):
    """theta(t) at the ambient precision, t >= 1."""
    # the power series misses a term of size ~ e^{-pi t}
    if t < 10 or mp.pi * t < (mp.prec + 8) * mp.ln2:
        return _theta_direct(t)
    res = t / 2 * mpmath.log(t / (2 * mp.pi)) - t / 2 - mp.pi / 8
    eps = mpmath.ldexp(1, -mp.prec - 2)
    tinv = 1 / mpmath.mpf(t)
    t2 = tinv * tinv
    pw = tinv
    prev = None
    for c in _theta_coeffs(mp.prec + 20):
        term = c * pw
        if prev is not None and term > prev:
            return _theta_direct(t)
        res += term
        if term < eps * (1 + abs(res)):
            return res
        prev = term
        pw *= t2
    return _theta_direct(t)


def rs_theta(t, prec=None) -> mpmath.mpf:
    """Riemann-Siegel theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        t = mpmath.mpf(t)
        if t < 1:
            raise DomainError(f"rs_theta needs t >= 1, got {t}")
        return +_theta(t)


def _hardy_z(t, p):
    th = _theta(t)
    z, _ = _zeta_em(mpmath.mpc(0.5, t))
    val = mpmath.expj(th) * z
    if abs(val.imag) >= mpmath.mpf(10) ** (6 - p) * (1 + abs(val.real)):
        raise PrecisionError(f"Z({mpmath.nstr(t, 12)}) has imaginary residue {mpmath.nstr(val.imag, 5)}")
    return val.real


def hardy_z(t, prec=None) -> mpmath.mpf:
    """Hardy's Z(t) = Re(e^{i theta(t)} zeta(1/2 + it)), with the Im-part consistency check."""
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        t = mpmath.mpf(t)
        if t < 1:
            raise DomainError(f"hardy_z needs t >= 1, got {t}")
        return +_hardy_z(t, p)
