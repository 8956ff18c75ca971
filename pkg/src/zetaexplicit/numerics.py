"""Multiprecision complex substrate: ``Cx``, constants, Gamma and digamma.

mpmath supplies the arbitrary-precision reals. Gamma and digamma are
evaluated here by upward recurrence into ``|w| >= R`` followed by the
Stirling series, with the reflection formula for ``Re z < 1/2``.

Internal helpers prefixed ``_`` work on ``mpmath.mpc`` at whatever
``mp.prec`` the caller has set; public functions set the precision
themselves (requested digits plus ``GUARD_DIGITS``) and return ``Cx``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import mpmath
from mpmath import mp

from .config import GUARD_DIGITS, MIN_PREC, resolve_prec
from .errors import DomainError, GammaOverflowError, PoleError

# |log Gamma| beyond this is treated as unrepresentable
LOG_MAX = 1.0e7


@dataclass(frozen=True)
class Cx:
    """Complex value with the working precision (decimal digits) it was produced at."""

    re: mpmath.mpf
    im: mpmath.mpf
    prec: int

    def __post_init__(self):
        if self.prec < MIN_PREC:
            raise DomainError(f"Cx precision must be >= {MIN_PREC}, got {self.prec}")
        if not (mpmath.isfinite(self.re) and mpmath.isfinite(self.im)):
            raise GammaOverflowError(f"non-finite component in Cx({self.re}, {self.im})")

    @classmethod
    def of(cls, value, prec=None) -> "Cx":
        if isinstance(value, Cx) and prec is None:
            return value
        p = resolve_prec(prec if prec is not None else getattr(value, "prec", None))
        with mp.workdps(p + GUARD_DIGITS):
            z = to_mpc(value)
            return cls(mpmath.mpf(z.real), mpmath.mpf(z.imag), p)

    @property
    def mpc(self) -> mpmath.mpc:
        # built at the value's own precision, not the caller's ambient one
        with mp.workdps(self.prec + GUARD_DIGITS):
            return mpmath.mpc(self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        with mp.workdps(self.prec + GUARD_DIGITS):
            return mpmath.hypot(self.re, self.im)

    def conjugate(self) -> "Cx":
        with mp.workdps(self.prec + GUARD_DIGITS):
            return Cx(self.re, -self.im, self.prec)

    def _binary(self, other, op):
        p = max(self.prec, getattr(other, "prec", self.prec))
        with mp.workdps(p + GUARD_DIGITS):
            z = op(self.mpc, to_mpc(other))
            return Cx(mpmath.mpf(z.real), mpmath.mpf(z.imag), p)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        with mp.workdps(self.prec + GUARD_DIGITS):
            return Cx(-self.re, -self.im, self.prec)

    def __str__(self):
        digits = self.prec
        return f"{mpmath.nstr(self.re, digits)} {'-' if self.im < 0 else '+'} {mpmath.nstr(abs(self.im), digits)}i"


def to_mpc(value) -> mpmath.mpc:
    """Coerce Cx, Python numbers, mpmath numbers or decimal strings to ``mpc``."""
    if isinstance(value, Cx):
        return value.mpc
    if isinstance(value, (mpmath.mpc, mpmath.mpf)):
        return mpmath.mpc(value)
    if isinstance(value, (str, Number)):
        return mpmath.mpc(value)
    sigma, t = getattr(value, "sigma", None), getattr(value, "t", None)
    if sigma is not None and t is not None:
        return mpmath.mpc(sigma, t)
    raise TypeError(f"cannot interpret {value!r} as a complex number")


def wrap(z, prec: int) -> Cx:
    with mp.workdps(prec + GUARD_DIGITS):
        return Cx(mpmath.mpf(z.real), mpmath.mpf(z.imag), prec)


@dataclass(frozen=True)
class Constants:
    pi: mpmath.mpf
    euler_gamma: mpmath.mpf
    e_gamma: mpmath.mpf
    prec: int


@lru_cache(maxsize=None)
def constants(prec=None) -> Constants:
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        g = +mp.euler
        return Constants(pi=+mp.pi, euler_gamma=g, e_gamma=mpmath.exp(g), prec=p)


# ---------------------------------------------------------------------------
# Gamma / digamma kernels (operate at the ambient mp.prec)


@lru_cache(maxsize=64)
def _stirling_coeffs(bits: int, count: int = 200):
    """B_2k / (2k (2k-1)) and B_2k / (2k) for k = 1..count at ``bits`` precision."""
    with mp.workprec(bits):
        lg, dg = [], []
        for k in range(1, count + 1):
            b = mpmath.bernoulli(2 * k)
            lg.append(b / (2 * k * (2 * k - 1)))
            dg.append(b / (2 * k))
        return tuple(lg), tuple(dg)


def _shift_radius() -> float:
    # exp(-2 pi R) is the best attainable Stirling error at |w| = R
    digits = mp.prec * math.log10(2)
    return max(20.0, 0.4 * (digits + 5))


def _is_pole(z) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == mpmath.floor(z.real)


def _shift_count(z) -> int:
    R = _shift_radius()
    re, im = float(z.real), float(z.imag)
    m = max(0, math.ceil(1.0 - re))
    if abs(im) < R:
        m = max(m, math.ceil(math.sqrt(R * R - im * im) - re))
    return m


def _fixed(x, F):
    return int(mpmath.nint(mpmath.ldexp(x, F)))


def _unfixed(re, im, F):
    return mpmath.mpc(mpmath.ldexp(re, -F), mpmath.ldexp(im, -F))


def _shift_product(z, m, derivative=False):
    """prod_{j<m} (z + j), its z-derivative (if asked) and the float sum of args.

    Runs in fixed point; every factor has modulus >= 1/2 on the paths that
    call this, so the relative rounding error stays near 2^-F per step.
    """
    F = mp.prec + 24
    one = 1 << F
    zr, zi = _fixed(z.real, F), _fixed(z.imag, F)
    pr, pi = one, 0
    dr = di = 0
    argsum = 0.0
    re, im = float(z.real), float(z.imag)
    for j in range(m):
        fr = zr + j * one
        if derivative:
            dr, di = ((dr * fr - di * zi) >> F) + pr, ((dr * zi + di * fr) >> F) + pi
        pr, pi = (pr * fr - pi * zi) >> F, (pr * zi + pi * fr) >> F
        argsum += math.atan2(im, re + j)
    return _unfixed(pr, pi, F), _unfixed(dr, di, F), argsum


def _branch_log(prod, argsum):
    lp = mpmath.log(prod)
    k = round((argsum - float(lp.imag)) / (2 * math.pi))
    if k:
        lp += mpmath.mpc(0, 2 * k) * mp.pi
    return lp


def _log_sum(z, m):
    """sum_{j<m} log(z + j) with principal logs, via one log of the product."""
    if m == 0:
        return mpmath.mpc(0)
    prod, _, argsum = _shift_product(z, m)
    return _branch_log(prod, argsum)


@lru_cache(maxsize=64)
def _stirling_log10(bits: int):
    lg, dg = _stirling_coeffs(bits)
    return (
        tuple(math.log10(abs(float(c))) for c in lg),
        tuple(math.log10(abs(float(c))) for c in dg),
    )


def _term_count(w, log10c, first_power):
    """Smallest K whose last term c_K w^-(2K - 2 + first_power) falls below 2^-prec."""
    target = -(mp.prec + 4) * math.log10(2)
    la = math.log10(abs(complex(w)))
    for k, lc in enumerate(log10c):
        if lc - (2 * k + first_power) * la < target:
            return k + 1
    raise ArithmeticError("Stirling series did not converge; shift radius too small")


@lru_cache(maxsize=64)
def _stirling_fixed(bits: int):
    lg, dg = _stirling_coeffs(bits)
    with mp.workprec(bits):
        return tuple(_fixed(c, bits) for c in lg), tuple(_fixed(c, bits) for c in dg)


def _horner(coeffs, K, u, F):
    """sum_{k<K} coeffs[k] u^k in fixed point at scale 2^F (|u| is small here)."""
    ur, ui = _fixed(u.real, F), _fixed(u.imag, F)
    ar, ai = coeffs[K - 1], 0
    for c in coeffs[K - 2 :: -1]:
        ar, ai = ((ar * ur - ai * ui) >> F) + c, (ar * ui + ai * ur) >> F
    return _unfixed(ar, ai, F)


def _stirling_loggamma(w):
    bits = mp.prec + 20
    coeffs, _ = _stirling_fixed(bits)
    K = _term_count(w, _stirling_log10(bits)[0], 1)
    winv = 1 / w
    res = (w - 0.5) * mpmath.log(w) - w + mpmath.log(2 * mp.pi) / 2
    return res + winv * _horner(coeffs, K, winv * winv, bits)


def _stirling_digamma(w):
    bits = mp.prec + 20
    _, coeffs = _stirling_fixed(bits)
    K = _term_count(w, _stirling_log10(bits)[1], 2)
    w2 = 1 / (w * w)
    return mpmath.log(w) - 1 / (2 * w) - w2 * _horner(coeffs, K, w2, bits)


def _loggamma(z):
    """Principal-branch log Gamma (cut along the negative real axis)."""
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at {z}")
    m = _shift_count(z)
    return _stirling_loggamma(z + m) - _log_sum(z, m)


def _check_overflow(lg):
    if lg.real > LOG_MAX:
        raise GammaOverflowError(f"|Gamma| ~ exp({mpmath.nstr(lg.real, 8)}) is out of range")


def _gamma(z):
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        lg = _loggamma(1 - z)
        if -lg.real > LOG_MAX:
            raise GammaOverflowError("Gamma(z) overflows via the reflection formula")
        return mp.pi / (mpmath.sinpi(z) * mpmath.exp(lg))
    lg = _loggamma(z)
    _check_overflow(lg)
    return mpmath.exp(lg)


def _digamma(z):
    if _is_pole(z):
        raise PoleError(f"digamma has a pole at {z}")
    if z.real < 0.5:
        return _digamma(1 - z) - mp.pi * mpmath.cospi(z) / mpmath.sinpi(z)
    m = _shift_count(z)
    if m == 0:
        return _stirling_digamma(z)
    # sum_{j<m} 1/(z+j) = P'/P
    prod, dprod, _ = _shift_product(z, m, derivative=True)
    return _stirling_digamma(z + m) - dprod / prod


def _gamma_digamma(z):
    """Gamma(z) and psi(z) together; shares the reflection and shift work."""
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at {z}")
    refl = z.real < 0.5
    u = 1 - z if refl else z
    m = _shift_count(u)
    w = u + m
    lg = _stirling_loggamma(w)
    ps = _stirling_digamma(w)
    if m:
        prod, dprod, argsum = _shift_product(u, m, derivative=True)
        lg -= _branch_log(prod, argsum)
        ps -= dprod / prod
    if refl:
        s, c = mpmath.sinpi(z), mpmath.cospi(z)
        if -lg.real > LOG_MAX:
            raise GammaOverflowError("Gamma(z) overflows via the reflection formula")
        return mp.pi / (s * mpmath.exp(lg)), ps - mp.pi * c / s
    _check_overflow(lg)
    return mpmath.exp(lg), ps


# ---------------------------------------------------------------------------
# public surface


def gamma_cx(z, prec=None) -> Cx:
    """Gamma(z) with relative error below 10^(3 - prec)."""
    p = resolve_prec(prec if prec is not None else getattr(z, "prec", None))
    with mp.workdps(p + GUARD_DIGITS):
        return wrap(_gamma(to_mpc(z)), p)


def loggamma_cx(z, prec=None) -> Cx:
    p = resolve_prec(prec if prec is not None else getattr(z, "prec", None))
    with mp.workdps(p + GUARD_DIGITS):
        lg = _loggamma(to_mpc(z))
        _check_overflow(lg)
        return wrap(lg, p)


def digamma_cx(z, prec=None) -> Cx:
    """psi(z) = Gamma'(z)/Gamma(z) with absolute error below 10^(3 - prec)."""
    p = resolve_prec(prec if prec is not None else getattr(z, "prec", None))
    with mp.workdps(p + GUARD_DIGITS):
        return wrap(_digamma(to_mpc(z)), p)


def gamma_kernel_bound(sigma, y, K=None) -> float:
    """Explicit majorant ``K |y|^-sigma exp(-pi |y| / 2)`` for ``|Gamma(1/2 - sigma + iy)|``.

    Checked (not proved) to dominate on ``|y| >= 1``, ``1/2 < sigma <= 9/8``.
    """
    from .config import BUDGET

    if K is None:
        K = BUDGET.gamma_kernel
    y = abs(float(y))
    if y < 1:
        raise DomainError(f"gamma_kernel_bound needs |y| >= 1, got {y}")
    return K * y ** (-float(sigma)) * math.exp(-math.pi * y / 2)
