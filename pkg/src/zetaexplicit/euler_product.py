"""Prime sieving, the von Mangoldt table, truncated Euler products and their checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp

from .config import BUDGET, DEFAULT_C, GUARD_DIGITS, resolve_prec
from .errors import CutoffError, LimitError
from .numerics import Cx, constants, to_mpc, wrap

LIMIT_MAX = 10**9
SEGMENT_THRESHOLD = 10**7
SEGMENT_SIZE = 1 << 20


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primes up to ``limit`` and the nonzero entries of Lambda(n).

    ``powers`` lists every prime power n <= limit in ascending order and
    ``bases`` the prime it is a power of, so Lambda(powers[i]) = log(bases[i]).
    """

    limit: int
    primes: np.ndarray
    powers: np.ndarray
    bases: np.ndarray

    def lambda_of(self, n: int) -> float:
        if n > self.limit:
            raise CutoffError(f"n = {n} exceeds the table limit {self.limit}")
        i = int(np.searchsorted(self.powers, n))
        if i < len(self.powers) and self.powers[i] == n:
            return math.log(int(self.bases[i]))
        return 0.0

    @property
    def lam(self) -> dict:
        """Lambda as a mapping n -> log p over prime powers (nonzero entries only)."""
        return {int(n): math.log(int(p)) for n, p in zip(self.powers, self.bases)}

    def primes_upto(self, X) -> np.ndarray:
        return self.primes[: np.searchsorted(self.primes, math.floor(X), side="right")]

    def powers_upto(self, X):
        k = np.searchsorted(self.powers, math.floor(X), side="right")
        return self.powers[:k], self.bases[:k]


def _simple_sieve(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p)


def _segmented_sieve(limit: int, segment=SEGMENT_SIZE) -> np.ndarray:
    base = _simple_sieve(math.isqrt(limit))
    chunks = [base]
    lo = int(base[-1]) + 1 if len(base) else 2
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            seg[start - lo :: p] = False
        chunks.append(np.flatnonzero(seg) + lo)
        lo = hi
    return np.concatenate(chunks).astype(np.int64)


@lru_cache(maxsize=8)
def build_prime_table(limit: int, segmented: bool | None = None) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` (segmented above 10^7)."""
    limit = int(limit)
    if not 2 <= limit <= LIMIT_MAX:
        raise LimitError(f"limit must lie in [2, {LIMIT_MAX}], got {limit}")
    if segmented is None:
        segmented = limit > SEGMENT_THRESHOLD
    primes = _segmented_sieve(limit) if segmented else _simple_sieve(limit).astype(np.int64)
    powers = [primes]
    bases = [primes]
    small = primes[primes <= math.isqrt(limit)]
    pk = small * small
    while len(small):
        keep = pk <= limit
        small, pk = small[keep], pk[keep]
        if not len(small):
            break
        powers.append(pk.copy())
        bases.append(small.copy())
        pk = pk * small
    powers = np.concatenate(powers)
    bases = np.concatenate(bases)
    order = np.argsort(powers, kind="stable")
    return PrimeTable(limit=limit, primes=primes, powers=powers[order], bases=bases[order])


def _check_cutoff(X, pt: PrimeTable):
    if X > pt.limit:
        raise CutoffError(f"cutoff {X} exceeds the prime table limit {pt.limit}")


def _log_euler_sum(s, X, pt):
    """-sum_{p <= X} log(1 - p^-s), principal branch per factor."""
    acc = mpmath.mpc(0)
    for p in pt.primes_upto(X):
        acc -= mpmath.log1p(-mpmath.exp(-s * mpmath.log(int(p))))
    return acc


def truncated_euler_product(s, X, pt: PrimeTable, prec=None) -> Cx:
    """prod_{p <= X} (1 - p^-s)^-1, accumulated in log space and exponentiated once."""
    p = resolve_prec(prec if prec is not None else getattr(s, "prec", None))
    _check_cutoff(X, pt)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mpc(s)
        if s.real <= 0:
            raise CutoffError("truncated Euler product needs Re s > 0")
        return wrap(mpmath.exp(_log_euler_sum(s, X, pt)), p)


def mertens_ratio(X, pt: PrimeTable) -> float:
    """[prod_{p <= X} (1 - 1/p)^-1] / log X."""
    if X < 10:
        raise CutoffError(f"mertens_ratio needs X >= 10, got {X}")
    _check_cutoff(X, pt)
    ps = pt.primes_upto(X).astype(float)
    return math.exp(-math.fsum(np.log1p(-1.0 / ps))) / math.log(X)


def dropped_prime_powers(s, X, pt: PrimeTable, prec=None) -> Cx:
    """sum over p <= X, p^k > X of 1/(k p^(ks)): what the n <= X cut leaves out."""
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mpc(s)
        tol = mpmath.mpf(10) ** (-(p + GUARD_DIGITS))
        acc = mpmath.mpc(0)
        for q in pt.primes_upto(X):
            q = int(q)
            k = int(math.floor(math.log(X) / math.log(q))) + 1
            while q**k <= X:
                k += 1
            while q ** (k - 1) > X:
                k -= 1
            base = mpmath.exp(-s * mpmath.log(q))
            term = base**k
            while True:
                acc += term / k
                if abs(term) / k < tol:
                    break
                term *= base
                k += 1
        return wrap(acc, p)


def log_euler_identity_check(s, X, pt: PrimeTable, prec=None):
    """sum_{n <= X} Lambda(n)/(n^s log n) against -sum_{p <= X} log(1 - p^-s)."""
    from .explicit_formula import VerificationReport

    p = resolve_prec(prec if prec is not None else getattr(s, "prec", None))
    _check_cutoff(X, pt)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mpc(s)
        lhs = mpmath.mpc(0)
        powers, bases = pt.powers_upto(X)
        for n, q in zip(powers, bases):
            n, q = int(n), int(q)
            k = round(math.log(n) / math.log(q))
            lhs += mpmath.exp(-s * mpmath.log(n)) / k
        rhs = _log_euler_sum(s, X, pt)
        terms = [("inv_log_X", BUDGET.k3 / math.log(X))]
        return VerificationReport.build(
            wrap(lhs, p), wrap(rhs, p), terms, {"sigma": float(s.real), "t": float(s.imag), "X": float(X)}
        )


@dataclass(frozen=True)
class EulerAsymptotic:
    t: float
    X: float
    discrepancy: float
    gate: float
    l_value: float | None


def euler_asymptotic_check(t, X, pt: PrimeTable, prec=None, zt=None, C=DEFAULT_C) -> EulerAsymptotic:
    """|zeta(1+it) / prod_{p <= X}(1 - p^(-1-it))^-1 - 1| with the gate max(L(t)^2, log t)/X.

    L(t) needs a zero table covering the window; without one the gate falls
    back to log(t)/X and ``l_value`` is None.
    """
    from .zeta_core import _zeta_any
    from .zeros import l_of

    p = resolve_prec(prec)
    _check_cutoff(X, pt)
    with mp.workdps(p + GUARD_DIGITS):
        s = mpmath.mpc(1, t)
        z, _ = _zeta_any(s)
        prod = mpmath.exp(_log_euler_sum(s, X, pt))
        disc = float(abs(z / prod - 1))
    L = None
    big = math.log(t)
    if zt is not None:
        L = l_of(t, C, zt, p).l_value
        big = max(L * L, big)
    return EulerAsymptotic(t=float(t), X=float(X), discrepancy=disc, gate=big / X, l_value=L)


def chebyshev_ratio(pt: PrimeTable, N=None) -> float:
    """sum_{n <= N} Lambda(n) / N."""
    N = pt.limit if N is None else N
    powers, bases = pt.powers_upto(N)
    return math.fsum(np.log(bases.astype(float))) / N


def e_gamma(prec=None):
    return constants(prec).e_gamma
