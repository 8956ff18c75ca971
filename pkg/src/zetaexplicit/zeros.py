"""Zero-ordinate tables, N(t), S(t) and the window maximum L(t).

S(t) is realized exactly as ``N(t) - theta(t)/pi - 1`` with N counting
ordinates ``gamma <= t`` (right-continuous).

Zero-table text format: UTF-8, one ordinate per line in decimal notation,
strictly ascending, ``#`` starts a comment line, blank lines are ignored.
A comment of the form ``# height: <T>`` optionally declares the height up
to which the table is complete; otherwise the last ordinate is used.
"""

from __future__ import annotations

import bisect
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
import numpy as np
from mpmath import mp

from .config import GUARD_DIGITS, ZERO_GRID_STEP, resolve_prec
from .errors import (
    CParameterError,
    DomainError,
    HeightExceededError,
    MissedZeroSuspected,
    OrderError,
    ParseError,
    SanityError,
    TableTooShortError,
)
from .fastpath import hardy_z_array, s_array
from .zeta_core import _hardy_z, _theta

FIRST_ZERO_BOUNDS = (14.0, 14.2)
T_MAX = 1.0e6
# |S| bound used by the completeness check (table invariant)
S_COUNT_BOUND = 2.0
# |mean S| over a window of this width; the true value is < 0.15 at desk heights
MEAN_WINDOW = 20.0
MEAN_BOUND = 1.0
STORE_DIGITS = 60

_HEIGHT_RE = re.compile(r"^#\s*height\s*:\s*(\S+)\s*$", re.IGNORECASE)


def _exact(t):
    # an ordinate passed back in must not be rounded to the ambient precision
    with mp.workdps(STORE_DIGITS):
        return mpmath.mpf(t)


@dataclass(frozen=True)
class ZeroTable:
    ordinates: tuple
    source: str = "computed"
    height: float = 0.0
    claimed_complete: bool = False
    start: float = 0.0
    _floats: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # parse/copy at a generous precision so stored ordinates are never rounded
        with mp.workdps(STORE_DIGITS):
            ords = tuple(mpmath.mpf(g) for g in self.ordinates)
        object.__setattr__(self, "ordinates", ords)
        if self.source not in ("computed", "ingested"):
            raise ValueError(f"unknown zero-table source {self.source!r}")
        for i in range(1, len(ords)):
            if not ords[i] > ords[i - 1]:
                raise OrderError(f"ordinates not strictly increasing at index {i}: {ords[i - 1]} >= {ords[i]}")
        if ords and ords[0] <= 0:
            raise OrderError("ordinates must be positive")
        if ords and self.start < FIRST_ZERO_BOUNDS[0]:
            lo, hi = FIRST_ZERO_BOUNDS
            if not lo < ords[0] < hi:
                raise SanityError(f"first ordinate {mpmath.nstr(ords[0], 12)} is outside ({lo}, {hi})")
        if ords and ords[-1] > self.height:
            object.__setattr__(self, "height", float(ords[-1]))
        object.__setattr__(self, "_floats", np.array([float(g) for g in ords]))

    def __len__(self):
        return len(self.ordinates)

    @property
    def floats(self) -> np.ndarray:
        return self._floats

    def count_upto(self, t) -> int:
        """Ordinates <= t, compared against the stored multiprecision values."""
        return bisect.bisect_right(self.ordinates, _exact(t))

    def between(self, lo, hi):
        """Ordinates gamma with lo < gamma <= hi."""
        i = bisect.bisect_right(self.ordinates, _exact(lo))
        j = bisect.bisect_right(self.ordinates, _exact(hi))
        return self.ordinates[i:j]


@dataclass(frozen=True)
class LWindowRecord:
    t: float
    C: float
    window_lo: float
    window_hi: float
    l_value: float
    argmax_u: float


# ---------------------------------------------------------------------------
# completeness


def count_consistent(ordinates, height, start=0.0) -> bool:
    """Does the table satisfy |N(T) - theta(T)/pi - 1| < 2 for all T <= height?

    S is decreasing between ordinates, so checking both one-sided limits at
    every ordinate and the endpoints covers every T.  A window-mean test on
    S (which averages to ~0) additionally catches close pairs missed by the
    sign scan.
    """
    g = np.asarray([float(x) for x in ordinates])
    lo = max(start, 2.0)
    if height <= lo:
        return True
    pts = np.concatenate([[lo, height], g[g >= lo]])
    s_right = s_array(pts, g)
    s_left = s_right[2:] - 1.0
    if np.any(np.abs(s_right) >= S_COUNT_BOUND) or np.any(np.abs(s_left) >= S_COUNT_BOUND):
        return False
    if height - lo >= MEAN_WINDOW:
        grid = np.arange(lo, height, 0.01)
        s = s_array(grid, g)
        per = int(MEAN_WINDOW / 0.01)
        full = (len(s) // per) * per
        means = s[:full].reshape(-1, per).mean(axis=1)
        if np.any(np.abs(means) >= MEAN_BOUND):
            return False
    return True


# ---------------------------------------------------------------------------
# locating zeros


def _illinois(f, a, fa, b, fb, tol, maxiter=200):
    """Bracketing false position with the Illinois modification."""
    side = 0
    for _ in range(maxiter):
        c = (a * fb - b * fa) / (fb - fa)
        fc = f(c)
        if fc == 0 or abs(b - a) < tol:
            return c
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == -1:
                fa /= 2
            side = -1
        else:
            a, fa = c, fc
            if side == 1:
                fb /= 2
            side = 1
        if abs(b - a) < tol:
            return (a + b) / 2
    raise MissedZeroSuspected(f"root refinement did not converge in [{a}, {b}]")


def _refine(a, b, za, zb, prec):
    """Root of Z in [a, b]: double-precision bracket first, then multiprecision."""
    f = lambda x: float(hardy_z_array(np.array([x]))[0])  # noqa: E731
    g = _illinois(f, a, za, b, zb, 1e-12)
    with mp.workdps(prec + GUARD_DIGITS):
        tol = mpmath.mpf(10) ** (-prec / 2)
        Z = lambda x: _hardy_z(x, prec)  # noqa: E731
        delta = mpmath.mpf(1e-9) * max(1.0, g / 100)
        lo, hi = mpmath.mpf(g) - delta, mpmath.mpf(g) + delta
        zlo, zhi = Z(lo), Z(hi)
        if zlo * zhi > 0:
            lo, hi = mpmath.mpf(a), mpmath.mpf(b)
            zlo, zhi = Z(lo), Z(hi)
            if zlo * zhi > 0:
                raise MissedZeroSuspected(f"lost the sign change in [{a}, {b}]")
        return +_illinois(Z, lo, zlo, hi, zhi, tol)


def _scan(t_lo, t_hi, step, prec):
    n = max(1, math.ceil((t_hi - t_lo) / step))
    grid = np.linspace(t_lo, t_hi, n + 1)
    z = hardy_z_array(grid)
    out = []
    for i in range(n):
        za, zb = z[i], z[i + 1]
        if za == 0.0:
            out.append(mpmath.mpf(grid[i]))
        elif za * zb < 0:
            out.append(_refine(grid[i], grid[i + 1], za, zb, prec))
    if z[n] == 0.0:
        out.append(mpmath.mpf(grid[n]))
    return out


def locate_zeros(t_lo, t_hi, prec=None, step=ZERO_GRID_STEP) -> ZeroTable:
    """All zeros 1/2 + i gamma with t_lo <= gamma <= t_hi, by sign changes of Z.

    The grid is refined 4x once if the completeness check fails; a table
    that starts above the first zero cannot be checked and is returned with
    ``claimed_complete = False``.
    """
    prec = resolve_prec(prec)
    t_lo, t_hi = float(t_lo), float(t_hi)
    if not (1 <= t_lo < t_hi <= T_MAX):
        raise DomainError(f"need 1 <= t_lo < t_hi <= {T_MAX:g}, got [{t_lo}, {t_hi}]")
    checkable = t_lo <= FIRST_ZERO_BOUNDS[0]
    for h in (step, step / 4):
        ords = _scan(t_lo, t_hi, h, prec)
        if not checkable:
            return ZeroTable(tuple(ords), "computed", t_hi, False, start=t_lo)
        if count_consistent(ords, t_hi):
            return ZeroTable(tuple(ords), "computed", t_hi, True, start=0.0)
    raise MissedZeroSuspected(f"zero count in [{t_lo}, {t_hi}] inconsistent with theta/pi + 1 + S, |S| < 2")


# ---------------------------------------------------------------------------
# ingest / write


def ingest_zero_table(path) -> ZeroTable:
    path = Path(path)
    ords = []
    height = None
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _HEIGHT_RE.match(line)
                if m:
                    try:
                        height = float(m.group(1))
                    except ValueError:
                        raise ParseError(f"bad height directive {line!r}", lineno) from None
                continue
            try:
                float(line)
                with mp.workdps(STORE_DIGITS):
                    val = mpmath.mpf(line)
            except (ValueError, TypeError):
                raise ParseError(f"not a decimal number: {line!r}", lineno) from None
            if not mpmath.isfinite(val):
                raise ParseError(f"not a finite number: {line!r}", lineno)
            if ords and not val > ords[-1]:
                raise OrderError(f"line {lineno}: {line} does not exceed the previous ordinate")
            ords.append(val)
    if height is None:
        height = float(ords[-1]) if ords else 0.0
    complete = count_consistent(ords, height)
    return ZeroTable(tuple(ords), "ingested", height, complete)


def write_zero_table(zt: ZeroTable, path, digits=None) -> None:
    digits = digits or 20
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"# zeta zero ordinates ({zt.source}), {len(zt)} entries\n")
        fh.write(f"# height: {zt.height!r}\n")
        for g in zt.ordinates:
            fh.write(mpmath.nstr(g, digits, strip_zeros=False, min_fixed=-1, max_fixed=30) + "\n")


# ---------------------------------------------------------------------------
# N, S, L


def _require(zt: ZeroTable, t):
    if not zt.claimed_complete:
        raise TableTooShortError("zero table is not claimed complete from the first zero")
    if t > zt.height:
        raise HeightExceededError(f"t = {float(t)} exceeds the table height {zt.height}")


def n_of(t, zt: ZeroTable) -> int:
    """N(t): number of ordinates gamma <= t."""
    _require(zt, t)
    return zt.count_upto(t)


def s_of(t, zt: ZeroTable, prec=None) -> mpmath.mpf:
    """S(t) = N(t) - theta(t)/pi - 1 (right-continuous at ordinates)."""
    prec = resolve_prec(prec)
    if t < 2:
        raise DomainError(f"s_of needs t >= 2, got {t}")
    n = n_of(t, zt)
    with mp.workdps(prec + GUARD_DIGITS):
        return n - _theta(mpmath.mpf(t)) / mp.pi - 1


def l_window(t, C):
    w = C * math.log(math.log(t))
    return t - w, t + w


def l_of(t, C, zt: ZeroTable, prec=None) -> LWindowRecord:
    """L(t) = max |S(u)| over |u - t| <= C log log t, by exact candidate enumeration.

    S decreases between ordinates and jumps up by one at each, so the
    extreme values of |S| on the window sit at the window ends and at the
    one-sided limits at each interior ordinate.
    """
    prec = resolve_prec(prec)
    if not C > 1 / math.pi:
        raise CParameterError(f"C must exceed 1/pi, got {C}")
    t = float(t)
    if t <= math.e:
        raise DomainError("log log t requires t > e")
    lo, hi = l_window(t, C)
    if lo < 2:
        raise DomainError(f"window [{lo}, {hi}] extends below 2")
    _require(zt, hi)
    with mp.workdps(prec + GUARD_DIGITS):
        cands = [(abs(s_of(lo, zt, prec)), lo), (abs(s_of(hi, zt, prec)), hi)]
        for g in zt.between(lo, hi):
            right = s_of(g, zt, prec)
            cands.append((abs(right), float(g)))
            cands.append((abs(right - 1), float(g)))
        best, arg = max(cands, key=lambda c: c[0])
    return LWindowRecord(t=t, C=float(C), window_lo=lo, window_hi=hi, l_value=float(best), argmax_u=arg)
