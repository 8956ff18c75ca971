"""Explicit-formula engine: smoothed prime sums, zero sums, J(t, X) and the checks tying them to zeta'/zeta.

Every implied constant is realized as a named, nonnegative budget term.  A
``VerificationReport`` passes exactly when the residual |lhs - rhs| is at most
the sum of its budget terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .config import BUDGET, DEFAULT_C, GUARD_DIGITS, resolve_prec
from .errors import CutoffOverflowError, DomainError, TableTooShortError
from .euler_product import build_prime_table
from .numerics import Cx, _gamma, _gamma_digamma, gamma_kernel_bound, wrap
from .quadrature import adaptive_gl, oscillation_nodes
from .zeros import S_COUNT_BOUND, ZeroTable
from .zeta_core import _theta, _zeta_log_deriv

N_CUT_MAX = 10**9
# Summing by parts turns  sum_rho f(gamma - t)  into  smooth part - J(t, X);
# J itself is kept in the stated form and the sign is applied by the callers.
J_SIGN = -1
J_MAX_PANEL = 2.0
PROP_SIGMA_MIN = 0.55
SIGMA_MAX = 1.125
T_MIN = 50.0


@dataclass(frozen=True)
class SmoothingParams:
    X: float
    sigma: float
    t: float
    prec: int | None = None
    delta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "prec", resolve_prec(self.prec))
        if not self.X >= 1:
            raise DomainError(f"smoothing length X must be >= 1, got {self.X}")

    @property
    def s(self) -> mpmath.mpc:
        return mpmath.mpc(self.sigma, self.t)

    def check_validity_range(self):
        """1 <= X <= exp(sqrt|t|), the range where the error terms are uniform."""
        if self.X > math.exp(math.sqrt(abs(self.t))):
            raise DomainError(f"X = {self.X} exceeds exp(sqrt(|t|)) = {math.exp(math.sqrt(abs(self.t))):.6g}")


@dataclass(frozen=True)
class VerificationReport:
    lhs: Cx
    rhs: Cx
    residual: float
    budget_terms: tuple
    budget_total: float
    passed: bool
    params: dict = field(default_factory=dict)

    @classmethod
    def build(cls, lhs: Cx, rhs: Cx, terms, params=None):
        terms = tuple((str(k), float(v)) for k, v in terms)
        for k, v in terms:
            if not v >= 0:
                raise ValueError(f"budget term {k} is negative or NaN: {v}")
        total = math.fsum(v for _, v in terms)
        residual = float(abs((lhs - rhs).mpc))
        return cls(lhs, rhs, residual, terms, total, residual <= total, dict(params or {}))

    def conjugate(self) -> "VerificationReport":
        params = dict(self.params)
        if "t" in params:
            params["t"] = -params["t"]
        return VerificationReport(
            self.lhs.conjugate(), self.rhs.conjugate(), self.residual, self.budget_terms, self.budget_total, self.passed, params
        )

    def to_text(self) -> str:
        lines = [f"{k}: {v}" for k, v in self.params.items()]
        lines += [
            f"lhs: {self.lhs}",
            f"rhs: {self.rhs}",
            f"residual: {self.residual:.6e}",
        ]
        lines += [f"budget.{k}: {v:.6e}" for k, v in self.budget_terms]
        lines += [f"budget_total: {self.budget_total:.6e}", f"pass: {str(self.passed).lower()}"]
        return "\n".join(lines) + "\n"

    def csv_header(self) -> list:
        return ["sigma", "t", "X", "residual", "budget_total", "pass"] + [k for k, _ in self.budget_terms]

    def csv_row(self) -> list:
        p = self.params
        return [
            repr(p.get("sigma", "")),
            repr(p.get("t", "")),
            repr(p.get("X", "")),
            f"{self.residual:.12e}",
            f"{self.budget_total:.12e}",
            str(self.passed).lower(),
        ] + [f"{v:.12e}" for _, v in self.budget_terms]


# ---------------------------------------------------------------------------
# prime side


def prime_sum_cutoff(X, prec) -> int:
    return math.ceil(X * (prec * math.log(10) + 5))


def _smoothed_prime_sum(s, X, prec):
    n_cut = prime_sum_cutoff(X, prec)
    if n_cut > N_CUT_MAX:
        raise CutoffOverflowError(f"prime-sum cutoff {n_cut} exceeds {N_CUT_MAX}")
    pt = build_prime_table(max(n_cut, 2))
    powers, bases = pt.powers_upto(n_cut)
    X = mpmath.mpf(X)
    acc = mpmath.mpc(0)
    logs = {}
    for n, q in zip(powers.tolist(), bases.tolist()):
        lq = logs.get(q)
        if lq is None:
            lq = logs[q] = mpmath.log(q)
        ln = lq * round(math.log(n) / math.log(q))
        acc += lq * mpmath.exp(-s * ln - n / X)
    return acc


def smoothed_prime_sum(sp: SmoothingParams) -> Cx:
    """sum_n Lambda(n) n^-s exp(-n/X), cut where the remainder is below 10^-prec."""
    with mp.workdps(sp.prec + GUARD_DIGITS):
        return wrap(_smoothed_prime_sum(sp.s, sp.X, sp.prec), sp.prec)


# ---------------------------------------------------------------------------
# zero side


def zero_sum_halfwidth(prec, count) -> float:
    return (2 / math.pi) * (prec * math.log(10) + math.log(1 + count))


def _require_table(zt: ZeroTable, top):
    if zt is None or not zt.claimed_complete:
        raise TableTooShortError("a zero table complete from the first zero is required")
    if zt.height < top:
        raise TableTooShortError(f"zero table height {zt.height} is below the required {top}")


def _zero_sum(s, X, zt: ZeroTable, prec, widen=1.0):
    t = float(s.imag)
    delta = widen * zero_sum_halfwidth(prec, len(zt))
    _require_table(zt, max(1.5 * abs(t), abs(t) + delta))
    lx = mpmath.log(X)
    half = mpmath.mpf(1) / 2
    acc = mpmath.mpc(0)
    # rho = 1/2 + i gamma and its conjugate 1/2 - i gamma
    for sign in (1, -1):
        c = sign * t
        for g in zt.between(c - delta, c + delta):
            w = mpmath.mpc(half, sign * g) - s
            acc += mpmath.exp(w * lx) * _gamma(w)
    return acc


def zero_sum(sp: SmoothingParams, zt: ZeroTable, widen: float = 1.0) -> Cx:
    """sum over zeros rho with |gamma - t| <= Delta of X^(rho - s) Gamma(rho - s).

    ``widen`` scales Delta; used to check that the truncation is invisible.
    """
    if not sp.sigma > 0.5:
        raise DomainError("zero_sum needs sigma > 1/2")
    with mp.workdps(sp.prec + GUARD_DIGITS):
        return wrap(_zero_sum(sp.s, sp.X, zt, sp.prec, widen), sp.prec)


# ---------------------------------------------------------------------------
# smoothed explicit formula


def _check_strip(sigma, lo, t):
    if not lo <= sigma <= SIGMA_MAX:
        raise DomainError(f"sigma must lie in [{lo}, {SIGMA_MAX}], got {sigma}")
    if abs(t) < T_MIN:
        raise DomainError(f"|t| must be >= {T_MIN}, got {t}")


def _lemma_budget(s, X, sigma, t, prec):
    lx = mpmath.log(X)
    gamma_pole = abs(_gamma(1 - s) * mpmath.exp((1 - s) * lx))
    shifted = abs(_zeta_log_deriv(s - 1, prec)) / X
    kappa = sigma + BUDGET.kappa_offset
    kappa_line = BUDGET.k_int * X ** (kappa - sigma) * math.log(abs(t))
    return [
        ("gamma_pole", float(gamma_pole)),
        ("shifted_logderiv", float(shifted)),
        ("kappa_line", kappa_line),
        ("quadrature_slop", 10.0 ** (-prec + 8)),
    ]


def verify_lemma_explicit(sp: SmoothingParams, zt: ZeroTable) -> VerificationReport:
    """-zeta'/zeta(s) against prime sum + zero sum, budgeted by the contour-shift terms."""
    _check_strip(sp.sigma, 0.55, sp.t)
    sp.check_validity_range()
    p = sp.prec
    with mp.workdps(p + GUARD_DIGITS):
        s = sp.s
        lhs = -_zeta_log_deriv(s, p)
        rhs = _smoothed_prime_sum(s, sp.X, p) + _zero_sum(s, sp.X, zt, p)
        terms = _lemma_budget(s, sp.X, sp.sigma, sp.t, p)
        params = {
            "sigma": float(sp.sigma),
            "t": float(sp.t),
            "X": float(sp.X),
            "prec": p,
            "K_int": BUDGET.k_int,
            "kappa": float(sp.sigma) + BUDGET.kappa_offset,
        }
        return VerificationReport.build(wrap(lhs, p), wrap(rhs, p), terms, params)


# ---------------------------------------------------------------------------
# Mellin pair on a vertical line


def i_cutoff(prec) -> float:
    return (2 / math.pi) * prec * math.log(10)


def _i_line_integral(X, sigma, prec, panel=4.0):
    """(1/2 pi) times the integral over |y| <= Y_cut of Gamma(w) X^w, w = 1/2 - sigma + iy."""
    Y = i_cutoff(prec)
    lx = mpmath.log(X)
    c = mpmath.mpf(1) / 2 - mpmath.mpf(sigma)
    f = lambda y: _gamma(mpmath.mpc(c, y)) * mpmath.exp(mpmath.mpc(c, y) * lx)  # noqa: E731
    k = math.ceil(2 * Y / panel)
    edges = [-Y + 2 * Y * i / k for i in range(k + 1)]
    tol = mpmath.mpf(10) ** (-prec - 2) / k
    acc, err = mpmath.mpc(0), mpmath.mpf(0)
    for a, b in zip(edges, edges[1:]):
        n = oscillation_nodes(float(lx) + math.log(max(abs(a), abs(b)) + 2), b - a)
        v, e = adaptive_gl(f, a, b, tol, n)
        acc += v
        err += e
    # both tails beyond Y, bounded with the Gamma majorant
    tail = 2 * float(X) ** float(c) * gamma_kernel_bound(sigma, Y) * (2 / math.pi)
    return acc / (2 * mp.pi), float(err) / (2 * math.pi), tail / (2 * math.pi)


def i_contour_identity(X, sigma, prec=None) -> VerificationReport:
    """The vertical-line Mellin integral of Gamma(w) X^w against exp(-1/X) - 1."""
    p = resolve_prec(prec)
    if not 0.5 < sigma <= SIGMA_MAX:
        raise DomainError(f"sigma must lie in (1/2, {SIGMA_MAX}], got {sigma}")
    if not X >= 1:
        raise DomainError(f"X must be >= 1, got {X}")
    with mp.workdps(p + GUARD_DIGITS):
        lhs, err, tail = _i_line_integral(X, sigma, p)
        rhs = mpmath.expm1(-1 / mpmath.mpf(X))
        terms = [("quadrature_slop", 10.0 ** (-p + 8) + err), ("truncation", tail)]
        return VerificationReport.build(
            wrap(lhs, p), wrap(mpmath.mpc(rhs), p), terms, {"sigma": float(sigma), "X": float(X), "prec": p}
        )


def i_contour_independence(X, sigma_a, sigma_b, prec=None) -> float:
    """|difference| of the line integral on two lines with no pole between them."""
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        a, _, _ = _i_line_integral(X, sigma_a, p)
        b, _, _ = _i_line_integral(X, sigma_b, p)
        return float(abs(a - b))


# ---------------------------------------------------------------------------
# J(t, X)


@dataclass(frozen=True)
class JResult:
    value: Cx
    quad_error: float
    tail_charge: float
    y_star: float
    panels: int


def j_cutoff(t, C, prec) -> float:
    return max(C * math.log(math.log(t)), i_cutoff(prec))


def _j_tail(X, sigma, Y, s_bound):
    """Explicit bound on the part of J beyond |y| = Y (both sides).

    Uses |Gamma| <= gamma_kernel_bound, |psi(1/2 - sigma + iy)| <= log|y| + 2
    for |y| >= 20 and |S| < s_bound.
    """
    lx = math.log(X)
    g = gamma_kernel_bound(sigma, Y)
    return 2 * X ** (0.5 - sigma) * s_bound * g * (2 / math.pi) * (lx + math.log(Y) + 2 + 2 / (math.pi * Y))


def _j_parts(t, X, sigma, zt, C, prec, s_hook=None, max_width=J_MAX_PANEL) -> JResult:
    t = float(t)
    if not sigma > 0.5:
        raise DomainError("J(t, X) needs sigma > 1/2")
    if not C > 1 / math.pi:
        from .errors import CParameterError

        raise CParameterError(f"C must exceed 1/pi, got {C}")
    if t < 10:
        raise DomainError(f"J(t, X) needs t >= 10, got {t}")
    if s_hook is None:
        _require_table(zt, 1.5 * t)
    y_star = j_cutoff(t, C, prec)
    a, b = max(-y_star, -t / 2), min(y_star, t / 2)
    # panel edges: every jump of S(t + y) plus a width cap
    cuts = [a]
    counts = []
    if s_hook is None:
        jumps = [g - t for g in zt.between(t + a, t + b) if g - t < b]
        base = zt.count_upto(t + a)
    else:
        jumps, base = [], 0
    for j in [*jumps, mpmath.mpf(b)]:
        lo = cuts[-1]
        k = max(1, math.ceil(float(j - lo) / max_width))
        for i in range(1, k + 1):
            cuts.append(lo + (j - lo) * i / k)
            counts.append(base)
        base += 1
    lx = mpmath.log(X)
    c = mpmath.mpf(1) / 2 - mpmath.mpf(sigma)
    pref = mpmath.mpc(0, 1) * mpmath.exp(c * lx)
    tol = mpmath.mpf(10) ** (-prec - 2) / len(counts)
    acc, err = mpmath.mpc(0), mpmath.mpf(0)
    for lo, hi, n_count in zip(cuts, cuts[1:], counts):
        if s_hook is None:

            def S(y, n_count=n_count):
                return n_count - _theta(t + y) / mp.pi - 1

        else:

            def S(y):
                return s_hook(t + y)

        def f(y, S=S):
            w = mpmath.mpc(c, y)
            gm, ps = _gamma_digamma(w)
            return mpmath.expj(y * lx) * gm * (lx + ps) * S(y)

        w_far = mpmath.mpc(c, max(abs(lo), abs(hi)))
        _, ps_far = _gamma_digamma(w_far)
        n = oscillation_nodes(float(lx) + float(abs(ps_far)), float(hi - lo))
        v, e = adaptive_gl(f, lo, hi, tol, n)
        acc += v
        err += e
    tail = 0.0
    if y_star < t / 2:
        s_bound = S_COUNT_BOUND if s_hook is None else 1.0 + max(abs(float(s_hook(t + y))) for y in (a, 0.0, b))
        tail = _j_tail(float(X), float(sigma), y_star, s_bound)
    value = pref * acc
    scale = float(abs(pref))
    return JResult(wrap(value, prec), float(err) * scale, tail, y_star, len(counts))


def j_integral(t, X, sigma, zt: ZeroTable, C=DEFAULT_C, prec=None, s_hook=None, max_width=J_MAX_PANEL) -> Cx:
    """J(t, X) = i X^(1/2-sigma) int X^(iy) Gamma(w)(log X + psi(w)) S(t+y) dy, w = 1/2 - sigma + iy.

    Integrated over |y| <= min(Y*, t/2), panels split at every zero ordinate.
    ``s_hook`` replaces S(u) by an arbitrary function (testing only).
    """
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        return _j_parts(t, X, sigma, zt, C, p, s_hook, max_width).value


def j_integral_detail(t, X, sigma, zt: ZeroTable, C=DEFAULT_C, prec=None, s_hook=None, max_width=J_MAX_PANEL) -> JResult:
    p = resolve_prec(prec)
    with mp.workdps(p + GUARD_DIGITS):
        return _j_parts(t, X, sigma, zt, C, p, s_hook, max_width)


# ---------------------------------------------------------------------------
# zero-sum decomposition and the main estimate


def _decomp_terms(t, X, sigma, jr: JResult, prec):
    lt = math.log(abs(t))
    return [
        ("X2_term", BUDGET.k2 * X**-2 * lt),
        ("X_half_term", BUDGET.k1 * X ** (0.5 - sigma)),
        ("tails", jr.tail_charge + jr.quad_error + 10.0 ** (-prec)),
    ]


def leading_term(t, X):
    return -mpmath.log(mpmath.mpf(abs(t)) / (2 * mp.pi)) / X


def verify_zero_sum_decomposition(t, X, sigma, zt: ZeroTable, C=DEFAULT_C, prec=None) -> VerificationReport:
    """Zero sum against -log(t/2 pi)/X + J_SIGN * J(t, X)."""
    p = resolve_prec(prec)
    if t < T_MIN:
        raise DomainError(f"t must be >= {T_MIN}, got {t}")
    with mp.workdps(p + GUARD_DIGITS):
        s = mpmath.mpc(sigma, t)
        lhs = _zero_sum(s, X, zt, p)
        jr = _j_parts(t, X, sigma, zt, C, p)
        lead = leading_term(t, X)
        rhs = lead + J_SIGN * jr.value.mpc
        terms = _decomp_terms(t, X, sigma, jr, p)
        params = {"sigma": float(sigma), "t": float(t), "X": float(X), "C": float(C), "prec": p,
                  "K1": BUDGET.k1, "K2": BUDGET.k2, "leading": float(lead), "j_re": float(jr.value.re),
                  "j_im": float(jr.value.im)}  # fmt: skip
        return VerificationReport.build(wrap(lhs, p), wrap(rhs, p), terms, params)


def verify_prop_main(sp: SmoothingParams, zt: ZeroTable, C=DEFAULT_C, prec=None) -> VerificationReport:
    """-zeta'/zeta(s) against the prime sum, the leading term and J; negative t via conjugation."""
    if sp.t < 0:
        mirrored = SmoothingParams(sp.X, sp.sigma, -sp.t, sp.prec if prec is None else prec, sp.delta)
        return verify_prop_main(mirrored, zt, C).conjugate()
    p = resolve_prec(prec if prec is not None else sp.prec)
    _check_strip(sp.sigma, PROP_SIGMA_MIN, sp.t)
    sp.check_validity_range()
    with mp.workdps(p + GUARD_DIGITS):
        s = mpmath.mpc(sp.sigma, sp.t)
        lhs = -_zeta_log_deriv(s, p)
        jr = _j_parts(sp.t, sp.X, sp.sigma, zt, C, p)
        rhs = _smoothed_prime_sum(s, sp.X, p) + leading_term(sp.t, sp.X) + J_SIGN * jr.value.mpc
        terms = _lemma_budget(s, sp.X, sp.sigma, sp.t, p) + _decomp_terms(sp.t, sp.X, sp.sigma, jr, p)
        params = {"sigma": float(sp.sigma), "t": float(sp.t), "X": float(sp.X), "C": float(C), "prec": p,
                  "delta": float(sp.sigma) - 0.5}  # fmt: skip
        return VerificationReport.build(wrap(lhs, p), wrap(rhs, p), terms, params)
