"""Adaptive Gauss-Legendre quadrature at the ambient mpmath precision.

Nodes start from numpy's double-precision ``leggauss`` and are polished by
Newton iteration on P_n, so any node count is available at any precision.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp

from .errors import QuadratureError

MAX_DEPTH = 30
MAX_NODES = 256


def _legendre(n, x):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0, p1 = mpmath.mpf(1), x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


@lru_cache(maxsize=256)
def gauss_legendre(n: int, dps: int):
    """Nodes and weights on [-1, 1], accurate to ``dps`` digits."""
    if n < 1:
        raise ValueError("need at least one node")
    x0, _ = np.polynomial.legendre.leggauss(n)
    with mp.workdps(dps + 5):
        eps = mpmath.mpf(10) ** (-dps - 2)
        nodes, weights = [], []
        # symmetric: polish the nonnegative half only
        for xf in x0[n // 2 :]:
            x = mpmath.mpf(float(xf))
            for _ in range(100):
                p, dp = _legendre(n, x)
                dx = p / dp
                x -= dx
                if abs(dx) < eps:
                    break
            else:
                raise QuadratureError(f"Legendre node polish failed for n = {n}")
            _, dp = _legendre(n, x)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        if n % 2:
            xs = [-x for x in reversed(nodes[1:])] + nodes
            ws = list(reversed(weights[1:])) + weights
        else:
            xs = [-x for x in reversed(nodes)] + nodes
            ws = list(reversed(weights)) + weights
    return tuple(xs), tuple(ws)


def gl_panel(f, a, b, n):
    """n-point Gauss-Legendre estimate of the integral of f over [a, b]."""
    xs, ws = gauss_legendre(n, mp.dps)
    half = (b - a) / 2
    mid = (a + b) / 2
    acc = mpmath.mpc(0)
    for x, w in zip(xs, ws):
        acc += w * f(mid + half * x)
    return acc * half


def adaptive_gl(f, a, b, tol, n=None, depth=0):
    """Integral of f over [a, b] with an error estimate.

    Each panel is integrated with n and 2n nodes; if they disagree by more
    than ``tol`` the panel is bisected (tolerance split evenly).  Returns
    ``(value, error_estimate)``.
    """
    a, b = mpmath.mpf(a), mpmath.mpf(b)
    n = max(4, min(n or 12, MAX_NODES // 2))
    lo = gl_panel(f, a, b, n)
    hi = gl_panel(f, a, b, 2 * n)
    err = abs(hi - lo)
    if err <= tol:
        return hi, err
    if depth >= MAX_DEPTH:
        raise QuadratureError(f"adaptive refinement exceeded depth {MAX_DEPTH} on [{a}, {b}]")
    m = (a + b) / 2
    v1, e1 = adaptive_gl(f, a, m, tol / 2, n, depth + 1)
    v2, e2 = adaptive_gl(f, m, b, tol / 2, n, depth + 1)
    return v1 + v2, e1 + e2


def oscillation_nodes(rate, width) -> int:
    """Node budget n >= 8 + 2 rate width / pi for an integrand oscillating at ``rate``."""
    return 8 + math.ceil(2 * float(rate) * float(width) / math.pi)
