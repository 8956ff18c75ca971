"""Run-wide defaults and the explicit constants that stand in for O(.) terms."""

import os
from dataclasses import dataclass

MIN_PREC = 15
DEFAULT_PREC = 30
# decimal digits carried beyond the requested precision in every public routine
GUARD_DIGITS = 10


def default_prec() -> int:
    """Working precision in decimal digits; ``ZETA_PREC`` overrides the default."""
    raw = os.environ.get("ZETA_PREC")
    if raw is None or raw.strip() == "":
        return DEFAULT_PREC
    prec = int(raw)
    if prec < MIN_PREC:
        raise ValueError(f"ZETA_PREC must be >= {MIN_PREC}, got {prec}")
    return prec


def resolve_prec(prec) -> int:
    if prec is None:
        return default_prec()
    prec = int(prec)
    if prec < MIN_PREC:
        raise ValueError(f"prec must be >= {MIN_PREC}, got {prec}")
    return prec


@dataclass(frozen=True)
class BudgetConstants:
    """Concrete constants for every implied constant in the error budgets.

    Fixed at bring-up; each report records the values it was checked with.
    """

    k_int: float = 10.0  # kappa-line integral
    kappa_offset: float = -1.5  # kappa = sigma + kappa_offset, inside (sigma - 2, sigma - 1)
    k1: float = 20.0  # X^(1/2 - sigma) term
    k2: float = 20.0  # X^-2 log t term
    k3: float = 3.0  # 1/log X in the Euler-log identity
    gamma_kernel: float = 3.0  # majorant K * |y|^-sigma * exp(-pi |y| / 2)

    def __post_init__(self):
        if not -2.0 < self.kappa_offset < -1.0:
            raise ValueError("kappa_offset must lie strictly between -2 and -1")


BUDGET = BudgetConstants()

DEFAULT_C = 0.5
GRID_STEP = 0.1
ZERO_GRID_STEP = 0.05
