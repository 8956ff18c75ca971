"""Multiprecision explicit-formula toolkit for zeta near the 1-line and S(t)."""

from .config import BUDGET, DEFAULT_PREC, MIN_PREC, BudgetConstants
from .errors import *  # noqa: F401,F403
from .euler_product import (
    PrimeTable,
    build_prime_table,
    euler_asymptotic_check,
    log_euler_identity_check,
    mertens_ratio,
    truncated_euler_product,
)
from .explicit_formula import (
    SmoothingParams,
    VerificationReport,
    i_contour_identity,
    j_integral,
    smoothed_prime_sum,
    verify_lemma_explicit,
    verify_prop_main,
    verify_zero_sum_decomposition,
    zero_sum,
)
from .numerics import Cx, constants, digamma_cx, gamma_cx, gamma_kernel_bound, loggamma_cx
from .scan import ScanConfig, ScanRow, emit_csv, emit_report, scan_one_line, scan_s_and_l, theorem2_envelope
from .zeros import ZeroTable, ingest_zero_table, l_of, locate_zeros, n_of, s_of, write_zero_table
from .zeta_core import EvalPoint, hardy_z, log_zeta, rs_theta, zeta, zeta_and_deriv, zeta_log_deriv

__version__ = "0.1.0"
