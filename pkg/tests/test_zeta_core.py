import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp
from scipy.optimize import brentq

from oracles import eta_oracle_rows, von_mangoldt, zeta_borwein
from zetaexplicit.errors import DomainError, NearZeroError, PathThroughZeroError, PoleError
from zetaexplicit.zeta_core import (
    EvalPoint,
    hardy_z,
    log_zeta,
    rs_theta,
    zeta,
    zeta_and_deriv,
    zeta_log_deriv,
)

PREC = 30


def first_zero():
    with mp.workdps(PREC + 10):
        return mpmath.zetazero(1)


def mpabs(x):
    with mp.workdps(PREC + 10):
        return abs(x)


def rel_err(a, b):
    with mp.workdps(PREC + 20):
        a, b = mpmath.mpc(a), mpmath.mpc(b)
        return abs(a - b) / abs(b)


# --- zeta ---------------------------------------------------------------------


def test_zeta_two():
    with mp.workdps(PREC + 10):
        assert rel_err(zeta(2, PREC).mpc, mp.pi**2 / 6) < mpmath.mpf(10) ** (5 - PREC)


def test_zeta_zero():
    assert zeta(0, PREC).mpc == mpmath.mpf(-0.5)


def test_zeta_pole():
    with pytest.raises(PoleError):
        zeta(1, PREC)


def test_zeta_accepts_evalpoint():
    p = EvalPoint(2.0, 0.0, PREC)
    assert complex(zeta(p)) == pytest.approx(math.pi**2 / 6, rel=1e-15)


def test_evalpoint_rejects_negative_t():
    with pytest.raises(DomainError):
        EvalPoint(0.5, -1.0, PREC)


def test_zeta_one_plus_100i_against_eta_series():
    s = mpmath.mpc(1, 100)
    ref = zeta_borwein(s, PREC + 10)
    assert rel_err(zeta(s, PREC).mpc, ref) < mpmath.mpf(10) ** (6 - PREC)


@pytest.mark.parametrize("s", [mpmath.mpc("0.5", "30.25"), mpmath.mpc("-0.4", "3"), mpmath.mpc("1.125", "250")])
def test_zeta_live_eta_small_heights(s):
    assert rel_err(zeta(s, PREC).mpc, zeta_borwein(s, PREC + 10)) < mpmath.mpf(10) ** (6 - PREC)


def test_zeta_eta_oracle_grid():
    rows = eta_oracle_rows()
    assert len(rows) == 50
    worst = 0
    for sigma, t, re, im in rows:
        with mp.workdps(60):
            s = mpmath.mpc(mpmath.mpf(sigma), mpmath.mpf(t))
            ref = mpmath.mpc(mpmath.mpf(re), mpmath.mpf(im))
        worst = max(worst, rel_err(zeta(s, PREC).mpc, ref))
    assert worst < mpmath.mpf(10) ** (6 - PREC)


def test_zeta_doubled_precision_spot():
    s = mpmath.mpc("0.75", "5000.5")
    assert rel_err(zeta(s, PREC).mpc, zeta(s, 2 * PREC).mpc) < mpmath.mpf(10) ** (5 - PREC)


@settings(max_examples=100)
@given(st.floats(0, 2), st.floats(1, 1e4))
def test_conjugate_symmetry(sigma, t):
    a = zeta(mpmath.mpc(sigma, -t), PREC).mpc
    b = zeta(mpmath.mpc(sigma, t), PREC).mpc
    with mp.workdps(PREC + 10):
        assert a == mpmath.conj(b)


# --- zeta'/zeta ------------------------------------------------------------------


def test_log_deriv_sigma_ten():
    v = complex(zeta_log_deriv(10, PREC))
    approx = -(math.log(2) / 2**10 + math.log(3) / 3**10 + math.log(2) / 4**10)
    assert abs(v - approx) < 1e-4


def test_log_deriv_two_against_dirichlet_series():
    lam = von_mangoldt(10**6)
    n = np.arange(lam.size, dtype=float)
    n[0] = 1
    # tail sum_{n > N} Lambda(n)/n^2 ~ 1/N by psi(x) ~ x; it is as large as the tolerance, so add it
    direct = -math.fsum(lam[2:] / n[2:] ** 2) - 1 / (lam.size - 1)
    assert abs(complex(zeta_log_deriv(2, PREC)).real - direct) < 1e-6


def test_log_deriv_against_finite_difference():
    s = mpmath.mpc(1, 50)
    h = mpmath.mpf("1e-8")
    with mp.workdps(PREC + 10):
        fd = (log_zeta(s + h, PREC).mpc - log_zeta(s - h, PREC).mpc) / (2 * h)
        assert abs(fd - zeta_log_deriv(s, PREC).mpc) < 1e-6


def test_log_deriv_near_zero_raises():
    with pytest.raises(NearZeroError):
        zeta_log_deriv(first_zero(), PREC)


def test_log_deriv_matches_independent_derivative():
    s = mpmath.mpc("0.6", "321.5")
    z, d = zeta_and_deriv(s, PREC)
    with mp.workdps(PREC + 10):
        ref = mpmath.zeta(s, derivative=1)
        assert abs(d.mpc - ref) < mpmath.mpf(10) ** (6 - PREC) * abs(ref)


def test_sigma_derivative_of_log_abs():
    s = mpmath.mpc("0.8", "77.7")
    h = mpmath.mpf("1e-6")
    with mp.workdps(PREC + 10):
        fd = (mpmath.log(abs(zeta(s + h, PREC).mpc)) - mpmath.log(abs(zeta(s - h, PREC).mpc))) / (2 * h)
        re = zeta_log_deriv(s, PREC).mpc.real
        assert abs(fd - re) / abs(re) < 1e-4


# --- log zeta -------------------------------------------------------------------


def test_log_zeta_two():
    with mp.workdps(PREC + 10):
        assert abs(log_zeta(2, PREC).mpc - mpmath.log(mp.pi**2 / 6)) < mpmath.mpf(10) ** (5 - PREC)


def test_log_zeta_anchor_against_dirichlet_series():
    # sum_{n <= N} Lambda(n) n^-s / log n; partial summation bounds the remainder by
    # roughly 2 N^(-1/8) / (|s - 1| log N), about 4e-3 at N = 10^5
    N = 10**5
    lam = von_mangoldt(N)
    idx = np.nonzero(lam)[0]
    s = complex(1.125, 10)
    direct = sum(lam[n] / math.log(n) * n ** (-s) for n in idx)
    bound = 2 * N ** -0.125 / (abs(s - 1) * math.log(N))
    assert abs(complex(log_zeta(mpmath.mpc(1.125, 10), PREC)) - direct) < bound


@given(st.floats(0.6, 1.2), st.floats(10, 1e4))
@settings(max_examples=100)
def test_exp_log_zeta_roundtrip(sigma, t):
    s = mpmath.mpc(sigma, t)
    try:
        lz = log_zeta(s, PREC)
    except PathThroughZeroError:
        return
    with mp.workdps(PREC + 10):
        z = zeta(s, PREC).mpc
        assert abs(mpmath.exp(lz.mpc) - z) <= mpmath.mpf(10) ** (7 - PREC) * abs(z)


def test_log_zeta_imaginary_part_tracks_s(ref_table):
    # Im log zeta(1/2 + eps + it) -> pi S(t)
    from zetaexplicit.zeros import s_of

    t = 100.0
    v = log_zeta(mpmath.mpc("0.500001", t), PREC).mpc.imag
    assert abs(v / math.pi - float(s_of(t, ref_table, PREC))) < 1e-3


def test_log_zeta_path_through_zero():
    with pytest.raises(PathThroughZeroError):
        log_zeta(first_zero(), PREC)


# --- theta and Z ------------------------------------------------------------------


def test_theta_leading_terms_at_100():
    lead = 50 * math.log(100 / (2 * math.pi)) - 50 - math.pi / 8 + 1 / 4800
    assert abs(float(rs_theta(100, PREC)) - lead) < 1e-6


@pytest.mark.parametrize("t", ["12", "15", "20", "37.5"])
def test_theta_matches_loggamma_definition(t):
    t = mpmath.mpf(t)
    with mp.workdps(PREC + 10):
        ref = mpmath.loggamma(mpmath.mpc(0.25, t / 2)).imag - t / 2 * mpmath.log(mp.pi)
        assert abs(rs_theta(t, PREC) - ref) < mpmath.mpf(10) ** (5 - PREC)


def test_theta_domain():
    with pytest.raises(DomainError):
        rs_theta(0.5, PREC)


def test_gram_point():
    g0 = brentq(lambda t: float(rs_theta(t, PREC)), 10.5, 25, xtol=1e-12)
    assert g0 == pytest.approx(17.8456, abs=1e-4)
    z = hardy_z(g0, PREC)
    with mp.workdps(PREC):
        re = zeta(mpmath.mpc(0.5, g0), PREC).mpc.real
    assert abs(float(z) - float(re)) < 1e-9


def test_theta_doubling_identity():
    t = 1000
    lhs = float(rs_theta(2 * t, PREC) - 2 * rs_theta(t, PREC))
    rhs = t * math.log(2) + math.pi / 8 - 1 / (32 * t)
    assert abs(lhs - rhs) < 1e-6


def test_hardy_z_first_zero():
    assert abs(float(hardy_z("14.1347251417", PREC))) < 1e-6


def test_hardy_z_sign_change():
    assert (hardy_z(14, PREC) > 0) != (hardy_z(15, PREC) > 0)


def test_hardy_z_imaginary_check_near_first_100_zeros(ref_table):
    for g in ref_table.ordinates[:100]:
        for eps in (-0.01, 0.01):
            hardy_z(g + eps, PREC)  # PrecisionError on failure
