import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from zetaexplicit.errors import DomainError, GammaOverflowError, PoleError
from zetaexplicit.numerics import (
    Cx,
    constants,
    digamma_cx,
    gamma_cx,
    gamma_kernel_bound,
    loggamma_cx,
)

PREC = 30
TOL = mpmath.mpf(10) ** (-PREC + 5)


def close(a, b, tol=TOL, rel=True):
    a, b = mpmath.mpc(complex(a) if not isinstance(a, (mpmath.mpc, mpmath.mpf)) else a), mpmath.mpc(b)
    with mp.workdps(PREC + 20):
        d = abs(a - b)
        return d <= tol * (abs(b) if rel else 1)


def _hi(fn, z, prec=2 * PREC):
    """Re-evaluate at doubled precision."""
    return fn(z, prec)


# --- Cx ---------------------------------------------------------------------


def test_cx_keeps_its_precision_outside_workdps():
    third = Cx.of(mpmath.mpf(1), 30) / 3
    with mp.workdps(40):
        assert abs(third.mpc * 3 - 1) < mpmath.mpf(10) ** -35


def test_cx_rejects_low_prec():
    with pytest.raises(DomainError):
        Cx(mpmath.mpf(1), mpmath.mpf(0), 10)


def test_cx_rejects_nonfinite():
    with pytest.raises(GammaOverflowError):
        Cx(mpmath.inf, mpmath.mpf(0), 30)


def test_cx_arithmetic_takes_max_prec():
    a = Cx.of(1.5, 20)
    b = Cx.of("2.25", 40)
    assert (a + b).prec == 40
    assert (a * b).prec == 40
    assert complex(a * b) == pytest.approx(3.375)
    assert complex(1 / Cx.of(2, 30)) == 0.5
    assert complex(-a) == -1.5


def test_constants():
    c = constants(PREC)
    with mp.workdps(PREC + 10):
        assert abs(c.e_gamma - mpmath.exp(c.euler_gamma)) < mpmath.mpf(10) ** (1 - PREC)
        assert abs(c.euler_gamma - mpmath.mpf("0.57721566490153286060651209008240243104")) < 1e-35


# --- Gamma --------------------------------------------------------------------


def test_gamma_half_is_sqrt_pi():
    with mp.workdps(PREC + 10):
        assert close(gamma_cx(0.5, PREC).mpc, mpmath.sqrt(mp.pi))


def test_gamma_integer_factorial():
    assert close(gamma_cx(5, PREC).mpc, 24)


def test_gamma_near_first_zero_doubled_precision():
    z = mpmath.mpc("-0.5", "14.1347")
    assert close(gamma_cx(z, PREC).mpc, _hi(gamma_cx, z).mpc)


def test_gamma_agrees_with_mpmath_far_up():
    # independent implementation (mpmath's own gamma)
    z = mpmath.mpc("-0.25", "3000.5")
    with mp.workdps(PREC + 10):
        ref = mpmath.gamma(z)
    assert close(gamma_cx(z, PREC).mpc, ref, mpmath.mpf(10) ** (3 - PREC))


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma_cx(z, PREC)
    with pytest.raises(PoleError):
        digamma_cx(z, PREC)


def test_gamma_overflow_is_typed():
    with pytest.raises(OverflowError):
        gamma_cx(mpmath.mpf("1e8"), PREC)


def test_loggamma_large_imaginary():
    z = mpmath.mpc("0.25", "1e6")
    with mp.workdps(PREC + 10):
        ref = mpmath.loggamma(z)
    assert abs(loggamma_cx(z, PREC).mpc - ref) < mpmath.mpf(10) ** (8 - PREC) * abs(ref)


# --- digamma ----------------------------------------------------------------


def test_digamma_one_and_two():
    g = constants(PREC).euler_gamma
    assert close(digamma_cx(1, PREC).mpc, -g, rel=False)
    assert close(digamma_cx(2, PREC).mpc, 1 - g, rel=False)


def test_digamma_doubled_precision():
    z = mpmath.mpc("-0.25", 50)
    assert close(digamma_cx(z, PREC).mpc, _hi(digamma_cx, z).mpc, rel=False)


def test_digamma_is_log_derivative():
    z = mpmath.mpc("0.3", "7.5")
    h = mpmath.mpf(10) ** (-PREC / 3)
    with mp.workdps(PREC + 10):
        fd = (loggamma_cx(z + h, PREC).mpc - loggamma_cx(z - h, PREC).mpc) / (2 * h)
        assert abs(fd - digamma_cx(z, PREC).mpc) < 10 * h * h


# --- properties -----------------------------------------------------------------

strip = st.tuples(
    st.floats(-1, 2, allow_nan=False).filter(lambda x: abs(x - round(x)) > 1e-3),
    st.floats(-100, 100, allow_nan=False),
)


@given(strip)
def test_gamma_recurrence(p):
    z = mpmath.mpc(*p)
    with mp.workdps(PREC + 10):
        # z + 1 must not round at the ambient 53 bits
        g1 = gamma_cx(z + 1, PREC).mpc
        assert abs(g1 - z * gamma_cx(z, PREC).mpc) <= mpmath.mpf(10) ** (4 - PREC) * abs(g1)


@given(strip)
def test_gamma_reflection(p):
    z = mpmath.mpc(*p)
    with mp.workdps(PREC + 10):
        v = gamma_cx(z, PREC).mpc * gamma_cx(1 - z, PREC).mpc * mpmath.sinpi(z) / mp.pi
        assert abs(v - 1) <= mpmath.mpf(10) ** (4 - PREC)


@given(strip)
def test_monotone_precision(p):
    z = mpmath.mpc(*p)
    a, b = gamma_cx(z, PREC).mpc, gamma_cx(z, PREC + 10).mpc
    with mp.workdps(PREC + 20):
        assert abs(a - b) < mpmath.mpf(10) ** (2 - PREC) * abs(b)


# --- kernel majorant ------------------------------------------------------------


def test_kernel_bound_formula():
    assert gamma_kernel_bound(1, 10) == pytest.approx(3 * 10**-1 * math.exp(-5 * math.pi), rel=1e-14)


def test_kernel_bound_ratio():
    r = gamma_kernel_bound(1, 40) / gamma_kernel_bound(1, 20)
    assert r == pytest.approx(0.5 * math.exp(-10 * math.pi), rel=1e-12)


def test_kernel_bound_rejects_small_y():
    with pytest.raises(DomainError):
        gamma_kernel_bound(1, 0.5)


@given(st.floats(0.5001, 1.125), st.floats(1, 60))
def test_kernel_bound_dominates(sigma, y):
    g = abs(gamma_cx(mpmath.mpc(0.5 - sigma, y), PREC).mpc)
    assert gamma_kernel_bound(sigma, y) >= float(g)


def test_kernel_bound_sigma_075_y20():
    assert gamma_kernel_bound(0.75, 20) >= float(abs(gamma_cx(mpmath.mpc(-0.25, 20), PREC).mpc))
