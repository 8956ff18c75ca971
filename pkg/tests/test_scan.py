import math

import mpmath
import pytest
from mpmath import mp

from zetaexplicit.errors import ConfigError, IoError
from zetaexplicit.numerics import constants
from zetaexplicit.scan import (
    CSV_HEADER,
    ScanConfig,
    ScanRow,
    csv_text,
    emit_csv,
    emit_report,
    envelope_benchmark,
    report_text,
    scan_one_line,
    scan_s_and_l,
    theorem2_envelope,
)
from zetaexplicit.zeros import l_of, s_of
from zetaexplicit.zeta_core import zeta

EG = 1.7810724179901979


# --- config -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "kw",
    [
        dict(t_lo=20, t_hi=10),
        dict(t_lo=5, t_hi=10),
        dict(t_lo=10, t_hi=20, step=0),
        dict(t_lo=10, t_hi=20, C=0.3),
        dict(t_lo=10, t_hi=20, X_policy=("bogus", 1)),
        dict(t_lo=10, t_hi=20, workers=0),
    ],
)
def test_config_rejects(kw):
    with pytest.raises(ConfigError):
        ScanConfig(**kw)


def test_grid_endpoints():
    g = ScanConfig(10, 11, 0.1, prec=15).grid()
    assert len(g) == 11 and g[0] == 10 and g[-1] == pytest.approx(11)


def test_x_policy():
    assert ScanConfig(10, 20, X_policy=("fixed", 500)).x_for(100, 3.0) == 500
    assert ScanConfig(10, 20, X_policy=("theorem1", 2.0)).x_for(100, 3.0) == 18.0
    assert ScanConfig(10, 20).x_for(1e5, 0.5) == pytest.approx(math.log(1e5))


# --- one-line scan ----------------------------------------------------------------


def test_single_point():
    rows, summary = scan_one_line(ScanConfig(100, 100, prec=30))
    assert len(rows) == 1
    z = abs(complex(zeta(mpmath.mpc(1, 100), 30)))
    assert summary["max_abs"] == pytest.approx(z, rel=1e-14)
    assert summary["argmax_t"] == 100


def test_row_ratio_and_benchmark():
    rows, _ = scan_one_line(ScanConfig(50, 51, 0.5, prec=15))
    for r in rows:
        assert r.benchmark == pytest.approx(EG * math.log(math.log(r.t)), rel=1e-14)
        assert r.ratio == pytest.approx(r.value_abs / r.benchmark, rel=1e-15)
        assert r.benchmark > 0


def test_float_path_matches_mp():
    r15, _ = scan_one_line(ScanConfig(200, 201, 0.25, prec=15))
    r30, _ = scan_one_line(ScanConfig(200, 201, 0.25, prec=30))
    for a, b in zip(r15, r30):
        assert a.value_abs == pytest.approx(b.value_abs, rel=1e-10)


def test_running_max_is_max_of_rows():
    rows, summary = scan_one_line(ScanConfig(10, 300, 0.1, prec=15))
    assert summary["max_abs"] == max(r.value_abs for r in rows)
    assert summary["ratio_to_littlewood"] == pytest.approx(summary["ratio_to_egamma_loglogT"] / 2)


def test_one_line_bracket_1e4():
    _, summary = scan_one_line(ScanConfig(10, 1e4, 0.1, prec=15))
    assert 0.3 < summary["ratio_to_egamma_loglogT"] < 2.5


def test_adaptive_adds_points():
    rows, _ = scan_one_line(ScanConfig(10, 60, 0.1, adaptive=True, prec=15))
    plain, _ = scan_one_line(ScanConfig(10, 60, 0.1, prec=15))
    assert len(rows) > len(plain)
    ts = [r.t for r in rows]
    assert ts == sorted(ts)


def test_determinism_across_workers():
    a, _ = scan_one_line(ScanConfig(10, 200, 0.1, prec=15, workers=1))
    b, _ = scan_one_line(ScanConfig(10, 200, 0.1, prec=15, workers=3))
    assert csv_text(a) == csv_text(b)


def test_determinism_mp_path():
    a, _ = scan_one_line(ScanConfig(500, 520, 0.1, prec=30, workers=1))
    b, _ = scan_one_line(ScanConfig(500, 520, 0.1, prec=30, workers=2))
    assert csv_text(a) == csv_text(b)


# --- S and L ----------------------------------------------------------------------


def test_s_and_l_to_1e4(ref_table):
    rows, summary = scan_s_and_l(ScanConfig(50, 9990, 0.1, prec=15), ref_table)
    assert summary["max_abs_S"] < 1.5
    assert summary["reporting_only"] is True
    assert summary["max_L"] >= summary["max_abs_S"]
    assert all(r.value_im >= r.value_abs for r in rows)
    assert summary["exponent_estimate"] == pytest.approx(math.log(summary["max_abs_S"]) / math.log(math.log(math.log(9990))))


def test_s_and_l_float_matches_mp(ref_table):
    a, _ = scan_s_and_l(ScanConfig(100, 110, 0.5, prec=15), ref_table)
    b, _ = scan_s_and_l(ScanConfig(100, 110, 0.5, prec=30), ref_table)
    for x, y in zip(a, b):
        assert x.value_re == pytest.approx(y.value_re, abs=1e-10)
        assert x.value_im == pytest.approx(y.value_im, abs=1e-10)


def test_s_and_l_zero_free_window(ref_table):
    rows, _ = scan_s_and_l(ScanConfig(17.5, 17.5, C=0.4, prec=30), ref_table)
    lo, hi = 17.5 - 0.4 * math.log(math.log(17.5)), 17.5 + 0.4 * math.log(math.log(17.5))
    ends = max(abs(float(s_of(lo, ref_table, 30))), abs(float(s_of(hi, ref_table, 30))))
    assert rows[0].value_im == pytest.approx(ends, abs=1e-14)


# --- sigma envelope -------------------------------------------------------------------


def test_envelope_rejects_sigma_one(ref_table):
    with pytest.raises(ConfigError):
        theorem2_envelope(ScanConfig(50, 60, sigma=1.0, prec=15), ref_table)


def test_envelope_075(ref_table):
    rows, summary = theorem2_envelope(ScanConfig(50, 9990, 0.1, sigma=0.75, prec=15), ref_table)
    assert all(math.isfinite(r.ratio) and r.ratio > 0 for r in rows)
    assert summary["max_ratio"] == max(r.ratio for r in rows)
    assert math.isfinite(summary["c_observed"])


def test_envelope_benchmark_by_hand(ref_table):
    rows, _ = theorem2_envelope(ScanConfig(100, 100, sigma=0.75, prec=30), ref_table)
    L = l_of(100, 0.5, ref_table, 30).l_value
    ll = math.log(math.log(100))
    bench = max(L**0.5, math.log(100) ** 0.25) * ll**-0.5
    assert rows[0].benchmark == pytest.approx(bench, abs=1e-8)
    assert envelope_benchmark(100, L, 0.75) == pytest.approx(bench, rel=1e-15)
    with mp.workdps(40):
        logabs = float(mpmath.log(abs(zeta(mpmath.mpc(0.75, 100), 30).mpc)))
    assert rows[0].value_re == pytest.approx(logabs, abs=1e-12)
    assert rows[0].aux["X"] == pytest.approx(max(L * L, math.log(100)) * ll**2)


# --- output -----------------------------------------------------------------------


def test_empty_csv(tmp_path):
    p = tmp_path / "a.csv"
    emit_csv([], p)
    assert p.read_text() == CSV_HEADER + "\n"


def test_one_row_csv(tmp_path):
    p = tmp_path / "a.csv"
    emit_csv([ScanRow.make(10.0, 1.0, 2.0, 3.0, 1.5)], p)
    lines = p.read_text().splitlines()
    assert lines == [CSV_HEADER, "10.0,1.0,2.0,3.0,1.5,2.0"]


def test_report_format(tmp_path):
    p = tmp_path / "r.txt"
    emit_report({"a": 1, "b": 0.5, "c": True}, p)
    assert p.read_text() == "a: 1\nb: 0.5\nc: true\n"
    assert report_text({"x": 2.0}) == "x: 2.0\n"


def test_same_cfg_identical_files(tmp_path):
    cfg = ScanConfig(10, 50, 0.1, prec=15)
    for name in ("a", "b"):
        rows, _ = scan_one_line(cfg)
        emit_csv(rows, tmp_path / f"{name}.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_io_error(tmp_path):
    with pytest.raises(IoError):
        emit_csv([], tmp_path / "missing" / "x.csv")


def test_egamma_constant():
    assert float(constants(30).e_gamma) == pytest.approx(EG, rel=1e-15)
