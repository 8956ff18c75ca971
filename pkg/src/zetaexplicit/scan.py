"""Scan engine: |zeta(1+it)| maxima, S(t) and L(t) sweeps, the sigma-line envelope, CSV/report output.

Work is cut into fixed blocks of grid indices, so each point is computed
identically whatever the worker count; results are merged in grid order.
At ``prec == 15`` the vectorized double-precision path is used.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
import numpy as np
from mpmath import mp

from .config import DEFAULT_C, GRID_STEP, GUARD_DIGITS, MIN_PREC, resolve_prec
from .errors import ConfigError, IoError
from .fastpath import s_array, zeta_array
from .numerics import constants
from .zeros import ZeroTable, l_of, l_window, s_of
from .zeta_core import _zeta_any

CSV_HEADER = "t,value_re,value_im,value_abs,benchmark,ratio"
BLOCK = 256
REFINE = 4


@dataclass(frozen=True)
class ScanConfig:
    t_lo: float
    t_hi: float
    step: float = GRID_STEP
    adaptive: bool = False
    sigma: float = 1.0
    C: float = DEFAULT_C
    X_policy: tuple = ("theorem1", 1.0)
    prec: int | None = None
    zeros_source: str = "compute"
    out_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prec", resolve_prec(self.prec))
        if self.t_lo > self.t_hi:
            raise ConfigError(f"t_lo = {self.t_lo} exceeds t_hi = {self.t_hi}")
        if self.t_lo < 10:
            raise ConfigError(f"t_lo must be >= 10, got {self.t_lo}")
        if not self.step > 0:
            raise ConfigError(f"step must be positive, got {self.step}")
        if not self.C > 1 / math.pi:
            raise ConfigError(f"C must exceed 1/pi, got {self.C}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        kind = self.X_policy[0] if self.X_policy else None
        if kind not in ("fixed", "theorem1"):
            raise ConfigError(f"unknown X policy {self.X_policy!r}")

    def grid(self) -> np.ndarray:
        n = int(math.floor((self.t_hi - self.t_lo) / self.step + 1e-9))
        return self.t_lo + self.step * np.arange(n + 1)

    def x_for(self, t, L) -> float:
        kind, val = self.X_policy
        if kind == "fixed":
            return float(val)
        return float(val) * max(L * L, math.log(t))


@dataclass(frozen=True)
class ScanRow:
    t: float
    value_re: float
    value_im: float
    value_abs: float
    benchmark: float
    ratio: float
    aux: dict = field(default_factory=dict, compare=False)

    @classmethod
    def make(cls, t, re, im, vabs, bench, aux=None):
        ratio = vabs / bench if bench > 0 else math.nan
        return cls(float(t), float(re), float(im), float(vabs), float(bench), float(ratio), aux or {})

    def csv(self) -> str:
        return ",".join(repr(v) for v in (self.t, self.value_re, self.value_im, self.value_abs, self.benchmark, self.ratio))


# ---------------------------------------------------------------------------
# pointwise kernels (module level so worker processes can pickle them)


def _zeta_block(args):
    sigma, ts, prec = args
    if prec <= MIN_PREC:
        z = zeta_array(sigma, np.asarray(ts))
        return [(float(v.real), float(v.imag)) for v in z]
    out = []
    with mp.workdps(prec + GUARD_DIGITS):
        for t in ts:
            z, _ = _zeta_any(mpmath.mpc(sigma, t))
            out.append((float(z.real), float(z.imag)))
    return out


def _map_blocks(fn, sigma, ts, prec, workers):
    ts = [float(t) for t in ts]
    jobs = [(sigma, ts[i : i + BLOCK], prec) for i in range(0, len(ts), BLOCK)]
    if workers == 1 or len(jobs) == 1:
        parts = [fn(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(fn, jobs))
    return [v for part in parts for v in part]


def _zeta_values(sigma, ts, prec, workers):
    return _map_blocks(_zeta_block, sigma, ts, prec, workers)


def _refine_points(ts, absvals, step):
    extra = []
    for i in range(1, len(ts) - 1):
        if absvals[i] >= absvals[i - 1] and absvals[i] >= absvals[i + 1]:
            extra += [ts[i] + k * step / REFINE for k in range(-REFINE + 1, REFINE) if k]
    return extra


# ---------------------------------------------------------------------------
# one-line scan


def _loglog(t):
    return math.log(math.log(t))


def scan_one_line(cfg: ScanConfig):
    """|zeta(sigma + it)| on the grid against e^gamma log log t; returns (rows, summary)."""
    eg = float(constants(cfg.prec).e_gamma)
    ts = [float(t) for t in cfg.grid()]
    vals = _zeta_values(cfg.sigma, ts, cfg.prec, cfg.workers)
    if cfg.adaptive and len(ts) > 2:
        extra = _refine_points(ts, [math.hypot(*v) for v in vals], cfg.step)
        if extra:
            ev = _zeta_values(cfg.sigma, extra, cfg.prec, cfg.workers)
            merged = sorted(zip(ts + extra, vals + ev), key=lambda p: p[0])
            ts, vals = [p[0] for p in merged], [p[1] for p in merged]
    rows = [ScanRow.make(t, re, im, math.hypot(re, im), eg * _loglog(t)) for t, (re, im) in zip(ts, vals)]
    best = max(rows, key=lambda r: r.value_abs)
    T = cfg.t_hi
    summary = {
        "kind": "one-line",
        "sigma": cfg.sigma,
        "t_lo": cfg.t_lo,
        "t_hi": cfg.t_hi,
        "step": cfg.step,
        "prec": cfg.prec,
        "rows": len(rows),
        "max_abs": best.value_abs,
        "argmax_t": best.t,
        "benchmark_T": eg * _loglog(T),
        "ratio_to_egamma_loglogT": best.value_abs / (eg * _loglog(T)),
        "ratio_to_littlewood": best.value_abs / (2 * eg * _loglog(T)),
    }
    return rows, summary


# ---------------------------------------------------------------------------
# S and L


def _s_l_float(ts, zt: ZeroTable, C):
    """S(t) and L(t) in double precision by candidate enumeration."""
    g = zt.floats
    s = s_array(ts, g)
    s_at = s_array(g, g)
    los = np.array([l_window(t, C)[0] for t in ts])
    his = np.array([l_window(t, C)[1] for t in ts])
    s_lo, s_hi = s_array(los, g), s_array(his, g)
    i0 = np.searchsorted(g, los, side="right")
    i1 = np.searchsorted(g, his, side="right")
    L = np.maximum(np.abs(s_lo), np.abs(s_hi))
    for k in range(len(ts)):
        if i1[k] > i0[k]:
            seg = s_at[i0[k] : i1[k]]
            L[k] = max(L[k], float(np.max(np.abs(seg))), float(np.max(np.abs(seg - 1))))
    return s, L


def _s_l(ts, zt, C, prec):
    if prec <= MIN_PREC:
        return _s_l_float(np.asarray(ts), zt, C)
    s = np.array([float(s_of(t, zt, prec)) for t in ts])
    L = np.array([l_of(t, C, zt, prec).l_value for t in ts])
    return s, L


def scan_s_and_l(cfg: ScanConfig, zt: ZeroTable):
    ts = [float(t) for t in cfg.grid()]
    s, L = _s_l(ts, zt, cfg.C, cfg.prec)
    rows = []
    fgh_max = 0.0
    for t, sv, lv in zip(ts, s, L):
        fgh = math.sqrt(math.log(t) * _loglog(t)) / (math.pi * math.sqrt(2))
        fgh_max = max(fgh_max, float(abs(sv)) / fgh)
        rows.append(ScanRow.make(t, sv, lv, abs(sv), math.sqrt(math.log(t)), {"L": float(lv), "fgh": fgh}))
    best = max(rows, key=lambda r: r.value_abs)
    max_l = max(r.value_im for r in rows)
    T = cfg.t_hi
    summary = {
        "kind": "s-and-l",
        "t_lo": cfg.t_lo,
        "t_hi": cfg.t_hi,
        "step": cfg.step,
        "C": cfg.C,
        "prec": cfg.prec,
        "rows": len(rows),
        "max_abs_S": best.value_abs,
        "argmax_t": best.t,
        "max_L": max_l,
        "exponent_estimate": math.log(best.value_abs) / math.log(_loglog(T)) if best.value_abs > 0 else math.nan,
        "max_ratio_to_fgh": fgh_max,
        "reporting_only": True,
    }
    return rows, summary


# ---------------------------------------------------------------------------
# sigma-line envelope


def envelope_benchmark(t, L, sigma):
    return max(L ** (2 - 2 * sigma), math.log(t) ** (1 - sigma)) * _loglog(t) ** (1 - 2 * sigma)


def theorem2_envelope(cfg: ScanConfig, zt: ZeroTable):
    """log|zeta(sigma + it)| against max(L^(2-2 sigma), (log t)^(1-sigma)) (log log t)^(1-2 sigma)."""
    if not 0.5 < cfg.sigma < 1:
        raise ConfigError(f"envelope scan needs 1/2 < sigma < 1, got {cfg.sigma} (use scan_one_line at sigma = 1)")
    ts = [float(t) for t in cfg.grid()]
    vals = _zeta_values(cfg.sigma, ts, cfg.prec, cfg.workers)
    _, L = _s_l(ts, zt, cfg.C, cfg.prec)
    rows = []
    c_obs = -math.inf
    for t, (re, im), lv in zip(ts, vals, L):
        logabs = math.log(math.hypot(re, im))
        bench = envelope_benchmark(t, float(lv), cfg.sigma)
        X = max(float(lv) ** 2, math.log(t)) * _loglog(t) ** 2
        c_obs = max(c_obs, logabs / bench)
        rows.append(ScanRow.make(t, logabs, float(lv), abs(logabs), bench, {"L": float(lv), "X": X}))
    best = max(rows, key=lambda r: r.ratio)
    summary = {
        "kind": "sigma-envelope",
        "sigma": cfg.sigma,
        "t_lo": cfg.t_lo,
        "t_hi": cfg.t_hi,
        "step": cfg.step,
        "C": cfg.C,
        "prec": cfg.prec,
        "rows": len(rows),
        "max_ratio": best.ratio,
        "argmax_t": best.t,
        "c_observed": c_obs,
    }
    return rows, summary


# ---------------------------------------------------------------------------
# output


def _write(path, text):
    try:
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def csv_text(rows) -> str:
    return "".join([CSV_HEADER + "\n"] + [r.csv() + "\n" for r in rows])


def report_text(summary: dict) -> str:
    return "".join(f"{k}: {_fmt(v)}\n" for k, v in summary.items())


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(rows, path) -> None:
    _write(path, csv_text(rows))


def emit_report(summary: dict, path) -> None:
    _write(path, report_text(summary))
