"""Command-line driver: ``zetaexplicit <noun> <verb> [flags]``.

Exit status is 0 when every verification report passes (or the command only
reports), 1 when a report fails and 2 on a usage or domain error.
"""

from __future__ import annotations

import argparse
import math
import sys

import mpmath

from .config import DEFAULT_C, GRID_STEP, ZERO_GRID_STEP, resolve_prec
from .errors import ConfigError, ZetaError

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _kv(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def _load_zeros(args, height):
    from .zeros import ingest_zero_table, locate_zeros

    if args.zeros and args.zeros != "compute":
        return ingest_zero_table(args.zeros)
    return locate_zeros(1.0, max(height, 20.0), args.prec)


def _ef_height(t, prec):
    from .explicit_formula import zero_sum_halfwidth

    # the count term in the truncation width is tiny; 10^6 zeros is generous
    return max(1.5 * abs(t), abs(t) + zero_sum_halfwidth(prec, 10**6)) + 1


def _report(rep, out):
    out.write(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# handlers


def cmd_zeta_eval(args, out):
    from .zeta_core import log_zeta, zeta_and_deriv

    s = mpmath.mpc(args.sigma, args.t)
    z, d = zeta_and_deriv(s, args.prec)
    pairs = [("sigma", args.sigma), ("t", args.t), ("prec", args.prec), ("zeta", z), ("zeta_prime", d)]
    if args.t != 0 or args.sigma > 1:
        try:
            pairs.append(("log_zeta", log_zeta(s, args.prec)))
        except ZetaError as exc:
            pairs.append(("log_zeta", f"unavailable ({exc})"))
    out.write(_kv(pairs))
    return EXIT_OK


def cmd_zeros_locate(args, out):
    from .zeros import locate_zeros, write_zero_table

    zt = locate_zeros(args.t_lo, args.t_hi, args.prec, args.step or ZERO_GRID_STEP)
    if args.out:
        write_zero_table(zt, args.out, args.prec)
    pairs = [("count", len(zt)), ("height", zt.height), ("claimed_complete", str(zt.claimed_complete).lower())]
    if len(zt):
        pairs += [("first", mpmath.nstr(zt.ordinates[0], args.prec)), ("last", mpmath.nstr(zt.ordinates[-1], args.prec))]
    out.write(_kv(pairs))
    return EXIT_OK


def cmd_zeros_ingest(args, out):
    from .zeros import ingest_zero_table

    if not args.zeros or args.zeros == "compute":
        raise ConfigError("zeros ingest needs --zeros PATH")
    zt = ingest_zero_table(args.zeros)
    out.write(_kv([("count", len(zt)), ("height", zt.height), ("claimed_complete", str(zt.claimed_complete).lower())]))
    return EXIT_OK if zt.claimed_complete else EXIT_FAIL


def cmd_st_eval(args, out):
    from .zeros import l_of, l_window, n_of, s_of

    C = args.C
    zt = _load_zeros(args, l_window(args.t, C)[1] + 1)
    rec = l_of(args.t, C, zt, args.prec)
    out.write(
        _kv(
            [
                ("t", args.t),
                ("N", n_of(args.t, zt)),
                ("S", mpmath.nstr(s_of(args.t, zt, args.prec), args.prec)),
                ("C", C),
                ("window", f"[{rec.window_lo!r}, {rec.window_hi!r}]"),
                ("L", repr(rec.l_value)),
                ("argmax_u", repr(rec.argmax_u)),
            ]
        )
    )
    return EXIT_OK


def _scan_cfg(args, sigma):
    from .scan import ScanConfig

    return ScanConfig(
        t_lo=args.t_lo,
        t_hi=args.t_hi,
        step=args.step or GRID_STEP,
        adaptive=args.adaptive,
        sigma=sigma,
        C=args.C,
        prec=args.prec,
        zeros_source=args.zeros or "compute",
        out_path=args.out,
        workers=args.workers,
    )


def _emit(rows, summary, args, out):
    from .scan import emit_csv, emit_report, report_text

    if args.out:
        emit_csv(rows, args.out)
    if args.report:
        emit_report(summary, args.report)
    out.write(report_text(summary))
    return EXIT_OK


def cmd_st_scan(args, out):
    from .scan import scan_s_and_l
    from .zeros import l_window

    cfg = _scan_cfg(args, 1.0)
    zt = _load_zeros(args, l_window(cfg.t_hi, cfg.C)[1] + 1)
    return _emit(*scan_s_and_l(cfg, zt), args, out)


def cmd_scan_one_line(args, out):
    from .scan import scan_one_line

    return _emit(*scan_one_line(_scan_cfg(args, args.sigma if args.sigma is not None else 1.0)), args, out)


def cmd_scan_sigma(args, out):
    from .scan import theorem2_envelope
    from .zeros import l_window

    cfg = _scan_cfg(args, args.sigma if args.sigma is not None else 0.75)
    zt = _load_zeros(args, l_window(cfg.t_hi, cfg.C)[1] + 1)
    return _emit(*theorem2_envelope(cfg, zt), args, out)


def _sp(args):
    from .explicit_formula import SmoothingParams

    return SmoothingParams(args.X, args.sigma, args.t, args.prec)


def cmd_ef_lemma(args, out):
    from .explicit_formula import verify_lemma_explicit

    zt = _load_zeros(args, _ef_height(args.t, args.prec))
    return _report(verify_lemma_explicit(_sp(args), zt), out)


def cmd_ef_prop(args, out):
    from .explicit_formula import verify_prop_main

    zt = _load_zeros(args, _ef_height(args.t, args.prec))
    return _report(verify_prop_main(_sp(args), zt, args.C, args.prec), out)


def cmd_ef_decomp(args, out):
    from .explicit_formula import verify_zero_sum_decomposition

    zt = _load_zeros(args, _ef_height(args.t, args.prec))
    return _report(verify_zero_sum_decomposition(args.t, args.X, args.sigma, zt, args.C, args.prec), out)


def cmd_ef_j(args, out):
    from .explicit_formula import j_integral_detail

    zt = _load_zeros(args, 1.5 * args.t + 1)
    jr = j_integral_detail(args.t, args.X, args.sigma, zt, args.C, args.prec)
    out.write(
        _kv(
            [
                ("t", args.t),
                ("X", args.X),
                ("sigma", args.sigma),
                ("J", jr.value),
                ("y_star", repr(jr.y_star)),
                ("panels", jr.panels),
                ("quad_error", f"{jr.quad_error:.3e}"),
                ("tail_charge", f"{jr.tail_charge:.3e}"),
            ]
        )
    )
    return EXIT_OK


def cmd_ef_i(args, out):
    from .explicit_formula import i_contour_identity

    return _report(i_contour_identity(args.X, args.sigma, args.prec), out)


def _pt(X):
    from .euler_product import build_prime_table

    return build_prime_table(max(int(math.floor(X)), 2))


def cmd_ep_product(args, out):
    from .euler_product import truncated_euler_product

    val = truncated_euler_product(mpmath.mpc(args.sigma, args.t), args.X, _pt(args.X), args.prec)
    out.write(_kv([("sigma", args.sigma), ("t", args.t), ("X", args.X), ("product", val)]))
    return EXIT_OK


def cmd_ep_mertens(args, out):
    from .euler_product import mertens_ratio
    from .numerics import constants

    r = mertens_ratio(args.X, _pt(args.X))
    eg = float(constants(args.prec).e_gamma)
    out.write(_kv([("X", args.X), ("ratio", repr(r)), ("e_gamma", repr(eg)), ("difference", repr(r - eg))]))
    return EXIT_OK


def cmd_ep_identity(args, out):
    from .euler_product import log_euler_identity_check

    return _report(log_euler_identity_check(mpmath.mpc(args.sigma, args.t), args.X, _pt(args.X), args.prec), out)


def cmd_ep_compare(args, out):
    from .euler_product import euler_asymptotic_check
    from .zeros import l_window

    zt = _load_zeros(args, l_window(args.t, args.C)[1] + 1) if args.zeros else None
    rec = euler_asymptotic_check(args.t, args.X, _pt(args.X), args.prec, zt, args.C)
    pairs = [("t", rec.t), ("X", rec.X), ("discrepancy", repr(rec.discrepancy)), ("gate", repr(rec.gate))]
    if rec.l_value is not None:
        pairs.append(("L", repr(rec.l_value)))
    out.write(_kv(pairs))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _shared(p, *need):
    p.add_argument("--prec", type=int, default=None, help="working precision in decimal digits (>= 15)")
    p.add_argument("--zeros", default=None, help="zero-table path, or 'compute' (default)")
    p.add_argument("--t", type=float, required="t" in need, default=None)
    p.add_argument("--sigma", type=float, required="sigma" in need, default=None)
    p.add_argument("--X", type=float, required="X" in need, default=None)
    p.add_argument("--C", type=float, default=DEFAULT_C)
    p.add_argument("--t-lo", dest="t_lo", type=float, required="range" in need, default=None)
    p.add_argument("--t-hi", dest="t_hi", type=float, required="range" in need, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--out", default=None, help="output file (CSV for scans, zero table for 'zeros locate')")


COMMANDS = {
    "zeta": {"eval": (cmd_zeta_eval, ("sigma", "t"))},
    "zeros": {"locate": (cmd_zeros_locate, ("range",)), "ingest": (cmd_zeros_ingest, ())},
    "st": {"eval": (cmd_st_eval, ("t",)), "scan": (cmd_st_scan, ("range",))},
    "ef": {
        "verify-lemma": (cmd_ef_lemma, ("sigma", "t", "X")),
        "verify-prop": (cmd_ef_prop, ("sigma", "t", "X")),
        "decomp": (cmd_ef_decomp, ("sigma", "t", "X")),
        "j": (cmd_ef_j, ("sigma", "t", "X")),
        "i-identity": (cmd_ef_i, ("sigma", "X")),
    },
    "ep": {
        "product": (cmd_ep_product, ("sigma", "t", "X")),
        "mertens": (cmd_ep_mertens, ("X",)),
        "identity": (cmd_ep_identity, ("sigma", "t", "X")),
        "compare": (cmd_ep_compare, ("t", "X")),
    },
    "scan": {"one-line": (cmd_scan_one_line, ("range",)), "sigma": (cmd_scan_sigma, ("range",))},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zetaexplicit", description=__doc__.splitlines()[0])
    nouns = parser.add_subparsers(dest="noun", required=True)
    for noun, verbs in COMMANDS.items():
        np_ = nouns.add_parser(noun)
        vs = np_.add_subparsers(dest="verb", required=True)
        for verb, (fn, need) in verbs.items():
            vp = vs.add_parser(verb)
            _shared(vp, *need)
            if noun in ("scan", "st") and verb != "eval":
                vp.add_argument("--adaptive", action="store_true", help="refine x4 around local maxima")
                vp.add_argument("--workers", type=int, default=1)
                vp.add_argument("--report", default=None, help="write the key: value summary here")
            vp.set_defaults(func=fn)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.prec = resolve_prec(args.prec)
        return args.func(args, out)
    except ZetaError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
