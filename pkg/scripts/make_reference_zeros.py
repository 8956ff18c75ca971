"""Build the reference zero-ordinate fixture used by the test suite.

The table is produced with mpmath only (Riemann-Siegel ``fp.siegelz`` sign
scanning + Brent refinement, the first 100 ordinates polished with
``mpmath.zetazero``), so it shares no code path with ``zetaexplicit``.

    python scripts/make_reference_zeros.py --height 10000 --out tests/data/zeros_ref.txt
"""

import argparse
import math

import mpmath
from scipy.optimize import brentq


def scan(t_lo, t_hi, step):
    z = mpmath.fp.siegelz
    ordinates = []
    t0, v0 = t_lo, z(t_lo)
    n = int(math.ceil((t_hi - t_lo) / step))
    for k in range(1, n + 1):
        t1 = min(t_lo + k * step, t_hi)
        v1 = z(t1)
        if v0 == 0.0:
            ordinates.append(t0)
        elif v0 * v1 < 0:
            ordinates.append(brentq(z, t0, t1, xtol=1e-13, rtol=1e-15, maxiter=200))
        t0, v0 = t1, v1
    return ordinates


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--height", type=float, default=10000.0)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--polish", type=int, default=100)
    ap.add_argument("--out", default="tests/data/zeros_ref.txt")
    args = ap.parse_args()

    ordinates = scan(10.0, args.height, args.step)
    mpmath.mp.dps = 25
    for i in range(min(args.polish, len(ordinates))):
        exact = float(mpmath.zetazero(i + 1).imag)
        if abs(exact - ordinates[i]) > 1e-8:
            raise SystemExit(f"zero {i + 1}: scan {ordinates[i]!r} vs zetazero {exact!r}")
        ordinates[i] = exact

    # N(T) via mpmath's Gram-block counter at a few heights
    for T in (100.0, 1000.0, args.height):
        mid = T
        expected = int(mpmath.nzeros(mid))
        have = sum(1 for g in ordinates if g <= mid)
        if expected != have:
            raise SystemExit(f"count mismatch at T={T}: table {have}, nzeros {expected}")

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("# nontrivial zeta zero ordinates, 0 < gamma <= height\n")
        fh.write("# height: %.1f\n" % args.height)
        fh.write("# generated by scripts/make_reference_zeros.py (mpmath fp.siegelz + zetazero)\n")
        for g in ordinates:
            fh.write(f"{g:.12f}\n")
    print(f"wrote {len(ordinates)} ordinates to {args.out}")


if __name__ == "__main__":
    main()
