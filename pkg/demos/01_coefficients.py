"""Exact coefficient tables and the cost of the floating-point paths.

Prints the zigzag coefficients for N = 1..8, checks one order of every family
against the Vandermonde oracle, and times the three float paths of the centred
coefficients at increasing order.

Run with ``python3 demos/01_coefficients.py``.
"""

import argparse
import time

from zigzagfd.coefficients import (
    Family,
    coeff_float,
    coefficient_set,
    quotient_offsets,
    recombine,
    vandermonde_weights,
    zigzag_coeffs,
)
from zigzagfd.exceptions import CoefficientOverflowError


def nodes(fam, order):
    terms = order // 2 if fam.centred else order
    out = {x for pair in quotient_offsets(fam, terms) for x in pair}
    if fam is Family.CENTRED:
        out.add(0)
    return sorted(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs="+", default=[50, 100, 200, 400, 1000, 5000])
    args = ap.parse_args()

    print("Zigzag coefficients Z_N^j")
    for n in range(1, 9):
        print(f"  N={n}: " + ", ".join(str(v) for v in zigzag_coeffs(n).values))

    print("\nOracle check at order 10")
    for fam in Family:
        order = 10
        x = nodes(fam, order)
        same = recombine(fam, order, x, vandermonde_weights(x)) == list(coefficient_set(fam, order).values)
        print(f"  {fam.value:34s} {'ok' if same else 'MISMATCH'}")

    print("\nCentred-staggered float paths (seconds for all j; 'overflow' when the path fails)")
    print("  order   " + "".join(f"{m:>12s}" for m in ("direct", "gammaln", "log1p")))
    for order in args.orders:
        cells = []
        for method in ("direct", "gammaln", "log1p"):
            t0 = time.perf_counter()
            try:
                for j in range(1, order // 2 + 1):
                    coeff_float(Family.CENTRED_STAGGERED, order, j, method)
                cells.append(f"{time.perf_counter() - t0:12.4f}")
            except CoefficientOverflowError:
                cells.append(f"{'overflow':>12s}")
        print(f"  {order:5d}   " + "".join(cells))


if __name__ == "__main__":
    main()
