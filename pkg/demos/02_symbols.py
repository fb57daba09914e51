"""Sigma-factors of centred, upwind and zigzag schemes.

Writes one CSV per scheme (``kappa,sigma_re,sigma_im``) for external plotting
and prints the largest dispersion and dissipation errors.

Run with ``python3 demos/02_symbols.py --out sigma_csv``.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from zigzagfd.stencils import SchemeSpec
from zigzagfd.symbols import sigma, write_sigma_csv

SCHEMES = ["centred:2", "centred:6", "forward:2", "zigzag:2", "zigzag:6", "zigzag:inf", "centred-staggered:4"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=401)
    ap.add_argument("--out", type=Path, default=None, help="directory for the CSV files")
    args = ap.parse_args()

    kappa = np.linspace(-1, 1, args.samples)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
    print(f"{'scheme':24s} {'max|Re s - 1|':>14s} {'max|Im s|':>10s}  kappa where |s - 1| > 1e-2")
    for text in SCHEMES:
        fam, order = text.rsplit(":", 1)
        spec = SchemeSpec(fam, math.inf if order == "inf" else int(order))
        s = np.asarray(sigma(kappa, spec), dtype=complex)
        bad = np.abs(s - 1) > 1e-2
        first = f"{np.min(np.abs(kappa[bad])):.3f}" if bad.any() else "-"
        print(f"{text:24s} {np.max(np.abs(s.real - 1)):14.4f} {np.max(np.abs(s.imag)):10.4f}  {first}")
        if args.out is not None:
            with open(args.out / f"sigma_{text.replace(':', '_')}.csv", "w", newline="") as fh:
                write_sigma_csv(fh, spec, kappa, s)


if __name__ == "__main__":
    main()
