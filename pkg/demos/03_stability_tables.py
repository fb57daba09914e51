"""Critical stability numbers for the truncated-exponential Runge-Kutta family.

Computes one published table per integrator order and prints it next to the
published values, flagging cells that differ by more than 1e-3.

Run with ``python3 demos/03_stability_tables.py --rk 2 3``.
"""

import argparse
import math
import sys
from pathlib import Path

from zigzagfd.coefficients import Family
from zigzagfd.stability import TABLE_FAMILIES, table_orders, table_sweep

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from reference_values import STABILITY  # noqa: E402

SHORT = {
    Family.CENTRED: "centred",
    Family.CENTRED_STAGGERED: "centred-staggered",
    Family.FORWARD: "forward",
    Family.ZIGZAG_FORWARD_FIRST: "zigzag",
    Family.ZIGZAG_STAGGERED_FORWARD_FIRST: "zigzag-staggered",
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rk", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()
    sweep = table_sweep(args.rk)
    for p in args.rk:
        print(f"\nRK{p} (computed / published, * marks |difference| > 1e-3)")
        for fam in TABLE_FAMILIES:
            cells = []
            for o in table_orders(p):
                got = sweep.get(p, fam, o)
                if got is None:
                    continue
                ref = STABILITY.get((p, SHORT[fam], o))
                label = "inf" if o == math.inf else str(o)
                if not isinstance(got, float):
                    cells.append(f"{label}: {got}")
                    continue
                flag = "*" if ref is not None and abs(got - ref) > 1e-3 else " "
                ref_s = f"{ref:.4f}" if ref is not None else "-"
                cells.append(f"{label}: {got:.4f}/{ref_s}{flag}")
            print(f"  {fam.value:32s} " + "  ".join(cells))


if __name__ == "__main__":
    main()
