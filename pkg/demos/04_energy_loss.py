"""Energy lost by second-order centred, zigzag and upwind schemes.

Advects a periodised plateau with error-function edges on [-20, 20] with RK3,
dx = 0.01, dt = 0.05 up to t = 15, and prints the loss E(0) - E(15) of each
scheme.

Run with ``python3 demos/04_energy_loss.py --c -0.1``.
"""

import argparse

from zigzagfd.transport import energy_comparison


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=float, default=-0.1, help="celerity")
    ap.add_argument("--ic-width", type=float, default=1.0, help="width of the erf edges")
    args = ap.parse_args()
    res = energy_comparison(c=args.c, ic_width=args.ic_width)
    for name, loss in res.losses.items():
        e0 = res.trajectories[name].energy[0]
        print(f"{name:8s} loss {loss:.3e}  (relative {loss / e0:.2e})")


if __name__ == "__main__":
    main()
