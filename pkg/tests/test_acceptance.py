"""Acceptance criteria 1-11.

Each criterion is a plain function returning ``(ok, detail)`` so that the
module can also run as a script::

    python3 tests/test_acceptance.py

Under pytest every criterion is one test; the terminal summary prints one
PASS/FAIL line per criterion (see ``conftest.py``).
"""

import math
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import ALL_FAMILIES, SHORT_NAMES, convergence_slope, full_sweep, nodal_offsets  # noqa: E402
from reference_values import CRITERION5, ENERGY_LOSSES, TABLE1  # noqa: E402

from zigzagfd.coefficients import (  # noqa: E402
    Family,
    coeff_float_log1p,
    coefficient_set,
    recombine,
    vandermonde_weights,
    zigzag_coeffs,
)
from zigzagfd.stability import critical_lambda, stable_direction  # noqa: E402
from zigzagfd.stencils import SchemeSpec  # noqa: E402
from zigzagfd.symbols import sigma, sigma_zigzag_infinite, sigma_zigzag_infinite_series  # noqa: E402
from zigzagfd.transport import AdvectConfig, advect, energy_comparison, ghost_experiment  # noqa: E402

RESULTS = {}

TITLES = {
    1: "zigzag coefficients equal the published table",
    2: "closed forms equal the Vandermonde oracle",
    3: "coefficients sum to one",
    4: "log1p float path",
    5: "stability table entries",
    6: "closed-form critical values",
    7: "sigma-factor identities",
    8: "convergence orders",
    9: "advection agrees with critical lambda",
    10: "energy-loss ordering",
    11: "ghost experiment",
}


def _record(n, ok, detail, elapsed):
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {TITLES[n]} ({elapsed:.1f} s): {detail}"
    RESULTS[n] = (ok, line)
    print(line)
    return ok, detail


def _finite_orders(fam, top):
    return range(2, top + 1, 2) if fam.centred else range(1, top + 1)


# ---------------------------------------------------------------------------
# criteria

def criterion_1():
    t0 = time.perf_counter()
    bad = [n for n, row in TABLE1.items() if list(zigzag_coeffs(n).values) != row]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    return _record(1, ok, f"mismatched rows {bad}" if bad else "N = 1..8 exact", dt)


def criterion_2():
    t0 = time.perf_counter()
    bad = []
    for fam in ALL_FAMILIES:
        for order in _finite_orders(fam, 64):
            nodes = nodal_offsets(fam, order)
            w = vandermonde_weights(nodes, 1)
            if recombine(fam, order, nodes, w) != list(coefficient_set(fam, order).values):
                bad.append((fam.value, order))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30.0
    return _record(2, ok, f"mismatches {bad[:5]}" if bad else f"{len(ALL_FAMILIES)} families, orders <= 64", dt)


def criterion_3():
    t0 = time.perf_counter()
    bad = [
        (fam.value, order)
        for fam in ALL_FAMILIES
        for order in _finite_orders(fam, 100)
        if sum(coefficient_set(fam, order).values, Fraction(0)) != 1
    ]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10.0
    return _record(3, ok, f"failures {bad[:5]}" if bad else "all families, orders <= 100", dt)


def criterion_4():
    t0 = time.perf_counter()
    worst = 0.0
    for fam in (Family.CENTRED, Family.CENTRED_STAGGERED):
        for order in range(2, 201, 2):
            for j, exact in enumerate(coefficient_set(fam, order).values, start=1):
                approx = coeff_float_log1p(fam, order, j)
                worst = max(worst, abs(approx - float(exact)) / abs(float(exact)))
    finite = all(
        math.isfinite(coeff_float_log1p(fam, 5000, j))
        for fam in (Family.CENTRED, Family.CENTRED_STAGGERED)
        for j in range(1, 2501)
    )
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and finite and dt < 20.0
    return _record(4, ok, f"max rel err {worst:.2e} (orders <= 200), order 5000 finite: {finite}", dt)


def criterion_5():
    sweep, sweep_time = full_sweep()
    t0 = time.perf_counter()
    misses = []
    for p, short, order, expected in CRITERION5:
        got = sweep.get(p, SHORT_NAMES[short], order)
        if not isinstance(got, float) or abs(got - expected) > 1e-3:
            shown = f"{got:.4f}" if isinstance(got, float) else got
            misses.append(f"RK{p} {short}/{order}: got {shown}, published {expected}")
    dt = time.perf_counter() - t0 + sweep_time
    ok = not misses and sweep_time < 600.0
    detail = f"{len(CRITERION5) - len(misses)}/{len(CRITERION5)} entries within 1e-3, full sweep {sweep_time:.0f} s"
    if misses:
        detail += "; " + "; ".join(misses)
    return _record(5, ok, detail, dt)


def criterion_6():
    t0 = time.perf_counter()
    cases = [
        ("zigzag", 2, 2, 2 ** (1 / 3) * 3 ** (2 / 3) / 3),
        ("zigzag", 3, 2, 15 / 14),
        ("centred", 2, 3, math.sqrt(3)),
        ("centred", 2, 4, 2 * math.sqrt(2)),
    ]
    errs = [abs(critical_lambda(SchemeSpec(f, o), p, tol=1e-7) - v) for f, o, p, v in cases]
    dt = time.perf_counter() - t0
    ok = max(errs) <= 1e-6
    return _record(6, ok, f"max abs error {max(errs):.1e}", dt)


def criterion_7():
    t0 = time.perf_counter()
    fails = []
    for fam in ALL_FAMILIES:
        for order in (2, 4):
            if sigma(0.0, SchemeSpec(fam, order)) != 1:
                fails.append(f"sigma(0) {fam.value}:{order}")
    for order in (2, 4, 6, 8, math.inf):
        if abs(sigma(1.0, SchemeSpec("centred", order))) != 0:
            fails.append(f"sigma_c(1) order {order}")
    for fam in ("forward", "backward"):
        for order in (1, 2, 3, 4):
            spec = SchemeSpec(fam, order)
            if abs(sigma(2.0, spec)) > 1e-15 or abs(complex(sigma(1.0, spec)).real) > 1e-15:
                fails.append(f"one-sided endpoints {fam}:{order}")
    kappa = np.linspace(-1, 1, 201)
    for order in (1, 2, 5, 8, math.inf):
        fwd = sigma(kappa, SchemeSpec("zigzag-forward-first", order))
        bwd = sigma(kappa, SchemeSpec("zigzag-backward-first", order))
        if np.max(np.abs(bwd - np.conj(fwd))) > 1e-14:
            fails.append(f"conjugacy order {order}")
    worst = 0.0
    for k in np.linspace(-1, 1, 33):
        closed = complex(sigma_zigzag_infinite(k))
        series = sigma_zigzag_infinite_series(k, 10 ** 6)
        worst = max(worst, abs(closed - series))
    if worst > 1e-3:
        fails.append(f"series gap {worst:.2e}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 60.0
    return _record(7, ok, "; ".join(fails) if fails else f"all identities hold, series gap {worst:.1e}", dt)


CONVERGENCE_CASES = (
    [("centred", o) for o in (2, 4, 6)]
    + [("forward", o) for o in (1, 2, 3)]
    + [("zigzag", o) for o in range(1, 7)]
    + [("centred-staggered", o) for o in (2, 4)]
    + [("zigzag-staggered", o) for o in range(1, 5)]
)


def criterion_8():
    t0 = time.perf_counter()
    off = []
    worst = 0.0
    for fam, order in CONVERGENCE_CASES:
        slope = convergence_slope(SchemeSpec(fam, order))
        worst = max(worst, abs(slope - order))
        if abs(slope - order) > 0.25:
            off.append(f"{fam}:{order} slope {slope:.2f}")
    dt = time.perf_counter() - t0
    ok = not off and dt < 60.0
    return _record(8, ok, "; ".join(off) if off else f"{len(CONVERGENCE_CASES)} schemes, max |slope - order| {worst:.3f}", dt)


# (family, order, integrator); collocated schemes only, see the notes on
# staggered transport.
CROSS_CHECK_PAIRS = (
    ("forward", 1, 2),
    ("centred", 2, 3),
    ("centred", 2, 4),
    ("forward", 2, 3),
    ("zigzag", 3, 2),
    ("zigzag", 2, 3),
)


def _energy_ratio(spec, p, lam, n=256, steps=500):
    dx, dt = 1.0 / n, 0.01
    cfg = AdvectConfig(
        c=lam * dx / dt, dx=dx, dt=dt, t_end=steps * dt, spec=spec, rk_order=p,
        ic="random", seed=1, check_stability=False,
    )
    e = advect(cfg).energy
    return float(np.max(e) / e[0]), float(e[-1] / e[0])


def criterion_9():
    t0 = time.perf_counter()
    fails = []
    for fam, order, p in CROSS_CHECK_PAIRS:
        spec = SchemeSpec(fam, order)
        lam_c = critical_lambda(spec, p) * stable_direction(spec)
        peak_lo, _ = _energy_ratio(spec, p, 0.95 * lam_c)
        _, final_hi = _energy_ratio(spec, p, 1.05 * lam_c)
        if peak_lo > 1.0 + 1e-10 or not final_hi > 10.0:
            fails.append(f"{fam}:{order} RK{p} peak {peak_lo:.3g} growth {final_hi:.3g}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 60.0
    return _record(9, ok, "; ".join(fails) if fails else f"{len(CROSS_CHECK_PAIRS)} pairs bounded at 0.95x, diverge at 1.05x", dt)


def criterion_10():
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("error", RuntimeWarning)
        losses = energy_comparison().losses
    c, z, u = losses["centred"], losses["zigzag"], losses["upwind"]
    dt = time.perf_counter() - t0
    ok = 0 < c < z < u and dt < 120.0
    ratios = ", ".join(f"{v / r:.1f}x" for v, r in zip((c, z, u), ENERGY_LOSSES))
    return _record(10, ok, f"losses {c:.3e} < {z:.3e} < {u:.3e} (vs published: {ratios})", dt)


def criterion_11():
    t0 = time.perf_counter()
    zig = ghost_experiment("zigzag-backward-first:2").metric
    cen = ghost_experiment("centred:2").metric
    dt = time.perf_counter() - t0
    ok = zig <= 0.05 and cen >= 0.5 and dt < 60.0
    return _record(11, ok, f"M(zigzag) = {zig:.2e}, M(centred) = {cen:.3f}", dt)


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance(number):
    ok, detail = CRITERIA[number]()
    assert ok, f"criterion {number}: {detail}"


if __name__ == "__main__":
    failed = [n for n, fn in CRITERIA.items() if not fn()[0]]
    print(f"{11 - len(failed)}/11 criteria pass")
    sys.exit(1 if failed else 0)
