"""Shared fixtures-by-function for the test modules."""

import functools
import time
from fractions import Fraction

import numpy as np

from zigzagfd.coefficients import Family, quotient_offsets
from zigzagfd.stability import table_sweep
from zigzagfd.stencils import Field1D, SchemeSpec, apply, build_stencil, staggered_apply

ALL_FAMILIES = tuple(Family)

SHORT_NAMES = {
    "forward": Family.FORWARD,
    "zigzag": Family.ZIGZAG_FORWARD_FIRST,
    "zigzag-staggered": Family.ZIGZAG_STAGGERED_FORWARD_FIRST,
    "centred": Family.CENTRED,
    "centred-staggered": Family.CENTRED_STAGGERED,
}


def nodal_offsets(family: Family, order: int):
    """Stencil nodes of a finite-order scheme, built from the quotient pairs."""
    terms = order // 2 if family.centred else order
    nodes = set()
    for a, b in quotient_offsets(family, terms):
        nodes.update((a, b))
    if family is Family.CENTRED:
        nodes.add(Fraction(0))
    return sorted(nodes)


@functools.lru_cache(maxsize=None)
def full_sweep():
    """Every cell of the published stability tables, computed once per session."""
    t0 = time.perf_counter()
    sweep = table_sweep(range(1, 8))
    return sweep, time.perf_counter() - t0


def derivative_error(spec: SchemeSpec, n: int) -> float:
    """Max error of the scheme's first derivative of ``sin`` on a periodic grid of ``n`` points."""
    dx = 2 * np.pi / n
    st = build_stencil(spec)
    if st.staggered:
        half = Field1D.sample(np.sin, n, dx, origin=dx / 2)
        base = Field1D.sample(np.sin, n, dx)
        out = staggered_apply(st, half, base)
    else:
        out = apply(st, Field1D.sample(np.sin, n, dx))
    return float(np.max(np.abs(out.values - np.cos(out.x))))


def convergence_slope(spec: SchemeSpec, n1: int = 32, n2: int = 64) -> float:
    e1, e2 = derivative_error(spec, n1), derivative_error(spec, n2)
    return float(np.log(e1 / e2) / np.log(n2 / n1))
