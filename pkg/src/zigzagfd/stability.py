"""Von Neumann analysis of explicit Runge-Kutta integration of ``u_t + c u_x = 0``.

A Fourier mode of scaled wavenumber ``kappa`` is multiplied per step by
``G = R(Lambda)``, with ``R`` the truncated exponential of degree ``p`` and

    Lambda = -lambda * S(pi kappa) = -i pi kappa lambda sigma(kappa),

where ``lambda = c dt / dx`` and ``S`` is the stencil symbol of
:class:`zigzagfd.symbols.StencilSymbol`.

Staggered schemes mix integer and half-integer nodes, so their unknowns are
``dx / 2`` apart; their stability number is referred to that spacing, which
amounts to ``lambda_eff = lambda / 2`` in the formula above.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .coefficients import INF, Family
from .exceptions import AnalysisError, InvalidSpecError, UnsupportedLimitError
from .stencils import SchemeSpec
from .symbols import StencilSymbol, symbol_for_spec

__all__ = [
    "TimeIntegrator",
    "StabilityScan",
    "amplification",
    "stable_direction",
    "critical_lambda",
    "is_stable",
    "stability_region",
    "table_sweep",
    "TableSweep",
    "DEFAULT_TRUNCATION",
    "TABLE_FAMILIES",
    "table_orders",
    "write_region_csv",
    "critical_json",
]

DEFAULT_TRUNCATION = 300
ZERO_THRESHOLD = 5e-4
REL_TOL = 1e-12


@dataclass(frozen=True)
class TimeIntegrator:
    """Explicit integrator of order ``p`` (1 = Euler) on a linear problem.

    Its stability function is ``R(z) = sum_{m<=p} z^m / m!``.
    """

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or int(self.p) != self.p or not 1 <= self.p <= 7:
            raise InvalidSpecError(f"integrator order must be in 1..7, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def name(self) -> str:
        return "Euler" if self.p == 1 else f"RK{self.p}"

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(1, math.factorial(m)) for m in range(self.p + 1))

    def R(self, z):
        """Evaluate the stability polynomial (Horner)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for m in range(self.p, -1, -1):
            out = out * z + 1.0 / math.factorial(m)
        return out

    def log_abs2(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """Accurate ``ln |R(z)|^2`` and the magnitude of its two parts.

        For moderate ``|z|`` write ``R = e^z (1 - q)`` with
        ``q = e^-z sum_{m>p} z^m / m!`` and use
        ``ln|R|^2 = 2 Re z + log1p(|q|^2 - 2 Re q)``.  This keeps relative
        accuracy when ``|R|`` is within rounding of 1, which the direct
        formula cannot.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z.shape)
        scale = np.empty(z.shape)
        small = np.abs(z) < 2.0
        if np.any(small):
            zs = z[small]
            tail = np.zeros_like(zs)
            term = zs ** (self.p + 1) / math.factorial(self.p + 1)
            for m in range(self.p + 1, self.p + 45):
                tail += term
                term = term * zs / (m + 1)
            q = np.exp(-zs) * tail
            a = 2.0 * zs.real
            with np.errstate(divide="ignore"):
                b = np.log1p(np.abs(q) ** 2 - 2.0 * q.real)
            out[small] = a + b
            scale[small] = np.abs(a) + np.abs(b)
        if np.any(~small):
            with np.errstate(divide="ignore"):
                v = np.log(np.abs(self.R(z[~small])) ** 2)
            out[~small] = v
            scale[~small] = np.abs(v) + 1.0
        return out, scale


def _integrator(p) -> TimeIntegrator:
    return p if isinstance(p, TimeIntegrator) else TimeIntegrator(int(p))


def stable_direction(spec: SchemeSpec) -> int:
    """Sign of ``lambda`` for which the scheme can be stable.

    Forward and forward-first schemes need ``lambda <= 0``, backward variants
    ``lambda >= 0``; centred schemes are symmetric and use ``+1``.
    """
    fam = spec.family
    if fam.centred or fam.backward:
        return 1
    return -1


def _lambda_scale(spec: SchemeSpec) -> float:
    return 0.5 if spec.family.staggered else 1.0


def amplification(lam, kappa, spec: SchemeSpec, integrator, truncation: Optional[int] = None):
    """Amplification factor ``G(lambda, kappa)``.

    Parameters
    ----------
    lam : float
        Signed stability number ``c dt / dx``.
    kappa : array_like
        Scaled wavenumbers in ``[-1, 1]``.
    spec : SchemeSpec
    integrator : TimeIntegrator or int
    truncation : int, optional
        Finite order standing in for an infinite-order spec.
    """
    integ = _integrator(integrator)
    if spec.infinite and truncation is None:
        truncation = DEFAULT_TRUNCATION
    sym = symbol_for_spec(spec, truncation)
    k = np.asarray(kappa, dtype=float)
    s = sym.S(np.pi * np.atleast_1d(k))
    g = integ.R(-lam * _lambda_scale(spec) * s)
    return g[0] if k.ndim == 0 else g


# ---------------------------------------------------------------------------
# exact behaviour near kappa = 0

def _cmul(p: List[Tuple[Fraction, Fraction]], q: List[Tuple[Fraction, Fraction]], deg: int):
    out = [(Fraction(0), Fraction(0))] * (deg + 1)
    for i, (ar, ai) in enumerate(p):
        if ar == 0 and ai == 0:
            continue
        for j in range(0, deg + 1 - i):
            br, bi = q[j]
            if br == 0 and bi == 0:
                continue
            cr, ci = out[i + j]
            out[i + j] = (cr + ar * br - ai * bi, ci + ar * bi + ai * br)
    return out


def _origin_unstable(moments: Sequence[Fraction], lam_eff: Fraction, p: int) -> bool:
    """Sign of the leading Taylor coefficient of ``ln|G(theta)|^2`` at ``theta = 0``.

    ``moments[r] = sum w m^r``.  The expansion is carried out in exact
    rational arithmetic, so the verdict is free of rounding.
    """
    deg = len(moments) - 1
    zero = (Fraction(0), Fraction(0))
    # Lambda(theta) = -lam * sum_r mu_r (i theta)^r / r!
    lam_poly = [zero]
    for r in range(1, deg + 1):
        c = -lam_eff * moments[r] / math.factorial(r)
        ph = r % 4  # i^r
        lam_poly.append({0: (c, Fraction(0)), 1: (Fraction(0), c), 2: (-c, Fraction(0)), 3: (Fraction(0), -c)}[ph])
    # U = R(Lambda) - 1
    u = [zero] * (deg + 1)
    power = [(Fraction(1), Fraction(0))] + [zero] * deg
    for m in range(1, p + 1):
        power = _cmul(power, lam_poly, deg)
        f = Fraction(1, math.factorial(m))
        u = [(a + f * pr, b + f * pi) for (a, b), (pr, pi) in zip(u, power)]
    # ln(1 + U) = sum_n (-1)^(n+1) U^n / n
    log = [zero] * (deg + 1)
    power = [(Fraction(1), Fraction(0))] + [zero] * deg
    for n in range(1, deg + 1):
        power = _cmul(power, u, deg)
        f = Fraction((-1) ** (n + 1), n)
        log = [(a + f * pr, b + f * pi) for (a, b), (pr, pi) in zip(log, power)]
    for re, _ in log[1:]:
        if re != 0:
            return re > 0
    return False


# ---------------------------------------------------------------------------
# stability test for a given lambda

def _kappa_grid(n_uniform: int = 4097) -> np.ndarray:
    tiny = np.geomspace(1e-6, 1e-1, 121)
    k = np.concatenate([np.linspace(-1.0, 1.0, n_uniform), tiny, -tiny])
    return np.unique(k)


class _Problem:
    """Precomputed symbol samples for repeated stability tests of one scheme."""

    def __init__(self, spec: SchemeSpec, integrator: TimeIntegrator, truncation: Optional[int] = None,
                 kappa: Optional[np.ndarray] = None, sign: Optional[int] = None):
        if spec.derivative != 1:
            raise InvalidSpecError("stability analysis needs a first-derivative scheme")
        self.spec = spec
        self.integ = integrator
        self.sym: StencilSymbol = symbol_for_spec(spec, truncation if spec.infinite else None)
        self.scale = _lambda_scale(spec)
        self.sign = stable_direction(spec) if sign is None else sign
        self.kappa = _kappa_grid() if kappa is None else np.asarray(kappa, dtype=float)
        self.S, self.err = self.sym.evaluate(np.pi * self.kappa)
        self.dk = 2.0 / 4096
        deg = self.integ.p + 4
        self.moments = self.sym.moments(deg) if self.sym.stencil.exact else None

    def margin(self, lam_eff: float, S: np.ndarray, err: np.ndarray) -> np.ndarray:
        """``ln|G|^2`` minus the tolerance; positive means amplification."""
        v, sc = self.integ.log_abs2(-lam_eff * S)
        return v - REL_TOL * sc - 2.0 * abs(lam_eff) * err

    def lam_eff(self, lam_abs: float) -> float:
        return self.sign * lam_abs * self.scale

    def grid_unstable(self, lam_abs: float) -> bool:
        le = self.lam_eff(lam_abs)
        if self.moments is not None and _origin_unstable(self.moments, Fraction(le), self.integ.p):
            return True
        return bool(np.any(self.margin(le, self.S, self.err) > 0))

    def refined_unstable(self, lam_abs: float, peaks: int = 8, levels: int = 2, points: int = 65) -> bool:
        """Zoom around the largest local maxima of the margin on the grid."""
        if self.grid_unstable(lam_abs):
            return True
        le = self.lam_eff(lam_abs)
        mg = self.margin(le, self.S, self.err)
        order = np.argsort(mg)[::-1]
        centres: List[float] = []
        for idx in order:
            k = self.kappa[idx]
            if all(abs(k - c) > 2 * self.dk for c in centres):
                centres.append(k)
            if len(centres) == peaks:
                break
        half = self.dk
        for _ in range(levels):
            ks = np.concatenate([np.linspace(c - half, c + half, points) for c in centres])
            ks = np.clip(ks, -1.0, 1.0)
            S, err = self.sym.evaluate(np.pi * ks)
            m = self.margin(le, S, err).reshape(len(centres), points)
            if np.any(m > 0):
                return True
            centres = [ks[i * points + int(np.argmax(m[i]))] for i in range(len(centres))]
            half *= 2.0 / (points - 1)
        return False

    def max_abs_g(self, lam_abs: float) -> float:
        le = self.lam_eff(lam_abs)
        return float(np.max(np.abs(self.integ.R(-le * self.S))))


def critical_lambda(
    spec: SchemeSpec,
    integrator,
    tol: float = 1e-4,
    truncation: Optional[int] = None,
    step: float = 0.01,
    lambda_cap: float = 50.0,
) -> float:
    """Largest ``|lambda|`` for which the scheme is stable for every sampled ``kappa``.

    ``|lambda|`` is marched upward from 0 in ``step`` increments until the
    first unstable value, then bisected down to ``tol / 10``.  Values below
    ``5e-4`` are reported as 0 (unconditionally unstable).

    Raises
    ------
    AnalysisError
        When no instability is found below ``lambda_cap``.

    Examples
    --------
    >>> from zigzagfd.stencils import SchemeSpec
    >>> round(critical_lambda(SchemeSpec("zigzag", 3), 2), 4)
    1.0714
    """
    integ = _integrator(integrator)
    if spec.infinite and truncation is None:
        truncation = DEFAULT_TRUNCATION
    prob = _Problem(spec, integ, truncation)
    lo, hi = 0.0, step
    while not prob.grid_unstable(hi):
        lo, hi = hi, hi + step
        if hi > lambda_cap:
            raise AnalysisError(
                f"{spec.label} with {integ.name}: no instability found up to |lambda| = {lambda_cap}"
            )
    while lo > 0 and prob.refined_unstable(lo):
        hi, lo = lo, max(lo - step, 0.0)
    while hi - lo > tol / 10:
        mid = 0.5 * (lo + hi)
        if prob.refined_unstable(mid):
            hi = mid
        else:
            lo = mid
    return 0.0 if lo < ZERO_THRESHOLD else lo


def is_stable(lam: float, spec: SchemeSpec, integrator, truncation: Optional[int] = None) -> bool:
    """Whether the signed stability number ``lam`` is stable for every ``kappa``."""
    integ = _integrator(integrator)
    if lam == 0:
        return True
    if spec.infinite and truncation is None:
        truncation = DEFAULT_TRUNCATION
    prob = _Problem(spec, integ, truncation, sign=1 if lam > 0 else -1)
    return not prob.refined_unstable(abs(lam))


# ---------------------------------------------------------------------------
# rasters and table sweeps

@dataclass
class StabilityScan:
    """Raster of ``|G|`` over a ``lambda x kappa`` grid."""

    spec: SchemeSpec
    integrator: TimeIntegrator
    lambda_grid: np.ndarray
    kappa_grid: np.ndarray
    absG: np.ndarray
    stable: np.ndarray
    critical_lambda: Optional[float] = None


def stability_region(
    spec: SchemeSpec,
    integrator,
    lambda_range: Tuple[float, float] = (-3.0, 3.0),
    grid_resolution: Union[int, Tuple[int, int]] = 256,
    truncation: Optional[int] = None,
    with_critical: bool = False,
) -> StabilityScan:
    """Tabulate ``|G|`` and the stable mask ``|G| <= 1``.

    The mask uses the same rounding-aware test as :func:`critical_lambda`.
    """
    integ = _integrator(integrator)
    if isinstance(grid_resolution, int):
        nl = nk = grid_resolution
    else:
        nl, nk = grid_resolution
    if nl < 64 or nk < 64:
        raise InvalidSpecError("grid resolution must be at least 64 x 64")
    if spec.infinite and truncation is None:
        truncation = DEFAULT_TRUNCATION
    lam = np.linspace(lambda_range[0], lambda_range[1], nl)
    if 0.0 not in lam and lambda_range[0] < 0 < lambda_range[1]:
        lam = np.sort(np.append(lam, 0.0))
    kappa = np.linspace(-1.0, 1.0, nk)
    prob = _Problem(spec, integ, truncation, kappa=kappa)
    absg = np.empty((lam.size, kappa.size))
    mask = np.empty((lam.size, kappa.size), dtype=bool)
    for i, l in enumerate(lam):
        le = l * prob.scale
        absg[i] = np.abs(integ.R(-le * prob.S))
        mask[i] = prob.margin(le, prob.S, prob.err) <= 0
    crit = critical_lambda(spec, integ, truncation=truncation) if with_critical else None
    return StabilityScan(spec, integ, lam, kappa, absg, mask, crit)


TABLE_FAMILIES = (
    Family.CENTRED,
    Family.CENTRED_STAGGERED,
    Family.FORWARD,
    Family.ZIGZAG_FORWARD_FIRST,
    Family.ZIGZAG_STAGGERED_FORWARD_FIRST,
)


def table_orders(p: int) -> List[Union[int, float]]:
    """Column orders of the published table for integrator order ``p``."""
    if p == 1:
        return [1, 2]
    if p == 2:
        return [1, 2, 3, 4]
    if p in (5, 6):
        return list(range(1, 8))
    return list(range(1, 7)) + [INF]


@dataclass
class TableSweep:
    """Critical ``|lambda|`` per (integrator, family, order); failures keep their message."""

    values: Dict[Tuple[int, Family, Union[int, float]], Union[float, str]] = field(default_factory=dict)
    truncation: int = DEFAULT_TRUNCATION

    def get(self, p: int, family, order):
        return self.values.get((p, Family.parse(family), order))

    def write_csv(self, stream, p: int) -> None:
        """One row per family, one column per order (blank when not applicable)."""
        orders = sorted({o for (q, _, o) in self.values if q == p}, key=float)
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["scheme"] + ["inf" if o == INF else str(o) for o in orders])
        fams = [f for f in TABLE_FAMILIES if any(q == p and g is f for (q, g, _) in self.values)]
        fams += sorted({g for (q, g, _) in self.values if q == p} - set(fams), key=lambda f: f.value)
        for f in fams:
            row = [f.value]
            for o in orders:
                v = self.values.get((p, f, o))
                if v is None:
                    row.append("")
                elif isinstance(v, float):
                    row.append(f"{v:.4f}")
                else:
                    row.append(v)
            w.writerow(row)


def table_sweep(
    integrators: Iterable[int] = range(1, 8),
    families: Sequence = TABLE_FAMILIES,
    orders: Optional[Sequence] = None,
    truncation: int = DEFAULT_TRUNCATION,
    tol: float = 1e-4,
) -> TableSweep:
    """Batch driver over :func:`critical_lambda`.

    ``orders=None`` uses the published column layout of each integrator.
    Cells that cannot be computed (odd centred orders, infinite one-sided
    orders, failed searches) are recorded as strings; the sweep never aborts.
    """
    out = TableSweep(truncation=truncation)
    for p in integrators:
        cols = table_orders(p) if orders is None else list(orders)
        for fam in families:
            fam = Family.parse(fam)
            for o in cols:
                key = (p, fam, o)
                if fam.centred and o != INF and o % 2:
                    continue
                try:
                    spec = SchemeSpec(fam, o)
                    out.values[key] = critical_lambda(spec, p, tol=tol, truncation=truncation)
                except UnsupportedLimitError:
                    out.values[key] = "n/a"
                except (AnalysisError, InvalidSpecError) as exc:
                    out.values[key] = f"error: {exc}"
    return out


def write_region_csv(stream, scan: StabilityScan) -> None:
    """Write ``lambda,kappa,absG,stable`` rows."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["lambda", "kappa", "absG", "stable"])
    for i, l in enumerate(scan.lambda_grid):
        for j, k in enumerate(scan.kappa_grid):
            w.writerow([repr(float(l)), repr(float(k)), repr(float(scan.absG[i, j])), int(scan.stable[i, j])])


def critical_json(spec: SchemeSpec, p: int, value: float, tol: float, truncation: Optional[int]) -> str:
    doc = {
        "family": spec.family.value,
        "stagger": spec.stagger,
        "order": "inf" if spec.infinite else spec.order,
        "rk_order": p,
        "lambda_max": round(value, 6),
        "tolerance": tol,
    }
    if spec.infinite:
        doc["truncation_order"] = truncation
    return json.dumps(doc, sort_keys=False)
