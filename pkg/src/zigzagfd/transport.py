"""Method-of-lines solver for ``u_t + c u_x = 0`` on a uniform 1D grid.

The semi-discrete system is ``du/dt = L u`` with ``L = -c D`` and ``D`` the
stencil operator.  Because the problem is linear, an explicit Runge-Kutta
step of order ``p`` equals the truncated exponential

    u <- sum_{m<=p} (dt L)^m u / m!,

which is exactly the polynomial analysed in :mod:`zigzagfd.stability`.
Implicit Euler solves ``(I - dt L) u_new = u`` directly: by FFT on periodic
grids (the matrix is circulant) and by banded LU with Neumann boundaries.

Staggered schemes are run on a grid that holds both the integer and the
half-integer nodes, so ``dx`` is the distance between adjacent unknowns and
``lambda = c dt / dx`` matches the stability module's convention.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import lapack
from scipy.special import erf

from .exceptions import InvalidSpecError, SolverError
from .stencils import Boundary, SchemeSpec, Stencil, build_stencil, build_stencil_truncated, parse_scheme

__all__ = [
    "AdvectConfig",
    "Trajectory",
    "SpatialOperator",
    "advect",
    "initial_condition",
    "energy",
    "energy_comparison",
    "EnergyComparison",
    "ghost_experiment",
    "GhostResult",
    "write_snapshots_csv",
    "write_energy_csv",
    "ghost_json",
]

ArrayLike = Union[np.ndarray, Sequence[float]]


def energy(u: np.ndarray, dx: float) -> float:
    """Discrete L2 energy ``dx * sum(u^2)``."""
    return float(dx * np.dot(u, u))


class SpatialOperator:
    """``D u`` for one stencil on one grid, plus its matrix forms.

    Parameters
    ----------
    stencil : Stencil
        Collocated stencil (integer offsets) in units of the grid spacing.
    n : int
        Number of unknowns.
    dx : float
    boundary : Boundary
    """

    def __init__(self, stencil: Stencil, n: int, dx: float, boundary: Boundary):
        self.stencil = stencil
        self.n = n
        self.dx = dx
        self.boundary = Boundary(boundary)
        offs, w = stencil.float_arrays()
        if np.any(offs != np.round(offs)):
            raise InvalidSpecError("SpatialOperator needs integer offsets")
        self.shifts = offs.astype(int)
        self.weights = w / dx ** stencil.derivative
        self.reach = int(np.max(np.abs(self.shifts)))
        if self.boundary is Boundary.PERIODIC and n < self.shifts.max() - self.shifts.min() + 1:
            raise InvalidSpecError(f"{n} points are fewer than the stencil width")
        if self.boundary is Boundary.NEUMANN and n <= self.reach:
            raise InvalidSpecError(f"{n} points cannot hold a reflected stencil of reach {self.reach}")

    def __call__(self, u: np.ndarray) -> np.ndarray:
        r = self.reach
        mode = "wrap" if self.boundary is Boundary.PERIODIC else "reflect"
        pad = np.pad(u, r, mode=mode)
        out = np.zeros(self.n)
        for m, w in zip(self.shifts, self.weights):
            out += w * pad[r + m : r + m + self.n]
        return out

    def _column(self, i: int, m: int) -> int:
        j = i + m
        if self.boundary is Boundary.PERIODIC:
            return j % self.n
        last = self.n - 1
        if j < 0:
            return -j
        if j > last:
            return 2 * last - j
        return j

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the circulant operator, indexed like ``numpy.fft.fft``."""
        if self.boundary is not Boundary.PERIODIC:
            raise InvalidSpecError("only periodic operators are circulant")
        k = np.arange(self.n)
        ph = np.exp(2j * np.pi * np.outer(k, self.shifts) / self.n)
        return ph @ self.weights

    def banded(self, scale: float) -> Tuple[np.ndarray, int]:
        """LAPACK band storage of ``I + scale * D`` (Neumann), bandwidth ``reach``."""
        b = self.reach
        ab = np.zeros((3 * b + 1, self.n))  # extra b rows for dgbtrf fill-in
        for i in range(self.n):
            ab[2 * b, i] += 1.0
            for m, w in zip(self.shifts, self.weights):
                j = self._column(i, m)
                ab[2 * b + i - j, j] += scale * w
        return ab, b


@dataclass
class AdvectConfig:
    """Parameters of one advection run.

    Attributes
    ----------
    c : float
        Celerity.
    dx, dt : float
        Grid spacing between unknowns and time step.
    t_end : float
        Final time; ``t_end / dt`` must be an integer.
    spec : SchemeSpec or str
        ``family:order`` strings are accepted.
    domain : (float, float)
        ``(x_hi - x_lo) / dx`` must be an integer.  Periodic grids hold
        ``x_lo + i dx`` for ``i < n``; Neumann grids include both ends.
    rk_order : int
        Explicit order 1..7 (ignored in implicit mode).
    ic : str, array or callable
        ``"erf"`` (periodised plateau with error-function edges),
        ``"gaussian"``, ``"bump"`` (compact C2 bump), ``"random"``, explicit
        samples, or a function of ``x``.
    ic_width : float, optional
        Edge width (erf), standard width (gaussian) or support (bump).
    ic_center : float, optional
    boundary : Boundary or str
    time_mode : {"explicit", "implicit-euler"}
    snapshot_times : sequence of float, optional
        Defaults to ``(0, t_end)``.
    truncation : int, optional
        Number of terms for an infinite-order spec.
    seed : int
        Seed of the ``"random"`` initial condition.
    """

    c: float
    dx: float
    dt: float
    t_end: float
    spec: Union[SchemeSpec, str]
    domain: Tuple[float, float] = (0.0, 1.0)
    rk_order: int = 3
    ic: Union[str, ArrayLike, Callable] = "gaussian"
    ic_width: Optional[float] = None
    ic_center: Optional[float] = None
    boundary: Union[Boundary, str] = Boundary.PERIODIC
    time_mode: str = "explicit"
    snapshot_times: Optional[Sequence[float]] = None
    truncation: Optional[int] = None
    seed: int = 0
    check_stability: bool = True

    def __post_init__(self):
        if isinstance(self.spec, str):
            self.spec = parse_scheme(self.spec)
        self.boundary = Boundary(self.boundary)
        if not (self.dx > 0 and self.dt > 0):
            raise InvalidSpecError("dx and dt must be positive")
        if self.t_end < 0:
            raise InvalidSpecError("t_end must be non-negative")
        if self.time_mode not in ("explicit", "implicit-euler"):
            raise InvalidSpecError("time_mode must be 'explicit' or 'implicit-euler'")
        if not 1 <= int(self.rk_order) <= 7:
            raise InvalidSpecError("rk_order must be in 1..7")
        lo, hi = self.domain
        if not hi > lo:
            raise InvalidSpecError("domain must satisfy x_lo < x_hi")
        cells = (hi - lo) / self.dx
        if abs(cells - round(cells)) > 1e-9 * max(1.0, cells):
            raise InvalidSpecError("(x_hi - x_lo) / dx must be an integer")
        steps = self.t_end / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise InvalidSpecError("t_end / dt must be an integer")

    @property
    def cells(self) -> int:
        lo, hi = self.domain
        return int(round((hi - lo) / self.dx))

    @property
    def n(self) -> int:
        return self.cells if self.boundary is Boundary.PERIODIC else self.cells + 1

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @property
    def lam(self) -> float:
        return self.c * self.dt / self.dx

    @property
    def x(self) -> np.ndarray:
        return self.domain[0] + self.dx * np.arange(self.n)


@dataclass
class Trajectory:
    """Snapshots and energy history of a run."""

    x: np.ndarray
    times: np.ndarray
    snapshots: np.ndarray
    energy_times: np.ndarray
    energy: np.ndarray
    config: Optional[AdvectConfig] = None

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[-1]


def _solver_stencil(cfg: AdvectConfig) -> Stencil:
    spec = cfg.spec
    if spec.infinite:
        if cfg.truncation is None:
            raise InvalidSpecError("infinite-order schemes need a truncation")
        st = build_stencil_truncated(spec, cfg.truncation)
    else:
        st = build_stencil(spec)
    if st.staggered:
        st = st.scaled_to_half_grid()
    return st


def initial_condition(cfg: AdvectConfig) -> np.ndarray:
    """Sample the initial condition of ``cfg`` on its grid."""
    x = cfg.x
    lo, hi = cfg.domain
    length = hi - lo
    ic = cfg.ic
    if callable(ic):
        return np.asarray(ic(x), dtype=float)
    if not isinstance(ic, str):
        u = np.asarray(ic, dtype=float)
        if u.shape != x.shape:
            raise InvalidSpecError(f"initial samples must have {x.size} values")
        return u.copy()
    centre = 0.5 * (lo + hi) if cfg.ic_center is None else cfg.ic_center
    periodic = cfg.boundary is Boundary.PERIODIC
    images = (-2, -1, 0, 1, 2) if periodic else (0,)
    name = ic.lower()
    if name == "erf":
        s = 1.0 if cfg.ic_width is None else cfg.ic_width
        a = length / 4.0
        f = lambda y: 0.5 * (erf((y + a) / s) - erf((y - a) / s))
    elif name == "gaussian":
        s = length / 20.0 if cfg.ic_width is None else cfg.ic_width
        f = lambda y: np.exp(-((y / s) ** 2))
    elif name == "bump":
        s = 0.1 * length if cfg.ic_width is None else cfg.ic_width
        f = lambda y: np.where(np.abs(y) < s / 2, (1.0 - (2.0 * y / s) ** 2) ** 3, 0.0)
    elif name == "random":
        rng = np.random.default_rng(cfg.seed)
        return rng.standard_normal(x.size)
    else:
        raise InvalidSpecError(f"unknown initial condition {ic!r}")
    return sum(f(x - centre + k * length) for k in images)


def _snapshot_steps(cfg: AdvectConfig) -> List[int]:
    times = (0.0, cfg.t_end) if cfg.snapshot_times is None else cfg.snapshot_times
    out = []
    for t in times:
        s = t / cfg.dt
        k = int(round(s))
        if abs(s - k) > 1e-9 * max(1.0, s) or not 0 <= k <= cfg.steps:
            raise InvalidSpecError(f"snapshot time {t} is not a step of the run")
        out.append(k)
    return out


def _warn_if_unstable(cfg: AdvectConfig) -> None:
    from .stability import is_stable

    if cfg.c == 0 or cfg.spec.infinite:
        return
    if not is_stable(cfg.lam, cfg.spec, cfg.rk_order):
        warnings.warn(
            f"lambda = {cfg.lam:.4g} is outside the stable range of {cfg.spec.label} with RK{cfg.rk_order}",
            RuntimeWarning,
            stacklevel=3,
        )


def advect(cfg: AdvectConfig) -> Trajectory:
    """Integrate the advection equation.

    Returns
    -------
    Trajectory
        Snapshots at ``cfg.snapshot_times`` and the energy after every step.

    Raises
    ------
    SolverError
        Singular implicit system; ``exc.pivot`` holds the row (Neumann, 1-based
        as reported by LAPACK) or the Fourier mode index (periodic).
    """
    stencil = _solver_stencil(cfg)
    op = SpatialOperator(stencil, cfg.n, cfg.dx, cfg.boundary)
    u = initial_condition(cfg)
    snap_steps = _snapshot_steps(cfg)
    wanted: Dict[int, List[int]] = {}
    for i, k in enumerate(snap_steps):
        wanted.setdefault(k, []).append(i)
    snaps = np.empty((len(snap_steps), cfg.n))
    energies = np.empty(cfg.steps + 1)

    def record(step: int, u: np.ndarray):
        energies[step] = energy(u, cfg.dx)
        for i in wanted.get(step, ()):
            snaps[i] = u

    record(0, u)
    dt, c = cfg.dt, cfg.c
    if cfg.time_mode == "explicit":
        if cfg.check_stability:
            _warn_if_unstable(cfg)
        p = int(cfg.rk_order)
        for step in range(1, cfg.steps + 1):
            if c != 0:
                term = u
                acc = u.copy()
                for m in range(1, p + 1):
                    term = (-c * dt / m) * op(term)
                    acc += term
                u = acc
            record(step, u)
    else:
        solve = _implicit_solver(op, c * dt)
        for step in range(1, cfg.steps + 1):
            u = solve(u)
            record(step, u)
    times = np.array([k * cfg.dt for k in snap_steps])
    return Trajectory(cfg.x, times, snaps, dt * np.arange(cfg.steps + 1), energies, cfg)


def _implicit_solver(op: SpatialOperator, cdt: float) -> Callable[[np.ndarray], np.ndarray]:
    """Factor ``I + c dt D`` once and return a solve function."""
    if op.boundary is Boundary.PERIODIC:
        eig = 1.0 + cdt * op.eigenvalues()
        bad = np.flatnonzero(np.abs(eig) <= 1e-14)
        if bad.size:
            raise SolverError(f"implicit matrix is singular at Fourier mode {bad[0]}", pivot=int(bad[0]))
        return lambda u: np.real(np.fft.ifft(np.fft.fft(u) / eig))
    ab, b = op.banded(cdt)
    lu, piv, info = lapack.dgbtrf(ab, b, b)
    if info > 0:
        raise SolverError(f"implicit matrix is singular at pivot {info}", pivot=int(info))
    if info < 0:
        raise SolverError(f"dgbtrf rejected argument {-info}")

    def solve(u):
        x, inf2 = lapack.dgbtrs(lu, b, b, u, piv)
        if inf2 != 0:
            raise SolverError(f"dgbtrs failed with info {inf2}")
        return x

    return solve


# ---------------------------------------------------------------------------
# experiments

@dataclass
class EnergyComparison:
    """Energy lost between ``t = 0`` and ``t_end`` by each scheme."""

    losses: Dict[str, float]
    trajectories: Dict[str, Trajectory] = field(repr=False, default_factory=dict)


# Replicated diffusion test: plateau with error-function edges on [-20, 20].
ENERGY_SCHEMES = (
    ("centred", "centred:2"),
    ("zigzag", "zigzag-forward-first:2"),
    ("upwind", "forward:2"),
)


def energy_comparison(
    c: float = -0.1,
    dx: float = 0.01,
    dt: float = 0.05,
    t_end: float = 15.0,
    domain: Tuple[float, float] = (-20.0, 20.0),
    rk_order: int = 3,
    ic_width: float = 1.0,
) -> EnergyComparison:
    """Energy losses ``E(0) - E(t_end)`` of second-order centred, zigzag and upwind schemes.

    With ``c < 0`` the upwind direction is forward, so the zigzag scheme is
    the forward-first variant and the upwind scheme the forward one.
    """
    losses, trajs = {}, {}
    for name, scheme in ENERGY_SCHEMES:
        spec = parse_scheme(scheme)
        if c > 0:
            spec = spec.mirrored()
        cfg = AdvectConfig(
            c=c, dx=dx, dt=dt, t_end=t_end, spec=spec, domain=domain, rk_order=rk_order,
            ic="erf", ic_width=ic_width, boundary="periodic",
        )
        tr = advect(cfg)
        trajs[name] = tr
        losses[name] = float(tr.energy[0] - tr.energy[-1])
    return EnergyComparison(losses, trajs)


GHOST_TIMES = (0.0, 0.5, 1.0, 1.5, 2.0, 4.0)


@dataclass
class GhostResult:
    scheme: str
    metric: float
    trajectory: Trajectory


def ghost_experiment(
    spec: Union[SchemeSpec, str] = "zigzag-backward-first:2",
    points: int = 1000,
    snapshot_times: Sequence[float] = GHOST_TIMES,
    c: float = 1.0,
    lam: float = 0.1,
    domain: Tuple[float, float] = (0.0, 1.0),
    ic_width: float = 0.1,
    ic_center: float = 0.5,
) -> GhostResult:
    """Advect a compact bump out through a Neumann boundary with implicit Euler.

    The metric ``M = max|u(t_last)| / max|u(0)|`` is small when the wave
    leaves the domain cleanly and stays large when a spurious wave survives.
    """
    if isinstance(spec, str):
        spec = parse_scheme(spec)
    lo, hi = domain
    dx = (hi - lo) / (points - 1)
    dt = lam * dx / abs(c)
    t_end = max(snapshot_times)
    steps = int(round(t_end / dt))
    dt = t_end / steps
    times = [dt * round(t / dt) for t in snapshot_times]
    cfg = AdvectConfig(
        c=c, dx=dx, dt=dt, t_end=t_end, spec=spec, domain=domain, ic="bump",
        ic_width=ic_width, ic_center=ic_center, boundary="neumann",
        time_mode="implicit-euler", snapshot_times=times,
    )
    tr = advect(cfg)
    m = float(np.max(np.abs(tr.snapshots[-1])) / np.max(np.abs(tr.snapshots[0])))
    return GhostResult(spec.label, m, tr)


# ---------------------------------------------------------------------------
# writers

def write_snapshots_csv(stream, traj: Trajectory) -> None:
    """Write ``t,x,u`` rows."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["t", "x", "u"])
    for t, u in zip(traj.times, traj.snapshots):
        for x, v in zip(traj.x, u):
            w.writerow([repr(float(t)), repr(float(x)), repr(float(v))])


def write_energy_csv(stream, traj: Trajectory) -> None:
    """Write ``t,E`` rows."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["t", "E"])
    for t, e in zip(traj.energy_times, traj.energy):
        w.writerow([repr(float(t)), repr(float(e))])


def ghost_json(result: GhostResult) -> str:
    return json.dumps(
        {"scheme": result.scheme, "M": result.metric, "snapshot_times": [float(t) for t in result.trajectory.times]}
    )
