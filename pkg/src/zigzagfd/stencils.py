"""Nodal stencils built from coefficient families, and their grid application."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .coefficients import INF, CoefficientSet, Family, coefficient_set
from .exceptions import InvalidOrderError, InvalidSpecError, StencilSizeError, UnsupportedLimitError

__all__ = [
    "Boundary",
    "SchemeSpec",
    "Stencil",
    "Field1D",
    "build_stencil",
    "build_stencil_truncated",
    "apply",
    "staggered_apply",
    "parse_scheme",
    "write_stencil_csv",
]


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class SchemeSpec:
    """Identity of a spatial scheme.

    Parameters
    ----------
    family : Family or str
        Staggered families carry the stagger in their name; ``stagger`` is
        derived from it.
    order : int or math.inf
    derivative : {1, 2}
    """

    family: Family
    order: Union[int, float]
    derivative: int = 1

    def __post_init__(self):
        fam = Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        order = self.order
        if isinstance(order, str):
            order = INF if order.lower() in ("inf", "infinity", "∞") else int(order)
        if isinstance(order, float) and not math.isinf(order):
            if order != int(order):
                raise InvalidOrderError(f"order must be an integer, got {order}")
            order = int(order)
        if order != INF and (isinstance(order, bool) or order < 1):
            raise InvalidOrderError(f"order must be positive, got {order}")
        if fam.centred and order != INF and order % 2:
            raise InvalidOrderError(f"centred families need an even order, got {order}")
        if order == INF and fam in (Family.FORWARD, Family.BACKWARD):
            raise UnsupportedLimitError("one-sided coefficients diverge as the order grows")
        if self.derivative not in (1, 2):
            raise InvalidSpecError("only first and second derivatives are supported")
        if fam.staggered and self.derivative != 1:
            raise InvalidSpecError("staggered schemes support the first derivative only")
        object.__setattr__(self, "order", order)

    @property
    def stagger(self) -> str:
        return "staggered" if self.family.staggered else "collocated"

    @property
    def infinite(self) -> bool:
        return self.order == INF

    @property
    def label(self) -> str:
        o = "inf" if self.infinite else str(self.order)
        return f"{self.family.value}:{o}"

    def coefficients(self) -> CoefficientSet:
        return coefficient_set(self.family, self.order)

    def mirrored(self) -> "SchemeSpec":
        return replace(self, family=self.family.mirror)


def parse_scheme(text: str, derivative: int = 1) -> SchemeSpec:
    """Parse ``family:order`` (order may be ``inf``)."""
    try:
        fam, order = text.rsplit(":", 1)
    except ValueError:
        raise InvalidSpecError(f"scheme must look like family:order, got {text!r}") from None
    return SchemeSpec(fam, order, derivative)


@dataclass(frozen=True)
class Stencil:
    """Node offsets (units of ``dx``) with weights (units of ``dx**-d``).

    Entries are sorted by offset.  Weights are exact ``Fraction`` values except
    for truncated infinite-order staggered centred stencils, whose limit
    coefficients are irrational.
    """

    offsets: Tuple[Fraction, ...]
    weights: Tuple[Union[Fraction, float], ...]
    derivative: int = 1
    spec: Optional[SchemeSpec] = field(default=None, compare=False)

    @classmethod
    def from_mapping(cls, nodes: Dict[Fraction, Union[Fraction, float]], derivative: int, spec=None) -> "Stencil":
        items = sorted((Fraction(k), v) for k, v in nodes.items() if v != 0)
        return cls(tuple(k for k, _ in items), tuple(v for _, v in items), derivative, spec)

    def __len__(self) -> int:
        return len(self.offsets)

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    @property
    def staggered(self) -> bool:
        return any(o.denominator != 1 for o in self.offsets)

    @property
    def reach(self) -> Tuple[Fraction, Fraction]:
        """Smallest and largest offset."""
        return self.offsets[0], self.offsets[-1]

    @property
    def width(self) -> int:
        """Number of grid points spanned, endpoints included."""
        lo, hi = self.reach
        return int(math.floor(hi) - math.floor(lo)) + 1

    def moment(self, p: int) -> Union[Fraction, float]:
        """``sum_m w_m m^p / p!``."""
        return sum(w * o ** p for o, w in zip(self.offsets, self.weights)) / math.factorial(p)

    def float_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.array([float(o) for o in self.offsets]),
            np.array([float(w) for w in self.weights]),
        )

    def mirrored(self) -> "Stencil":
        """Negate all offsets; odd-derivative weights change sign."""
        s = (-1) ** self.derivative
        nodes = {-o: s * w for o, w in zip(self.offsets, self.weights)}
        spec = self.spec.mirrored() if self.spec is not None else None
        return Stencil.from_mapping(nodes, self.derivative, spec)

    def scaled_to_half_grid(self) -> "Stencil":
        """Same operator on a grid of spacing ``dx/2``: offsets double, weights scale by ``2**-d``."""
        nodes = {2 * o: w / 2 ** self.derivative for o, w in zip(self.offsets, self.weights)}
        return Stencil.from_mapping(nodes, self.derivative, self.spec)

    def quotient_form(self) -> List[Tuple[Fraction, Union[Fraction, float]]]:
        """``(offset, weight * offset)`` pairs for the non-zero nodes (display only)."""
        return [(o, w * o) for o, w in zip(self.offsets, self.weights) if o != 0]


def _sign(fam: Family) -> int:
    return -1 if fam.backward else 1


def _first_derivative_nodes(fam: Family, coeffs: Sequence) -> Dict[Fraction, Union[Fraction, float]]:
    nodes: Dict[Fraction, Union[Fraction, float]] = {}

    def add(o, w):
        nodes[o] = nodes.get(o, 0) + w

    s = _sign(fam)
    for j, c in enumerate(coeffs, start=1):
        if fam is Family.CENTRED:
            a = Fraction(j)
            add(a, c / (2 * j))
            add(-a, -c / (2 * j))
        elif fam is Family.CENTRED_STAGGERED:
            a = Fraction(2 * j - 1, 2)
            add(a, c / (2 * j - 1))
            add(-a, -c / (2 * j - 1))
        else:
            if fam in (Family.FORWARD, Family.BACKWARD):
                a = Fraction(s * j)
            elif fam in (Family.ZIGZAG_FORWARD_FIRST, Family.ZIGZAG_BACKWARD_FIRST):
                a = Fraction(s * j * (-1) ** (j + 1))
            else:
                a = Fraction(s * (2 * j - 1) * (-1) ** (j + 1), 2)
            add(a, c / a)
            add(Fraction(0), -c / a)
    return nodes


def _second_derivative_nodes(fam: Family, coeffs: Sequence) -> Dict[Fraction, Fraction]:
    nodes: Dict[Fraction, Fraction] = {}

    def add(o, w):
        nodes[o] = nodes.get(o, 0) + w

    s = _sign(fam)
    for j, c in enumerate(coeffs, start=1):
        jj = j * j
        if fam is Family.CENTRED:
            add(Fraction(j), c / jj)
            add(Fraction(-j), c / jj)
            add(Fraction(0), -2 * c / jj)
            continue
        if fam in (Family.FORWARD, Family.BACKWARD):
            a = Fraction(s * j)
        else:
            a = Fraction(s * j * (-1) ** (j + 1))
        add(2 * a, c / jj)
        add(a, -2 * c / jj)
        add(Fraction(0), c / jj)
    return nodes


def _nodes_for(spec: SchemeSpec, coeffs: Sequence):
    if spec.derivative == 1:
        return _first_derivative_nodes(spec.family, coeffs)
    return _second_derivative_nodes(spec.family, coeffs)


def build_stencil(spec: SchemeSpec) -> Stencil:
    """Nodal stencil of a finite-order scheme.

    Quotient terms ``c_j (f(a_j) - f(0)) / a_j`` put ``c_j / a_j`` on node
    ``a_j`` and the opposite on node 0.  Centred quotients use the symmetric
    pair instead.  Second derivatives combine ``f(2a) - 2 f(a) + f(0)`` over
    ``j^2`` (one-sided and zigzag) or ``f(j) - 2 f(0) + f(-j)`` (centred).

    Examples
    --------
    >>> st = build_stencil(SchemeSpec("zigzag", 2))
    >>> [(str(o), str(w)) for o, w in zip(st.offsets, st.weights)]
    [('-2', '-1/6'), ('0', '-1/2'), ('1', '2/3')]
    """
    if spec.infinite:
        raise UnsupportedLimitError("use build_stencil_truncated for infinite order")
    coeffs = spec.coefficients().values
    return Stencil.from_mapping(_nodes_for(spec, coeffs), spec.derivative, spec)


def build_stencil_truncated(spec: SchemeSpec, terms: int) -> Stencil:
    """Stencil made of the first ``terms`` infinite-order coefficients.

    This is an approximation: its symbol only converges to the infinite-order
    closed form as ``terms`` grows.
    """
    if not spec.infinite:
        raise InvalidSpecError("build_stencil_truncated expects an infinite-order spec")
    if terms < 1:
        raise InvalidSpecError("terms must be at least 1")
    fam = spec.family
    if fam.staggered and fam.zigzag:
        raise UnsupportedLimitError("no infinite-order rule for staggered zigzag")
    coeffs = spec.coefficients().take(terms)
    return Stencil.from_mapping(_nodes_for(spec, coeffs), spec.derivative, spec)


# ---------------------------------------------------------------------------
# grid application

@dataclass(frozen=True)
class Field1D:
    """Samples ``values[i] = f(origin + i * dx)`` with a boundary tag."""

    values: np.ndarray
    dx: float
    origin: float = 0.0
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if not self.dx > 0:
            raise InvalidSpecError("dx must be positive")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(self.n)

    @classmethod
    def sample(cls, f, n: int, dx: float, origin: float = 0.0, boundary="periodic") -> "Field1D":
        return cls(f(origin + dx * np.arange(n)), dx, origin, boundary)


def _pad(values: np.ndarray, left: int, right: int, boundary: Boundary, mode_neumann: str) -> np.ndarray:
    mode = "wrap" if boundary is Boundary.PERIODIC else mode_neumann
    return np.pad(values, (left, right), mode=mode)


def _integer_offsets(offsets) -> List[int]:
    out = []
    for o in offsets:
        if o.denominator != 1:
            raise InvalidSpecError("half-integer offsets need staggered_apply")
        out.append(int(o))
    return out


def _accumulate(padded: np.ndarray, shifts: Iterable[int], weights: Iterable[float], left: int, n: int) -> np.ndarray:
    out = np.zeros(n)
    for m, w in zip(shifts, weights):
        out += w * padded[left + m : left + m + n]
    return out


def apply(stencil: Stencil, field: Field1D) -> Field1D:
    """Apply a collocated stencil.

    Periodic fields wrap; Neumann fields use even reflection
    ``f[-k] = f[k]`` and ``f[n-1+k] = f[n-1-k]``.

    Raises
    ------
    StencilSizeError
        When ``field.n`` is smaller than the stencil width.
    """
    shifts = _integer_offsets(stencil.offsets)
    lo, hi = min(shifts + [0]), max(shifts + [0])
    if field.n < hi - lo + 1:
        raise StencilSizeError(f"field has {field.n} points, stencil spans {hi - lo + 1}")
    left, right = -lo, hi
    padded = _pad(field.values, left, right, field.boundary, "reflect")
    _, w = stencil.float_arrays()
    out = _accumulate(padded, shifts, w, left, field.n) / field.dx ** stencil.derivative
    return Field1D(out, field.dx, field.origin, field.boundary)


def staggered_apply(stencil: Stencil, half_field: Field1D, base_field: Optional[Field1D] = None) -> Field1D:
    """Apply a stencil with half-integer offsets.

    ``half_field`` holds ``f`` at ``x_i + dx/2``; the result lives at
    ``x_i = half_field.origin - dx/2 + i dx``.  Integer offsets (the zero node
    of the staggered zigzag schemes) read ``base_field``, which samples ``f``
    on the output grid.

    With periodic boundaries both grids have ``n`` points.  With Neumann
    boundaries the output grid has ``n + 1`` nodes enclosing the ``n``
    half-grid points, and both grids are reflected about the end nodes.
    """
    dx = half_field.dx
    bnd = half_field.boundary
    n_half = half_field.n
    n_out = n_half if bnd is Boundary.PERIODIC else n_half + 1
    half_shift, half_w, int_shift, int_w = [], [], [], []
    for o, w in zip(stencil.offsets, stencil.weights):
        if o.denominator == 1:
            int_shift.append(int(o))
            int_w.append(float(w))
        elif o.denominator == 2:
            half_shift.append(int(math.floor(o)))
            half_w.append(float(w))
        else:
            raise InvalidSpecError(f"unsupported offset {o}")
    lo = min(half_shift + int_shift + [0])
    hi = max(half_shift + int_shift + [0])
    if n_half < hi - lo + 1:
        raise StencilSizeError(f"field has {n_half} points, stencil spans {hi - lo + 1}")
    left, right = -lo, hi
    padded = _pad(half_field.values, left, right + (n_out - n_half), bnd, "symmetric")
    out = _accumulate(padded, half_shift, half_w, left, n_out)
    if int_shift:
        if base_field is None:
            raise InvalidSpecError("this stencil has integer nodes; pass base_field")
        if base_field.n != n_out:
            raise StencilSizeError(f"base_field must have {n_out} points")
        bp = _pad(base_field.values, left, right, bnd, "reflect")
        out += _accumulate(bp, int_shift, int_w, left, n_out)
    return Field1D(out / dx ** stencil.derivative, dx, half_field.origin - dx / 2, bnd)


def write_stencil_csv(stream, stencil: Stencil) -> None:
    """Write ``family,order,derivative,offset_num,offset_den,weight_num,weight_den,weight_float``."""
    spec = stencil.spec
    fam = spec.family.value if spec else ""
    order = ("inf" if spec.infinite else spec.order) if spec else ""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["family", "order", "derivative", "offset_num", "offset_den", "weight_num", "weight_den", "weight_float"])
    for o, wt in zip(stencil.offsets, stencil.weights):
        if isinstance(wt, Fraction):
            wn, wd = wt.numerator, wt.denominator
        else:
            wn, wd = "", ""
        w.writerow([fam, order, stencil.derivative, o.numerator, o.denominator, wn, wd, repr(float(wt))])
