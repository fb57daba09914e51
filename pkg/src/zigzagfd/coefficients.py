"""Coefficient families for quotient-form first-derivative schemes.

Every scheme in this package approximates ``f'`` as a weighted sum of
first-order quotients::

    f'(x_i) ~ sum_j  c_j * (f(x_i + o_j dx) - f(x_i - o'_j dx)) / ((o_j + o'_j) dx)

with family-specific offsets.  The weights ``c_j`` are the coefficients
generated here.  They are always exact :class:`fractions.Fraction` values
for finite orders, and every finite set satisfies the consistency sum
``sum_j c_j == 1``.

Families
--------
centred
    ``C_M^j = 2 (-1)^(j+1) (M!)^2 / ((M+j)! (M-j)!)`` with ``M = order / 2``.
centred-staggered
    ``(-1)^(j+1) 4^(1-2M) ((2M)!)^2 / ((2j-1) (M!)^2 (M+j-1)! (M-j)!)``.
forward, backward
    Signed binomials ``(-1)^(j+1) binom(N, j)``.
zigzag-forward-first, zigzag-backward-first
    Four-case closed formula, see :func:`zigzag_coeffs`.
zigzag-staggered-forward-first, zigzag-staggered-backward-first
    See :func:`staggered_zigzag_coeffs`.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .exceptions import (
    CoefficientOverflowError,
    InvalidOrderError,
    SingularSystemError,
    UnsupportedLimitError,
)

__all__ = [
    "INF",
    "Family",
    "CoefficientSet",
    "coefficient_set",
    "centred_coeffs",
    "staggered_centred_coeffs",
    "forward_coeffs",
    "backward_coeffs",
    "zigzag_coeffs",
    "staggered_zigzag_coeffs",
    "coeff_float_log1p",
    "coeff_float_gammaln",
    "coeff_float_direct",
    "coeff_float",
    "vandermonde_weights",
    "fornberg_weights",
    "quotient_offsets",
    "recombine",
    "write_coefficients_csv",
    "write_magnitude_csv",
]

INF = math.inf

Number = Union[Fraction, float]


class Family(str, enum.Enum):
    """Scheme families.  The value is the canonical command-line name."""

    CENTRED = "centred"
    CENTRED_STAGGERED = "centred-staggered"
    FORWARD = "forward"
    BACKWARD = "backward"
    ZIGZAG_FORWARD_FIRST = "zigzag-forward-first"
    ZIGZAG_BACKWARD_FIRST = "zigzag-backward-first"
    ZIGZAG_STAGGERED_FORWARD_FIRST = "zigzag-staggered-forward-first"
    ZIGZAG_STAGGERED_BACKWARD_FIRST = "zigzag-staggered-backward-first"

    @classmethod
    def parse(cls, name: Union[str, "Family"], staggered: bool = False) -> "Family":
        """Resolve a family name, accepting short aliases.

        ``zigzag`` means forward-first, ``upwind`` is not accepted because its
        direction depends on the celerity.  With ``staggered=True`` the
        collocated name is mapped to its staggered sibling.
        """
        if isinstance(name, Family):
            fam = name
        else:
            key = str(name).strip().lower().replace("_", "-")
            key = _ALIASES.get(key, key)
            try:
                fam = cls(key)
            except ValueError:
                raise InvalidOrderError(f"unknown family {name!r}") from None
        if staggered and not fam.staggered:
            try:
                fam = _STAGGERED_SIBLING[fam]
            except KeyError:
                raise InvalidOrderError(f"family {fam.value!r} has no staggered variant") from None
        return fam

    @property
    def staggered(self) -> bool:
        return self in (
            Family.CENTRED_STAGGERED,
            Family.ZIGZAG_STAGGERED_FORWARD_FIRST,
            Family.ZIGZAG_STAGGERED_BACKWARD_FIRST,
        )

    @property
    def centred(self) -> bool:
        return self in (Family.CENTRED, Family.CENTRED_STAGGERED)

    @property
    def zigzag(self) -> bool:
        return self.value.startswith("zigzag")

    @property
    def backward(self) -> bool:
        """True for the families whose stencil is the mirror image of a forward one."""
        return self in (
            Family.BACKWARD,
            Family.ZIGZAG_BACKWARD_FIRST,
            Family.ZIGZAG_STAGGERED_BACKWARD_FIRST,
        )

    @property
    def mirror(self) -> "Family":
        """The family with all offsets negated (centred families map to themselves)."""
        return _MIRROR.get(self, self)


_ALIASES = {
    "center": "centred",
    "centered": "centred",
    "centred-stag": "centred-staggered",
    "centered-staggered": "centred-staggered",
    "staggered-centred": "centred-staggered",
    "staggered-centered": "centred-staggered",
    "zigzag": "zigzag-forward-first",
    "zigzag-backward": "zigzag-backward-first",
    "zigzag-forward": "zigzag-forward-first",
    "zigzag-staggered": "zigzag-staggered-forward-first",
    "zigzag-staggered-backward": "zigzag-staggered-backward-first",
    "staggered-zigzag": "zigzag-staggered-forward-first",
}

_STAGGERED_SIBLING = {
    Family.CENTRED: Family.CENTRED_STAGGERED,
    Family.ZIGZAG_FORWARD_FIRST: Family.ZIGZAG_STAGGERED_FORWARD_FIRST,
    Family.ZIGZAG_BACKWARD_FIRST: Family.ZIGZAG_STAGGERED_BACKWARD_FIRST,
}

_MIRROR = {
    Family.FORWARD: Family.BACKWARD,
    Family.BACKWARD: Family.FORWARD,
    Family.ZIGZAG_FORWARD_FIRST: Family.ZIGZAG_BACKWARD_FIRST,
    Family.ZIGZAG_BACKWARD_FIRST: Family.ZIGZAG_FORWARD_FIRST,
    Family.ZIGZAG_STAGGERED_FORWARD_FIRST: Family.ZIGZAG_STAGGERED_BACKWARD_FIRST,
    Family.ZIGZAG_STAGGERED_BACKWARD_FIRST: Family.ZIGZAG_STAGGERED_FORWARD_FIRST,
}


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients ``c_1 .. c_N`` of one scheme.

    Finite orders store exact rationals in ``values``.  Infinite orders store
    a ``rule`` mapping ``j >= 1`` to a value instead; truncation is left to
    the caller.

    Attributes
    ----------
    family : Family
    order : int or float
        Formal order of accuracy, or ``math.inf``.
    values : tuple of Fraction
        Empty for infinite order.
    rule : callable, optional
        ``j -> coefficient`` for infinite order.  Returns a ``Fraction`` when
        the limit is rational and a ``float`` otherwise.
    """

    family: Family
    order: Union[int, float]
    values: Tuple[Fraction, ...] = ()
    rule: Optional[Callable[[int], Number]] = field(default=None, compare=False)

    @property
    def infinite(self) -> bool:
        return self.order == INF

    @property
    def float_values(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.values)

    def __len__(self) -> int:
        if self.infinite:
            raise TypeError("infinite-order coefficient set has no length")
        return len(self.values)

    def __iter__(self):
        if self.infinite:
            raise TypeError("iterate over take(J) for an infinite-order set")
        return iter(self.values)

    def coefficient(self, j: int) -> Number:
        """Return ``c_j`` (1-based)."""
        if j < 1:
            raise IndexError("coefficient index starts at 1")
        if self.infinite:
            return self.rule(j)
        return self.values[j - 1]

    def take(self, terms: int) -> Tuple[Number, ...]:
        """First ``terms`` coefficients (all of them when finite and shorter)."""
        if self.infinite:
            return tuple(self.rule(j) for j in range(1, terms + 1))
        return self.values[:terms]


# ---------------------------------------------------------------------------
# validation helpers

def _check_order(order, *, even: bool = False, allow_inf: bool = False) -> Union[int, float]:
    if isinstance(order, float) and math.isinf(order):
        if order > 0 and allow_inf:
            return INF
        raise UnsupportedLimitError("infinite order is not available for this family")
    if isinstance(order, bool) or int(order) != order:
        raise InvalidOrderError(f"order must be an integer, got {order!r}")
    order = int(order)
    if order < 1:
        raise InvalidOrderError(f"order must be positive, got {order}")
    if even and order % 2:
        raise InvalidOrderError(f"centred families need an even order, got {order}")
    return order


def _floor2(a: int) -> int:
    return a // 2


def _ceil2(a: int) -> int:
    return -((-a) // 2)


def _rising(a: int, k: int) -> int:
    """``a (a+1) ... (a+k-1)``."""
    out = 1
    for i in range(k):
        out *= a + i
    return out


# ---------------------------------------------------------------------------
# closed formulas

def centred_coeffs(order) -> CoefficientSet:
    """Centred coefficients ``C_M^j``, ``M = order / 2``.

    The factorial ratio ``(M!)^2 / ((M+j)! (M-j)!)`` is accumulated as the
    running product ``prod_{l<=j} (M-j+l)/(M+l)``, updated one factor pair at
    a time as ``j`` increases.

    Parameters
    ----------
    order : int or math.inf
        Even formal order.  ``inf`` gives the rule ``2 (-1)^(j+1)``.

    Examples
    --------
    >>> centred_coeffs(4).values
    (Fraction(4, 3), Fraction(-1, 3))
    """
    order = _check_order(order, even=True, allow_inf=True)
    if order == INF:
        return CoefficientSet(Family.CENTRED, INF, rule=lambda j: Fraction(2 * (-1) ** (j + 1)))
    m = order // 2
    out = []
    ratio = Fraction(1)
    for j in range(1, m + 1):
        # r_j = r_{j-1} (M - j + 1) / (M + j)
        ratio *= Fraction(m - j + 1, m + j)
        out.append(2 * (-1) ** (j + 1) * ratio)
    return CoefficientSet(Family.CENTRED, order, tuple(out))


def staggered_centred_coeffs(order) -> CoefficientSet:
    """Staggered centred coefficients for half-integer nodes ``+-(j - 1/2)``.

    Uses ``4^(1-2M) ((2M)!)^2 / ((M!)^3 (M-1)!) = 4 M binom(2M, M)^2 / 16^M``
    for ``j = 1`` and the ratio ``(M-j)/(M+j)`` between consecutive ``j``.
    The infinite-order rule ``4 (-1)^(j+1) / ((2j-1) pi)`` is irrational and
    returned as float.
    """
    order = _check_order(order, even=True, allow_inf=True)
    if order == INF:
        return CoefficientSet(
            Family.CENTRED_STAGGERED,
            INF,
            rule=lambda j: 4.0 * (-1) ** (j + 1) / ((2 * j - 1) * math.pi),
        )
    m = order // 2
    base = Fraction(4 * m * math.comb(2 * m, m) ** 2, 16 ** m)
    out = []
    ratio = Fraction(1)
    for j in range(1, m + 1):
        if j > 1:
            ratio *= Fraction(m - j + 1, m + j - 1)
        out.append((-1) ** (j + 1) * base * ratio / (2 * j - 1))
    return CoefficientSet(Family.CENTRED_STAGGERED, order, tuple(out))


def forward_coeffs(order, family: Family = Family.FORWARD) -> CoefficientSet:
    """One-sided coefficients ``(-1)^(j+1) binom(N, j)``.

    Examples
    --------
    >>> forward_coeffs(3).values
    (Fraction(3, 1), Fraction(-3, 1), Fraction(1, 1))
    """
    order = _check_order(order)
    vals = tuple(Fraction((-1) ** (j + 1) * math.comb(order, j)) for j in range(1, order + 1))
    return CoefficientSet(family, order, vals)


def backward_coeffs(order) -> CoefficientSet:
    """Same values as :func:`forward_coeffs`; only the stencil direction differs."""
    return forward_coeffs(order, Family.BACKWARD)


def _zigzag_infinite(j: int) -> Fraction:
    if j == 1:
        return Fraction(1)
    ell = j // 2
    central = Fraction(math.comb(2 * ell, ell), 4 ** ell)
    val = (-1) ** (ell + 1) * central
    return val if j % 2 == 0 else -val


def _zigzag_value(n: int, j: int) -> Fraction:
    # The common factor floor(N/2) ceil((N+1)/2) appears in every j >= 2 branch.
    common = _floor2(n) * _ceil2(n + 1)
    if j == 1:
        return Fraction(2 * _floor2(n + 1), n + 1)
    if j == 2:
        # 2 N! / (N+2)!
        return Fraction(2 * common, (n + 1) * (n + 2))
    if j % 2:
        h = (j - 1) // 2
        # (j-2)! N! / (h! (N+j)! (h-1)!)
        val = Fraction(
            (-1) ** (j // 2) * (2 * n + j - 2 - (j + 2) * (-1) ** n) * math.factorial(j - 2),
            math.factorial(h) * math.factorial(h - 1) * _rising(n + 1, j),
        )
        val *= common
        for ell in range(1, h):
            val *= _floor2(n - 2 * ell - 1) * _ceil2(n + 2 * ell + 1)
        return val
    h = j // 2
    # j! N! / ((h!)^2 (N+j)!)
    val = Fraction(
        (-1) ** (1 + h) * math.factorial(j),
        math.factorial(h) ** 2 * _rising(n + 1, j),
    )
    val *= common * _ceil2(n - 3) * _ceil2(n + 3)
    for ell in range(1, h - 1):
        # floor on both factors; see the project notes on the printed variant
        val *= _floor2(n - 2 * ell - 2) * _floor2(n + 2 * ell + 4)
    return val


def zigzag_coeffs(order, family: Family = Family.ZIGZAG_FORWARD_FIRST) -> CoefficientSet:
    """Zigzag coefficients ``Z_N^j`` for offsets ``+1, -2, +3, -4, ...``.

    Finite orders use the four-branch closed formula (``j = 1``, ``j = 2``,
    odd ``j >= 3``, even ``j >= 4``).  Infinite order returns the rule
    ``Z^1 = 1`` and ``Z^(2l) = -Z^(2l+1) = (-1)^(l+1) binom(2l, l) / 4^l``.

    Parameters
    ----------
    order : int or math.inf
    family : Family
        Either zigzag variant; the values are shared.

    Examples
    --------
    >>> [str(z) for z in zigzag_coeffs(5).values]
    ['1', '2/7', '-2/7', '-1/21', '1/21']
    """
    order = _check_order(order, allow_inf=True)
    if order == INF:
        return CoefficientSet(family, INF, rule=_zigzag_infinite)
    vals = tuple(_zigzag_value(order, j) for j in range(1, order + 1))
    return CoefficientSet(family, order, vals)


def staggered_zigzag_coeffs(
    order, family: Family = Family.ZIGZAG_STAGGERED_FORWARD_FIRST
) -> CoefficientSet:
    """Staggered zigzag coefficients for offsets ``+1/2, -3/2, +5/2, ...``.

    ``(-1)^ceil(1 + j/2) (2N-1)! / ((2j-1) 8^(N-1) (N-1)! floor((N+j-1)/2)! floor((N-j)/2)!)``

    Examples
    --------
    >>> staggered_zigzag_coeffs(2).values
    (Fraction(3, 4), Fraction(1, 4))
    """
    order = _check_order(order)
    n = order
    # (2N-1)! / (N-1)! = N (N+1) ... (2N-1)
    head = Fraction(_rising(n, n), 8 ** (n - 1))
    out = []
    for j in range(1, n + 1):
        sign = (-1) ** _ceil2(2 + j)
        den = (2 * j - 1) * math.factorial((n + j - 1) // 2) * math.factorial((n - j) // 2)
        out.append(sign * head / den)
    return CoefficientSet(family, n, tuple(out))


def coefficient_set(family: Union[str, Family], order) -> CoefficientSet:
    """Dispatch to the generator of ``family``."""
    fam = Family.parse(family)
    if fam is Family.CENTRED:
        return centred_coeffs(order)
    if fam is Family.CENTRED_STAGGERED:
        return staggered_centred_coeffs(order)
    if fam in (Family.FORWARD, Family.BACKWARD):
        return forward_coeffs(order, fam)
    if fam in (Family.ZIGZAG_FORWARD_FIRST, Family.ZIGZAG_BACKWARD_FIRST):
        return zigzag_coeffs(order, fam)
    return staggered_zigzag_coeffs(order, fam)


# ---------------------------------------------------------------------------
# floating-point paths for the centred families

def _centred_half_width(family, order, j) -> Tuple[Family, int]:
    fam = Family.parse(family)
    if not fam.centred:
        raise InvalidOrderError("float paths are defined for the centred families only")
    order = _check_order(order, even=True)
    m = order // 2
    if not 1 <= j <= m:
        raise IndexError(f"j must lie in 1..{m}, got {j}")
    return fam, m


def coeff_float_log1p(family, order: int, j: int) -> float:
    """Centred coefficient through sums of ``log1p`` terms.

    The factorial ratio is ``prod_{l=1}^{j} (1 - j/(M+l))``, so its logarithm
    is a sum of ``log1p(-j/(M+l))`` and cannot overflow.  The staggered
    prefactor ``binom(2M, M) / 4^M = prod_{l<=M} (1 - 1/(2l))`` is handled the
    same way.
    """
    fam, m = _centred_half_width(family, order, j)
    sign = 1.0 if j % 2 else -1.0
    if fam is Family.CENTRED:
        s = math.fsum(math.log1p(-j / (m + ell)) for ell in range(1, j + 1))
        return 2.0 * sign * math.exp(s)
    s = 2.0 * math.fsum(math.log1p(-1.0 / (2 * ell)) for ell in range(1, m + 1))
    s += math.fsum(math.log1p(-2.0 * ell / (m + ell)) for ell in range(1, j))
    return sign * 4.0 * m * math.exp(s) / (2 * j - 1)


def coeff_float_gammaln(family, order: int, j: int) -> float:
    """Centred coefficient through log-gamma differences.

    The centred value is ``exp(2 lgamma(M+1) - lgamma(M+j+1) - lgamma(M-j+1))``
    and stays finite.  The staggered value exponentiates the log of
    ``((2M)!)^2 / ((M!)^2 (M+j-1)! (M-j)!)`` before scaling by ``4^(1-2M)``,
    which leaves the double range once ``M`` exceeds about 256.

    Raises
    ------
    CoefficientOverflowError
        When an intermediate quantity overflows.
    """
    fam, m = _centred_half_width(family, order, j)
    sign = 1.0 if j % 2 else -1.0
    lg = math.lgamma
    try:
        if fam is Family.CENTRED:
            return 2.0 * sign * math.exp(2.0 * lg(m + 1) - lg(m + j + 1) - lg(m - j + 1))
        big = math.exp(2.0 * lg(2 * m + 1) - 2.0 * lg(m + 1) - lg(m + j) - lg(m - j + 1))
        return sign * big / 4.0 ** (2 * m - 1) / (2 * j - 1)
    except OverflowError as exc:
        raise CoefficientOverflowError(
            f"log-gamma path overflows for {fam.value} order {order}"
        ) from exc


def _float_factorial(n: int) -> float:
    acc = 1.0
    for k in range(2, n + 1):
        acc *= k
    if math.isinf(acc):
        raise OverflowError(f"{n}! exceeds the double range")
    return acc


def coeff_float_direct(family, order: int, j: int) -> float:
    """Centred coefficient from double-precision factorials.

    Kept as the baseline of the three float paths; it overflows as soon as a
    factorial passes ``170!``.
    """
    fam, m = _centred_half_width(family, order, j)
    sign = 1.0 if j % 2 else -1.0
    f = _float_factorial
    try:
        if fam is Family.CENTRED:
            return 2.0 * sign * f(m) ** 2 / (f(m + j) * f(m - j))
        num = f(2 * m) ** 2
        if math.isinf(num):
            raise OverflowError("numerator overflows")
        return sign * num / (4.0 ** (2 * m - 1) * (2 * j - 1) * f(m) ** 2 * f(m + j - 1) * f(m - j))
    except OverflowError as exc:
        raise CoefficientOverflowError(
            f"direct factorial path overflows for {fam.value} order {order}"
        ) from exc


_FLOAT_METHODS = {
    "log1p": coeff_float_log1p,
    "gammaln": coeff_float_gammaln,
    "direct": coeff_float_direct,
}


def coeff_float(family, order: int, j: int, method: str = "log1p") -> float:
    """Dispatch to one of the float paths by name."""
    try:
        fn = _FLOAT_METHODS[method]
    except KeyError:
        raise InvalidOrderError(f"unknown float method {method!r}") from None
    return fn(family, order, j)


# ---------------------------------------------------------------------------
# independent oracle

def _as_fractions(offsets: Iterable) -> List[Fraction]:
    xs = [Fraction(x) for x in offsets]
    if len(set(xs)) != len(xs):
        raise SingularSystemError("offsets must be distinct")
    return xs


def vandermonde_weights(
    offsets: Sequence, derivative: int = 1, accuracy_conditions: Optional[int] = None
) -> List[Fraction]:
    """Exact nodal weights from the moment (Vandermonde) system.

    Solves ``sum_k w_k x_k^p = d! delta_{p,d}`` for ``p = 0 .. m-1`` with the
    O(m^2) Bjorck-Pereyra elimination, in exact rational arithmetic.

    Parameters
    ----------
    offsets : sequence of rational-like
        Distinct node positions in units of the grid spacing.
    derivative : int
        Derivative order ``d``, must satisfy ``d < m``.
    accuracy_conditions : int, optional
        Number of moment conditions; must equal ``len(offsets)`` when given.

    Returns
    -------
    list of Fraction
        Weights in the order of ``offsets``.

    Raises
    ------
    SingularSystemError
        Duplicate offsets.

    Examples
    --------
    >>> [str(w) for w in vandermonde_weights([-1, 0, 1])]
    ['-1/2', '0', '1/2']
    """
    xs = _as_fractions(offsets)
    m = len(xs)
    if accuracy_conditions is not None and accuracy_conditions != m:
        raise ValueError("accuracy_conditions must equal the number of offsets")
    if not 0 <= derivative < m:
        raise ValueError(f"derivative must lie in 0..{m - 1}")
    n = m - 1
    b = [Fraction(0)] * m
    b[derivative] = Fraction(math.factorial(derivative))
    for k in range(n):
        for i in range(n, k, -1):
            b[i] -= xs[k] * b[i - 1]
    for k in range(n - 1, -1, -1):
        for i in range(k + 1, n + 1):
            b[i] /= xs[i] - xs[i - k - 1]
        for i in range(k, n):
            b[i] -= b[i + 1]
    return b


def fornberg_weights(offsets: Sequence, derivative: int = 1, x0=0) -> List[Fraction]:
    """Nodal weights by Fornberg's recursion, evaluated in exact arithmetic.

    A second, structurally different oracle for :func:`vandermonde_weights`.
    """
    xs = _as_fractions(offsets)
    x0 = Fraction(x0)
    m = len(xs) - 1
    d = derivative
    c = [[[Fraction(0)] * (m + 1) for _ in range(m + 1)] for _ in range(d + 1)]
    c[0][0][0] = Fraction(1)
    c1 = Fraction(1)
    for n in range(1, m + 1):
        c2 = Fraction(1)
        for v in range(n):
            c3 = xs[n] - xs[v]
            c2 *= c3
            for k in range(min(n, d), -1, -1):
                prev = c[k - 1][n - 1][v] if k else 0
                c[k][n][v] = ((xs[n] - x0) * c[k][n - 1][v] - k * prev) / c3
        for k in range(min(n, d), -1, -1):
            prev = c[k - 1][n - 1][n - 1] if k else 0
            c[k][n][n] = c1 / c2 * (k * prev - (xs[n - 1] - x0) * c[k][n - 1][n - 1])
        c1 = c2
    return [c[d][m][v] for v in range(m + 1)]


def quotient_offsets(family: Union[str, Family], order: int) -> List[Tuple[Fraction, Fraction]]:
    """Offset pairs ``(a_j, b_j)`` of the quotients ``(f(a_j) - f(b_j)) / (a_j - b_j)``.

    Centred families use symmetric pairs; one-sided and zigzag families pair
    each node with the evaluation point 0.
    """
    fam = Family.parse(family)
    s = -1 if fam.backward else 1
    pairs = []
    for j in range(1, order + 1):
        if fam is Family.CENTRED:
            a = Fraction(j)
            pairs.append((a, -a))
        elif fam is Family.CENTRED_STAGGERED:
            a = Fraction(2 * j - 1, 2)
            pairs.append((a, -a))
        elif fam in (Family.FORWARD, Family.BACKWARD):
            pairs.append((Fraction(s * j), Fraction(0)))
        elif fam in (Family.ZIGZAG_FORWARD_FIRST, Family.ZIGZAG_BACKWARD_FIRST):
            pairs.append((Fraction(s * j * (-1) ** (j + 1)), Fraction(0)))
        else:
            pairs.append((Fraction(s * (2 * j - 1) * (-1) ** (j + 1), 2), Fraction(0)))
    return pairs


def recombine(family: Union[str, Family], order: int, offsets: Sequence, weights: Sequence) -> List[Fraction]:
    """Recover quotient-form coefficients from nodal weights.

    For a quotient over ``(a_j, b_j)`` the node ``a_j`` carries weight
    ``c_j / (a_j - b_j)``, hence ``c_j = w(a_j) (a_j - b_j)``.
    """
    table = {Fraction(x): Fraction(w) for x, w in zip(offsets, weights)}
    fam = Family.parse(family)
    terms = order // 2 if fam.centred else order
    return [table.get(a, Fraction(0)) * (a - b) for a, b in quotient_offsets(fam, terms)]


# ---------------------------------------------------------------------------
# CSV export

def _fmt_float(x: float) -> str:
    return repr(float(x))


def write_coefficients_csv(
    stream,
    cset: CoefficientSet,
    exact: bool = True,
    float_method: Optional[str] = None,
) -> None:
    """Write ``family,order,j,numerator,denominator,float64`` rows.

    With ``exact=False`` the rational columns are left empty.  When a
    ``float_method`` is given (centred families only) the float column comes
    from that path and an overflow is written as ``overflow``.
    """
    if cset.infinite:
        raise UnsupportedLimitError("truncate an infinite-order set before export")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["family", "order", "j", "numerator", "denominator", "float64"])
    for j, v in enumerate(cset.values, start=1):
        if float_method is not None:
            try:
                fv = _fmt_float(coeff_float(cset.family, cset.order, j, float_method))
            except CoefficientOverflowError:
                fv = "overflow"
        else:
            fv = _fmt_float(v)
        num, den = (v.numerator, v.denominator) if exact else ("", "")
        w.writerow([cset.family.value, cset.order, j, num, den, fv])


def write_magnitude_csv(stream, family: Union[str, Family], max_order: int) -> None:
    """Write ``family,order,j,abs_float64`` for every admissible order up to ``max_order``."""
    fam = Family.parse(family)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["family", "order", "j", "abs_float64"])
    step = 2 if fam.centred else 1
    for n in range(step, max_order + 1, step):
        for j, v in enumerate(coefficient_set(fam, n).values, start=1):
            w.writerow([fam.value, n, j, _fmt_float(abs(v))])


def coefficients_csv_text(cset: CoefficientSet, **kw) -> str:
    buf = io.StringIO()
    write_coefficients_csv(buf, cset, **kw)
    return buf.getvalue()
