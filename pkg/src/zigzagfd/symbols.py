"""Fourier symbols (sigma-factors) of the difference operators.

For a first-derivative stencil with weights ``w_m`` the symbol is

    sigma(kappa) = sum_m w_m exp(i pi kappa m) / (i pi kappa),

so that the exact derivative has ``sigma == 1``.  ``kappa = k dx / pi`` is
the wavenumber scaled by the Nyquist value.
"""

from __future__ import annotations

import csv
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .coefficients import INF, Family, centred_coeffs, forward_coeffs, zigzag_coeffs
from .exceptions import InvalidSpecError, UnsupportedLimitError
from .stencils import SchemeSpec, Stencil, build_stencil, build_stencil_truncated

__all__ = [
    "StencilSymbol",
    "symbol_for_spec",
    "sigma_generic",
    "sigma_centred",
    "sigma_centred_higher",
    "sigma_forward_backward",
    "sigma_zigzag",
    "sigma_zigzag_infinite",
    "sigma_zigzag_infinite_series",
    "sigma",
    "write_sigma_csv",
]

_EPS = np.finfo(float).eps
# Below this value of |theta| * max|offset| the Taylor series is used.
_TAYLOR_RADIUS = 0.5
_TAYLOR_TERMS = 40


def _sinpi(x: np.ndarray) -> np.ndarray:
    """``sin(pi x)`` with exact zeros at integers."""
    r = x - 2.0 * np.round(0.5 * x)  # r in [-1, 1]
    out = np.sin(np.pi * r)
    out[r == np.round(r)] = 0.0
    return out


def _cospi(x: np.ndarray) -> np.ndarray:
    """``cos(pi x)`` with exact values at half-integers."""
    r = x - 2.0 * np.round(0.5 * x)
    out = np.cos(np.pi * r)
    out[np.abs(r) == 0.5] = 0.0
    out[r == 0] = 1.0
    out[np.abs(r) == 1] = -1.0
    return out


def _sinc(x: np.ndarray) -> np.ndarray:
    """Normalised ``sin(pi x) / (pi x)`` with exact zeros at non-zero integers."""
    x = np.asarray(x, dtype=float)
    out = np.ones(x.shape)
    nz = x != 0
    out[nz] = _sinpi(x[nz]) / (np.pi * x[nz])
    return out


def _as_array(kappa) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(kappa, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _ret(values: np.ndarray, scalar: bool):
    return values[0] if scalar else values


class StencilSymbol:
    """Accurate evaluator of ``S(theta) = sum_m w_m (exp(i theta m) - 1)``.

    ``S = i theta sigma``.  The weights are split exactly into the even part
    ``a_m = w_m + w_-m`` and odd part ``b_m = w_m - w_-m`` (``m > 0``), giving

        Re S = -2 sum a_m sin^2(theta m / 2),    Im S = sum b_m sin(theta m).

    Purely antisymmetric stencils therefore have ``Re S == 0`` exactly.  Near
    ``theta = 0`` a Taylor series built from exact moments keeps full
    relative accuracy.

    Parameters
    ----------
    stencil : Stencil
        First-derivative stencil.
    """

    def __init__(self, stencil: Stencil):
        if stencil.derivative != 1:
            raise InvalidSpecError("symbols are defined for first-derivative stencils")
        self.stencil = stencil
        table = dict(zip(stencil.offsets, stencil.weights))
        pos = sorted({abs(o) for o in stencil.offsets if o != 0})
        a, b = [], []
        for m in pos:
            wp, wm = table.get(m, 0), table.get(-m, 0)
            a.append(wp + wm)
            b.append(wp - wm)
        self.m = np.array([float(m) for m in pos])
        self.a = np.array([float(v) for v in a])
        self.b = np.array([float(v) for v in b])
        self.abs_a = float(np.sum(np.abs(self.a)))
        self.span = float(self.m.max()) if self.m.size else 0.0
        self._taylor_re: Optional[np.ndarray] = None
        self._taylor_im: Optional[np.ndarray] = None
        if stencil.exact:
            self._build_taylor()

    def _build_taylor(self):
        offs, ws = self.stencil.offsets, self.stencil.weights
        re, im = [], []
        for r in range(1, _TAYLOR_TERMS + 1):
            mu = sum(w * o ** r for o, w in zip(offs, ws)) / math.factorial(r)
            # (i theta)^r: real for even r, imaginary for odd r
            sign = (-1) ** (r // 2)
            (re if r % 2 == 0 else im).append(float(sign * mu))
        self._taylor_re = np.array(re)  # powers 2, 4, ...
        self._taylor_im = np.array(im)  # powers 1, 3, ...

    def moments(self, rmax: int):
        """Exact ``mu_r = sum w m^r``, ``r = 0 .. rmax``."""
        offs, ws = self.stencil.offsets, self.stencil.weights
        return [sum(w * o ** r for o, w in zip(offs, ws)) for r in range(rmax + 1)]

    def evaluate(self, theta) -> Tuple[np.ndarray, np.ndarray]:
        """Return ``S(theta)`` and an absolute error bound on ``Re S``.

        Parameters
        ----------
        theta : array_like
            ``pi * kappa``.
        """
        th = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.empty(th.shape, dtype=complex)
        err = np.zeros(th.shape)
        small = np.abs(th) * self.span < _TAYLOR_RADIUS
        if self._taylor_re is None:
            small[:] = False
        big = ~small
        if np.any(big):
            t = th[big][:, None]
            half = np.sin(0.5 * t * self.m)
            s2 = half * half
            re_terms = -2.0 * self.a * s2
            out[big] = re_terms.sum(axis=1) + 1j * (self.b * np.sin(t * self.m)).sum(axis=1)
            err[big] = (self.m.size + 8) * _EPS * 2.0 * (np.abs(self.a) * s2).sum(axis=1)
        if np.any(small):
            t = th[small]
            t2 = t * t
            re = np.zeros_like(t)
            for c in self._taylor_re[::-1]:
                re = re * t2 + c
            im = np.zeros_like(t)
            for c in self._taylor_im[::-1]:
                im = im * t2 + c
            out[small] = re * t2 + 1j * im * t
            err[small] = 16 * _EPS * np.abs(re * t2)
        return out, err

    def S(self, theta) -> np.ndarray:
        return self.evaluate(theta)[0]

    def sigma(self, kappa):
        """``S(pi kappa) / (i pi kappa)`` with the limit 1 at ``kappa = 0``."""
        k, scalar = _as_array(kappa)
        th = np.pi * k
        s = self.S(th)
        out = np.ones(k.shape, dtype=complex)
        nz = th != 0
        out[nz] = s[nz] / (1j * th[nz])
        return _ret(out, scalar)


def symbol_for_spec(spec: SchemeSpec, truncation: Optional[int] = None) -> StencilSymbol:
    """Symbol of a scheme; infinite orders need ``truncation``.

    Infinite orders are replaced by the finite scheme of order ``truncation``.
    """
    if spec.infinite:
        if truncation is None:
            raise UnsupportedLimitError("infinite order requires a truncation order")
        spec = SchemeSpec(spec.family, truncation, spec.derivative)
    return StencilSymbol(build_stencil(spec))


def sigma_generic(kappa, stencil: Stencil):
    """Symbol of an arbitrary first-derivative stencil.

    Examples
    --------
    >>> from zigzagfd.stencils import SchemeSpec, build_stencil
    >>> st = build_stencil(SchemeSpec("centred", 2))
    >>> abs(sigma_generic(1.0, st)) < 1e-15
    True
    """
    return StencilSymbol(stencil).sigma(kappa)


def sigma_centred(kappa, order, terms: Optional[int] = None):
    """Centred symbol ``sum_j C_j sinc(j pi kappa)`` (real).

    For ``order = inf`` without ``terms`` the limit is returned: 1 inside
    ``|kappa| < 1`` and 0 at the endpoints.  With ``terms`` the first ``terms``
    limit coefficients are summed.
    """
    k, scalar = _as_array(kappa)
    cs = centred_coeffs(order)
    if cs.infinite and terms is None:
        out = np.where(np.abs(k) < 1, 1.0, np.where(np.abs(k) == 1, 0.0, np.nan))
        return _ret(out, scalar)
    coeffs = cs.take(terms) if cs.infinite else cs.values
    c = np.array([float(v) for v in coeffs])
    j = np.arange(1, c.size + 1)
    out = _sinc(np.outer(k, j)) @ c
    out[k == 0] = 1.0
    return _ret(out, scalar)


def sigma_centred_higher(kappa, order, n: int, parity: str):
    """Centred symbol of the ``2n``-th (``parity='even'``) or ``(2n+1)``-th derivative.

    ``even``: ``sum_j C_j sinc(j pi kappa / 2)^(2n)``;
    ``odd``: ``sum_j C_j cos(j pi kappa / 2) sinc(j pi kappa / 2)^(2n+1)``.
    """
    if n < 0:
        raise InvalidSpecError("n must be non-negative")
    k, scalar = _as_array(kappa)
    c = np.array(centred_coeffs(order).float_values)
    j = np.arange(1, c.size + 1)
    x = np.outer(k, j) / 2.0
    s = _sinc(x)
    if parity == "even":
        terms = s ** (2 * n)
    elif parity == "odd":
        terms = _cospi(x) * s ** (2 * n + 1)
    else:
        raise InvalidSpecError("parity must be 'even' or 'odd'")
    return _ret(terms @ c, scalar)


def _one_sided(kappa, coeffs: Sequence[float], offsets: np.ndarray):
    k, scalar = _as_array(kappa)
    c = np.asarray(coeffs, dtype=float)
    x = np.outer(k, offsets)
    re = _sinc(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        im = np.where(x != 0, (1.0 - _cospi(x)) / (np.pi * x), 0.0)
    out = (re + 1j * im) @ c
    out[k == 0] = 1.0
    return _ret(out, scalar)


def sigma_forward_backward(kappa, order: int, direction: str = "forward"):
    """``sum_j D_j [sinc(j pi kappa) +- i (1 - cos(j pi kappa)) / (j pi kappa)]``.

    The upper sign is the forward scheme.
    """
    if direction not in ("forward", "backward"):
        raise InvalidSpecError("direction must be 'forward' or 'backward'")
    cs = forward_coeffs(order)
    j = np.arange(1, len(cs) + 1, dtype=float)
    s = 1.0 if direction == "forward" else -1.0
    return _one_sided(kappa, cs.float_values, s * j)


def sigma_zigzag(kappa, order: int, variant: str = "forward-first"):
    """``sum_j Z_j [sinc(j pi kappa) -+ (-1)^j i (1 - cos(j pi kappa)) / (j pi kappa)]``.

    The upper sign is forward-first; backward-first is the complex conjugate.
    """
    s = _variant_sign(variant)
    cs = zigzag_coeffs(order)
    if cs.infinite:
        raise UnsupportedLimitError("use sigma_zigzag_infinite for infinite order")
    j = np.arange(1, len(cs) + 1)
    offsets = s * j * (-1.0) ** (j + 1)
    return _one_sided(kappa, cs.float_values, offsets)


def _variant_sign(variant: str) -> float:
    v = variant.replace("_", "-").lower()
    if v in ("forward-first", "forward"):
        return 1.0
    if v in ("backward-first", "backward"):
        return -1.0
    raise InvalidSpecError("variant must be 'forward-first' or 'backward-first'")


def sigma_zigzag_infinite(kappa, variant: str = "forward-first"):
    """Closed form of the infinite-order zigzag symbol.

    ``log[(e^{i pi kappa} + sqrt(1 + e^{2 i pi kappa})) / (1 + sqrt(1 + e^{-2 i pi kappa}))] / (i pi kappa)``

    Principal square roots and logarithm are used.  They agree with the
    series at every ``kappa`` in ``[-1, 1]``: the radicands only touch the
    branch cut at ``|kappa| = 1/2``, where they vanish and both roots are 0.
    For ``|kappa| < 1/2`` the value is exactly 1.
    """
    s = _variant_sign(variant)
    k, scalar = _as_array(kappa)
    th = np.pi * k
    e = np.exp(1j * th)
    num = e + np.sqrt(1.0 + e * e)
    den = 1.0 + np.sqrt(1.0 + np.conj(e) ** 2)
    out = np.ones(k.shape, dtype=complex)
    nz = th != 0
    out[nz] = np.log(num[nz] / den[nz]) / (1j * th[nz])
    if s < 0:
        out = np.conj(out)
    return _ret(out, scalar)


def sigma_zigzag_infinite_series(kappa, terms: int, variant: str = "forward-first") -> complex:
    """Partial sum of the infinite-order zigzag symbol, accumulated with ``math.fsum``.

    Terms decay like ``j^(-3/2)``, so ``terms = 10**6`` gives about three
    correct digits.
    """
    s = _variant_sign(variant)
    kappa = float(kappa)
    if kappa == 0:
        return 1.0 + 0.0j
    j = np.arange(1, terms + 1)
    ell = j // 2
    # binom(2l, l) / 4^l through its running product
    ratios = np.ones(terms // 2 + 1)
    ratios[1:] = (2.0 * np.arange(1, terms // 2 + 1) - 1) / (2.0 * np.arange(1, terms // 2 + 1))
    central = np.cumprod(ratios)[ell]
    z = np.where(j % 2 == 0, 1.0, -1.0) * (-1.0) ** (ell + 1) * central
    z[0] = 1.0
    off = s * j * (-1.0) ** (j + 1)
    th = np.pi * kappa * off
    re = z * np.sin(th) / th
    im = z * (1.0 - np.cos(th)) / th
    return complex(math.fsum(re), math.fsum(im))


def sigma(kappa, spec: SchemeSpec, terms: Optional[int] = None):
    """Symbol of any scheme, choosing the closed form where one exists.

    Infinite-order centred and zigzag symbols use their limits; other
    infinite-order families need ``terms``.
    """
    fam = spec.family
    if spec.derivative != 1:
        raise InvalidSpecError("symbols are defined for first derivatives")
    if spec.infinite:
        if terms is None:
            if fam is Family.CENTRED:
                return sigma_centred(kappa, INF)
            if fam in (Family.ZIGZAG_FORWARD_FIRST, Family.ZIGZAG_BACKWARD_FIRST):
                return sigma_zigzag_infinite(kappa, "backward-first" if fam.backward else "forward-first")
            raise UnsupportedLimitError(f"{fam.value} at infinite order needs a truncation")
        return sigma_generic(kappa, build_stencil_truncated(spec, terms))
    if fam is Family.CENTRED:
        return sigma_centred(kappa, spec.order)
    if fam in (Family.FORWARD, Family.BACKWARD):
        return sigma_forward_backward(kappa, spec.order, "backward" if fam.backward else "forward")
    if fam in (Family.ZIGZAG_FORWARD_FIRST, Family.ZIGZAG_BACKWARD_FIRST):
        return sigma_zigzag(kappa, spec.order, "backward-first" if fam.backward else "forward-first")
    return sigma_generic(kappa, build_stencil(spec))


def write_sigma_csv(stream, spec: SchemeSpec, kappas, values) -> None:
    """Write ``family,order,kappa,sigma_re,sigma_im`` rows."""
    order = "inf" if spec.infinite else spec.order
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["family", "order", "kappa", "sigma_re", "sigma_im"])
    for k, v in zip(np.atleast_1d(kappas), np.atleast_1d(values)):
        v = complex(v)
        w.writerow([spec.family.value, order, repr(float(k)), repr(v.real), repr(v.imag)])
