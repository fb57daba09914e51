"""Centred, one-sided and zigzag finite difference schemes.

Submodules
----------
coefficients
    Exact and floating-point coefficient families, and a Vandermonde oracle.
stencils
    Nodal stencils and their application on uniform grids.
symbols
    Fourier symbols (sigma-factors), including infinite-order closed forms.
stability
    Von Neumann analysis with truncated-exponential Runge-Kutta polynomials.
transport
    Linear advection solver and the energy and outflow experiments.
"""

__version__ = "0.1.0"

from .coefficients import (  # noqa: E402
    INF,
    CoefficientSet,
    Family,
    centred_coeffs,
    coefficient_set,
    forward_coeffs,
    staggered_centred_coeffs,
    staggered_zigzag_coeffs,
    vandermonde_weights,
    zigzag_coeffs,
)
from .stencils import Field1D, SchemeSpec, Stencil, apply, build_stencil, build_stencil_truncated  # noqa: E402
from .stability import TimeIntegrator, amplification, critical_lambda  # noqa: E402

__all__ = [
    "INF",
    "CoefficientSet",
    "Family",
    "centred_coeffs",
    "coefficient_set",
    "forward_coeffs",
    "staggered_centred_coeffs",
    "staggered_zigzag_coeffs",
    "vandermonde_weights",
    "zigzag_coeffs",
    "Field1D",
    "SchemeSpec",
    "Stencil",
    "apply",
    "build_stencil",
    "build_stencil_truncated",
    "TimeIntegrator",
    "amplification",
    "critical_lambda",
]
