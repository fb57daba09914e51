import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import ALL_FAMILIES

from zigzagfd.coefficients import INF
from zigzagfd.exceptions import InvalidSpecError, UnsupportedLimitError
from zigzagfd.stencils import SchemeSpec, build_stencil
from zigzagfd.symbols import (
    StencilSymbol,
    sigma,
    sigma_centred,
    sigma_centred_higher,
    sigma_forward_backward,
    sigma_generic,
    sigma_zigzag,
    sigma_zigzag_infinite,
    sigma_zigzag_infinite_series,
    symbol_for_spec,
    write_sigma_csv,
)

KAPPA = np.linspace(-1, 1, 512)


@pytest.mark.parametrize("order", [2, 4, 6, 10])
def test_centred_closed_form_matches_generic(order):
    st_ = build_stencil(SchemeSpec("centred", order))
    np.testing.assert_allclose(sigma_centred(KAPPA, order), sigma_generic(KAPPA, st_), atol=1e-13)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
@pytest.mark.parametrize("direction", ["forward", "backward"])
def test_one_sided_closed_form_matches_generic(order, direction):
    st_ = build_stencil(SchemeSpec(direction, order))
    np.testing.assert_allclose(sigma_forward_backward(KAPPA, order, direction), sigma_generic(KAPPA, st_), atol=1e-13)


@pytest.mark.parametrize("order", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("variant", ["forward-first", "backward-first"])
def test_zigzag_closed_form_matches_generic(order, variant):
    st_ = build_stencil(SchemeSpec(f"zigzag-{variant}", order))
    np.testing.assert_allclose(sigma_zigzag(KAPPA, order, variant), sigma_generic(KAPPA, st_), atol=1e-13)


@pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: f.value)
def test_sigma_at_origin(fam):
    for order in (2, 4, 6):
        assert sigma(0.0, SchemeSpec(fam, order)) == 1


@pytest.mark.parametrize("order", [2, 4, 8, INF])
def test_centred_vanishes_at_nyquist(order):
    assert sigma_centred(1.0, order) == 0
    assert sigma_centred(-1.0, order) == 0


def test_centred_is_real_and_even():
    v = sigma(KAPPA, SchemeSpec("centred", 6))
    assert np.isrealobj(v) or np.all(np.imag(v) == 0)
    np.testing.assert_allclose(v, v[::-1], atol=1e-15)


def test_centred_infinite_limit():
    assert sigma_centred(0.3, INF) == 1.0
    assert sigma_centred(0.3, 2000) == pytest.approx(1.0, abs=2e-3)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_one_sided_endpoints(order):
    for d in ("forward", "backward"):
        assert abs(sigma_forward_backward(2.0, order, d)) < 1e-15
        assert abs(sigma_forward_backward(1.0, order, d).real) < 1e-15


def test_backward_is_conjugate_of_forward():
    f = sigma_forward_backward(KAPPA, 3, "forward")
    b = sigma_forward_backward(KAPPA, 3, "backward")
    np.testing.assert_allclose(b, np.conj(f), atol=1e-15)


def test_zigzag_variants_are_conjugate():
    for order in (2, 5, 7):
        f = sigma_zigzag(KAPPA, order, "forward-first")
        b = sigma_zigzag(KAPPA, order, "backward-first")
        np.testing.assert_allclose(b, np.conj(f), atol=1e-15)
    np.testing.assert_allclose(
        sigma_zigzag_infinite(KAPPA, "backward-first"), np.conj(sigma_zigzag_infinite(KAPPA)), atol=1e-15
    )


def test_zigzag_infinite_is_exact_inside_half_band():
    k = np.linspace(-0.49, 0.49, 99)
    np.testing.assert_allclose(sigma_zigzag_infinite(k), 1.0, atol=1e-14)


@pytest.mark.parametrize("kappa", [0.55, 0.7, 0.9, 1.0, -0.8])
def test_zigzag_infinite_matches_series(kappa):
    closed = complex(sigma_zigzag_infinite(kappa))
    assert abs(closed - sigma_zigzag_infinite_series(kappa, 10 ** 6)) < 1e-3
    # the gap shrinks as more terms are kept
    g1 = abs(closed - sigma_zigzag_infinite_series(kappa, 10 ** 4))
    g2 = abs(closed - sigma_zigzag_infinite_series(kappa, 10 ** 6))
    assert g2 < g1


def test_truncated_zigzag_approaches_closed_form():
    k = np.array([0.3, 0.7, 0.95])
    closed = sigma_zigzag_infinite(k)
    gaps = [np.max(np.abs(sigma(k, SchemeSpec("zigzag", INF), terms=t) - closed)) for t in (50, 400)]
    assert gaps[1] < gaps[0]


def test_arcsinh_series():
    # sum_l 4 (-1)^(l+1) (2l-2)! / (4^l ((l-1)!)^2) * X^(2l-1) / (2l-1) = arcsinh(X)
    x = 0.6
    total = math.fsum(
        4 * (-1) ** (l + 1) * math.comb(2 * l - 2, l - 1) / 4 ** l * x ** (2 * l - 1) / (2 * l - 1)
        for l in range(1, 200)
    )
    assert total == pytest.approx(math.asinh(x), abs=1e-14)
    assert math.asinh(x) == pytest.approx(math.log(x + math.sqrt(1 + x * x)), abs=1e-15)


def test_log_series():
    # sum_l (-1)^(l+1) (2l)! / (4^l (l!)^2) X^(2l) / (2l) = log((1 + sqrt(1 + X^2)) / 2)
    x = 0.6
    total = math.fsum(
        (-1) ** (l + 1) * math.comb(2 * l, l) / 4 ** l * x ** (2 * l) / (2 * l) for l in range(1, 200)
    )
    assert total == pytest.approx(math.log((1 + math.sqrt(1 + x * x)) / 2), abs=1e-14)


def test_centred_higher_derivatives():
    # odd parity with n = 0 is the first-derivative symbol; even with n = 0 the coefficient sum
    np.testing.assert_allclose(sigma_centred_higher(KAPPA, 6, 0, "odd"), sigma_centred(KAPPA, 6), atol=1e-14)
    np.testing.assert_allclose(sigma_centred_higher(KAPPA, 6, 0, "even"), 1.0, atol=1e-14)
    assert sigma_centred_higher(0.0, 4, 2, "even") == pytest.approx(1.0)
    with pytest.raises(InvalidSpecError):
        sigma_centred_higher(KAPPA, 4, 1, "bogus")


def test_symbol_needs_truncation_for_infinite():
    with pytest.raises(UnsupportedLimitError):
        symbol_for_spec(SchemeSpec("zigzag", INF))
    with pytest.raises(UnsupportedLimitError):
        sigma(0.5, SchemeSpec("centred-staggered", INF))


def test_taylor_branch_is_continuous():
    sym = StencilSymbol(build_stencil(SchemeSpec("zigzag", 6)))
    th = 0.5 / sym.span
    lo, hi = th * (1 - 1e-9), th * (1 + 1e-9)
    s_in, _ = sym.evaluate(np.array([lo]))
    s_out, _ = sym.evaluate(np.array([hi]))
    # Re S ~ theta^8 and Im S ~ theta for an order-6 scheme
    assert s_in[0].real / lo ** 8 == pytest.approx(s_out[0].real / hi ** 8, rel=1e-6)
    assert s_in[0].imag / lo == pytest.approx(s_out[0].imag / hi, rel=1e-12)


def test_error_bound_covers_high_precision_value():
    import mpmath

    st_ = build_stencil(SchemeSpec("zigzag", 4))
    sym = StencilSymbol(st_)
    mpmath.mp.dps = 40
    for th in (1e-3, 0.2, 1.7):
        s, err = sym.evaluate(np.array([th]))
        ref = sum(mpmath.mpf(w.numerator) / w.denominator * (mpmath.expj(th * float(o)) - 1)
                  for o, w in zip(st_.offsets, st_.weights))
        assert abs(float(mpmath.re(ref)) - s[0].real) <= err[0] + 1e-300


def test_sigma_csv():
    buf = io.StringIO()
    spec = SchemeSpec("centred", 2)
    k = np.array([-1.0, 0.0, 1.0])
    write_sigma_csv(buf, spec, k, sigma(k, spec))
    rows = buf.getvalue().splitlines()
    assert rows[0] == "family,order,kappa,sigma_re,sigma_im"
    assert len(rows) == 4


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-1, max_value=1), st.integers(min_value=1, max_value=8))
def test_zigzag_conjugacy_property(kappa, order):
    f = sigma_zigzag(kappa, order, "forward-first")
    b = sigma_zigzag(kappa, order, "backward-first")
    assert abs(b - np.conj(f)) < 1e-14


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-1, max_value=1))
def test_symbol_reality(kappa):
    # real stencils have S(-theta) = conj(S(theta))
    sym = symbol_for_spec(SchemeSpec("zigzag", 5))
    a, b = sym.S(np.array([np.pi * kappa])), sym.S(np.array([-np.pi * kappa]))
    assert abs(a[0] - np.conj(b[0])) < 1e-14
