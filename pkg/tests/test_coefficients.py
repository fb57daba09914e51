import io
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import ALL_FAMILIES, nodal_offsets
from reference_values import TABLE1

from zigzagfd.coefficients import (
    INF,
    Family,
    centred_coeffs,
    coeff_float,
    coeff_float_direct,
    coeff_float_gammaln,
    coeff_float_log1p,
    coefficient_set,
    coefficients_csv_text,
    forward_coeffs,
    fornberg_weights,
    recombine,
    staggered_centred_coeffs,
    staggered_zigzag_coeffs,
    vandermonde_weights,
    write_magnitude_csv,
    zigzag_coeffs,
)
from zigzagfd.exceptions import (
    CoefficientOverflowError,
    InvalidOrderError,
    SingularSystemError,
    UnsupportedLimitError,
)

# Weights produced offline by sympy.finite_diff_weights (derivative 1), in
# the node order given.
SYMPY_WEIGHTS = [
    ([0, 1, -2, 3, -4], [F(-7, 12), F(4, 5), F(-1, 5), F(-4, 105), F(3, 140)]),
    ([0, F(1, 2), F(-3, 2), F(5, 2)], [F(-26, 15), F(15, 8), F(-5, 48), F(-3, 80)]),
    (
        [F(-5, 2), F(-3, 2), F(-1, 2), F(1, 2), F(3, 2), F(5, 2)],
        [F(-3, 640), F(25, 384), F(-75, 64), F(75, 64), F(-25, 384), F(3, 640)],
    ),
]


# ---------------------------------------------------------------------------
# closed forms

@pytest.mark.parametrize("n", sorted(TABLE1))
def test_zigzag_table(n):
    assert list(zigzag_coeffs(n).values) == TABLE1[n]


def test_centred_examples():
    assert centred_coeffs(2).values == (F(1),)
    assert centred_coeffs(4).values == (F(4, 3), F(-1, 3))
    assert centred_coeffs(6).values == (F(3, 2), F(-3, 5), F(1, 10))


def test_staggered_centred_examples():
    assert staggered_centred_coeffs(2).values == (F(1),)
    assert staggered_centred_coeffs(4).values == (F(9, 8), F(-1, 8))


def test_forward_examples():
    assert forward_coeffs(1).values == (F(1),)
    assert forward_coeffs(3).values == (F(3), F(-3), F(1))


def test_staggered_zigzag_first_order_is_the_half_step_quotient():
    # (f(1/2) - f(0)) / (1/2) is first-order accurate on its own
    assert staggered_zigzag_coeffs(1).values == (F(1),)


@pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: f.value)
def test_oracle_agreement_low_orders(fam):
    top = 12
    for order in range(2, top + 1, 2) if fam.centred else range(1, top + 1):
        nodes = nodal_offsets(fam, order)
        v = vandermonde_weights(nodes)
        assert v == fornberg_weights(nodes)
        assert recombine(fam, order, nodes, v) == list(coefficient_set(fam, order).values)


@pytest.mark.parametrize("nodes, expected", SYMPY_WEIGHTS)
def test_oracle_matches_frozen_sympy(nodes, expected):
    assert vandermonde_weights(nodes) == expected
    assert fornberg_weights(nodes) == expected


def test_oracle_rejects_duplicate_nodes():
    with pytest.raises(SingularSystemError):
        vandermonde_weights([0, 1, 1])


def test_backward_mirrors_forward():
    for n in range(1, 10):
        assert coefficient_set("backward", n).values == forward_coeffs(n).values
        assert coefficient_set("zigzag-backward-first", n).values == zigzag_coeffs(n).values


# ---------------------------------------------------------------------------
# infinite order

def test_zigzag_infinite_rule():
    z = zigzag_coeffs(INF)
    assert z.infinite
    assert z.take(5) == (F(1), F(1, 2), F(-1, 2), F(-3, 8), F(3, 8))
    # even and following odd terms cancel, magnitudes decay
    for ell in range(1, 40):
        assert z.coefficient(2 * ell) == -z.coefficient(2 * ell + 1)
        assert abs(z.coefficient(2 * ell + 2)) < abs(z.coefficient(2 * ell))


def test_zigzag_converges_to_limit():
    lim = zigzag_coeffs(INF)
    for j in (1, 2, 3, 4):
        gaps = [abs(float(zigzag_coeffs(n).coefficient(j) - lim.coefficient(j))) for n in (20, 40, 80)]
        assert gaps[0] > gaps[1] > gaps[2]


def test_centred_infinite_rule():
    c = centred_coeffs(INF)
    assert c.take(3) == (F(2), F(-2), F(2))
    # C_1 = 2M / (M + 1) tends to the limit from below
    assert centred_coeffs(400).coefficient(1) == F(400, 201)


def test_staggered_centred_infinite_rule():
    c = staggered_centred_coeffs(INF)
    assert c.coefficient(1) == pytest.approx(4 / math.pi)
    assert c.coefficient(2) == pytest.approx(-4 / (3 * math.pi))
    assert float(staggered_centred_coeffs(2000).coefficient(2)) == pytest.approx(c.coefficient(2), rel=5e-3)


def test_infinite_set_has_no_length():
    with pytest.raises(TypeError):
        len(zigzag_coeffs(INF))


def test_forward_has_no_limit():
    with pytest.raises(UnsupportedLimitError):
        forward_coeffs(INF)
    with pytest.raises(UnsupportedLimitError):
        staggered_zigzag_coeffs(INF)


# ---------------------------------------------------------------------------
# validation

@pytest.mark.parametrize("bad", [0, -2, 2.5, True])
def test_invalid_orders(bad):
    with pytest.raises(InvalidOrderError):
        zigzag_coeffs(bad)


def test_centred_needs_even_order():
    with pytest.raises(InvalidOrderError):
        centred_coeffs(3)


def test_family_aliases():
    assert Family.parse("zigzag") is Family.ZIGZAG_FORWARD_FIRST
    assert Family.parse("centered") is Family.CENTRED
    assert Family.parse("zigzag", staggered=True) is Family.ZIGZAG_STAGGERED_FORWARD_FIRST
    with pytest.raises(InvalidOrderError):
        Family.parse("upwind")
    with pytest.raises(InvalidOrderError):
        Family.parse("forward", staggered=True)


# ---------------------------------------------------------------------------
# float paths

@pytest.mark.parametrize("fam", [Family.CENTRED, Family.CENTRED_STAGGERED], ids=lambda f: f.value)
@pytest.mark.parametrize("method", ["log1p", "gammaln", "direct"])
def test_float_paths_agree_at_moderate_order(fam, method):
    exact = coefficient_set(fam, 40).values
    for j, v in enumerate(exact, start=1):
        assert coeff_float(fam, 40, j, method) == pytest.approx(float(v), rel=1e-12)


def test_direct_path_overflows():
    with pytest.raises(CoefficientOverflowError):
        coeff_float_direct("centred", 400, 1)
    with pytest.raises(CoefficientOverflowError):
        coeff_float_direct("centred-staggered", 200, 1)


def test_gammaln_path_reports_overflow():
    assert math.isfinite(coeff_float_gammaln("centred", 5000, 7))
    assert math.isfinite(coeff_float_gammaln("centred-staggered", 500, 1))
    with pytest.raises(CoefficientOverflowError):
        coeff_float_gammaln("centred-staggered", 600, 1)


def test_log1p_path_never_overflows():
    for j in (1, 100, 2500):
        assert math.isfinite(coeff_float_log1p("centred-staggered", 5000, j))
        assert math.isfinite(coeff_float_log1p("centred", 5000, j))
    assert coeff_float_log1p("centred", 5000, 100) != 0


def test_float_paths_reject_other_families():
    with pytest.raises(InvalidOrderError):
        coeff_float_log1p("zigzag", 4, 1)
    with pytest.raises(InvalidOrderError):
        coeff_float("centred", 4, 1, "bogus")


# ---------------------------------------------------------------------------
# CSV

def test_csv_exact_rows():
    text = coefficients_csv_text(zigzag_coeffs(8))
    lines = text.splitlines()
    assert lines[0] == "family,order,j,numerator,denominator,float64"
    assert len(lines) == 9
    assert lines[-1].startswith("zigzag-forward-first,8,8,-7,1287,")
    assert "\r" not in text


def test_csv_overflow_marker():
    text = coefficients_csv_text(staggered_centred_coeffs(600), float_method="gammaln")
    assert "overflow" in text.splitlines()[1]


def test_magnitude_csv():
    buf = io.StringIO()
    write_magnitude_csv(buf, "zigzag", 3)
    rows = buf.getvalue().splitlines()
    assert rows[0] == "family,order,j,abs_float64"
    assert len(rows) == 1 + 1 + 2 + 3


# ---------------------------------------------------------------------------
# properties

family_strategy = st.sampled_from(ALL_FAMILIES)


@settings(max_examples=60, deadline=None)
@given(family_strategy, st.integers(min_value=1, max_value=40))
def test_consistency_sum(fam, n):
    order = 2 * n if fam.centred else n
    assert sum(coefficient_set(fam, order).values) == 1


@settings(max_examples=40, deadline=None)
@given(family_strategy, st.integers(min_value=1, max_value=16), st.integers(min_value=2, max_value=6))
def test_stencil_is_exact_on_polynomials(fam, n, degree):
    order = 2 * n if fam.centred else n
    nodes = nodal_offsets(fam, order)
    w = vandermonde_weights(nodes)
    deg = min(degree, order)
    # exact for x^deg evaluated at 0 when deg <= order
    assert sum(wk * x ** deg for wk, x in zip(w, nodes)) == (1 if deg == 1 else 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=60))
def test_centred_signs_alternate(m):
    vals = centred_coeffs(2 * m).values
    assert all((v > 0) == (j % 2 == 1) for j, v in enumerate(vals, start=1))
