import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faberapprox.faber1d import (
    DyadicIndex,
    UnivariateExpansion,
    UnivariateQuantizedCode,
    faber_coeff,
    faber_eval,
    faber_star_eval,
    hat,
    quantize,
    quantize_values,
    truncate_univariate,
)

from conftest import quad1, sine1


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.0, 0.0), (2.5, 0.0), (0.5, 0.5)])
def test_hat_values(x, expected):
    assert hat(x) == expected


@pytest.mark.parametrize(
    "k, s, x, expected", [(0, 0, 0.5, 1.0), (1, 1, 0.625, 0.5), (1, 0, 0.9, 0.0)]
)
def test_faber_eval(k, s, x, expected):
    assert faber_eval(DyadicIndex(k, s), x) == expected


def test_level_minus_one_is_boundary_hats():
    x = np.array([0.0, 0.25, 1.0])
    np.testing.assert_allclose(faber_eval(DyadicIndex(-1, 0), x), [1.0, 0.75, 0.0])
    np.testing.assert_allclose(faber_eval(DyadicIndex(-1, 1), x), [0.0, 0.25, 1.0])


@pytest.mark.parametrize("m, s, x, expected", [(0, 1, 0.5, 1.0), (1, 2, 0.5, 1.0), (1, 1, 0.375, 0.5)])
def test_faber_star(m, s, x, expected):
    assert faber_star_eval(m, s, x) == expected


@pytest.mark.parametrize("bad", [0, 4])
def test_faber_star_rejects_shift(bad):
    with pytest.raises(ValueError):
        faber_star_eval(1, bad, 0.5)


@pytest.mark.parametrize("level, shift", [(-2, 0), (0, 1), (2, 4), (-1, 2)])
def test_dyadic_index_validation(level, shift):
    with pytest.raises(ValueError):
        DyadicIndex(level, shift)


def test_coefficients_of_quadratic():
    assert faber_coeff(quad1, DyadicIndex(0, 0)) == 0.25
    assert faber_coeff(quad1, DyadicIndex(1, 0)) == 0.0625


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 6), st.data())
def test_affine_functions_have_zero_coefficients(a, b, k, data):
    s = data.draw(st.integers(0, 2**k - 1))
    c = faber_coeff(lambda x: a * x + b, DyadicIndex(k, s))
    assert abs(c) <= 1e-12 * (1 + abs(a) + abs(b))


def test_truncation_level_zero_of_quadratic():
    R = truncate_univariate(quad1, 0)
    assert R(0.5) == 0.25
    assert R.coefficients == {DyadicIndex(0, 0): 0.25}


def test_truncation_interpolates_sine_on_grid():
    R = truncate_univariate(sine1, 3)
    assert R(5 / 16) == pytest.approx(sine1(5 / 16), abs=1e-15)
    nodes = np.arange(17) / 16
    np.testing.assert_allclose(R(nodes), sine1(nodes), atol=1e-15)


@given(st.integers(0, 5), st.data())
def test_truncation_reproduces_finite_sums(m, data):
    coeffs = {}
    for k in range(m + 1):
        for s in range(2**k):
            coeffs[DyadicIndex(k, s)] = data.draw(st.floats(-1, 1))
    g = UnivariateExpansion(m, coeffs)
    R = truncate_univariate(g, m)
    x = np.linspace(0, 1, 97)
    np.testing.assert_allclose(R(x), g(x), atol=1e-12)


def test_quantizer_tie_goes_left():
    assert quantize(quad1, 0, 1.0).l == (0, 0)


def test_quantizer_sine_level_one():
    assert quantize(sine1, 1, 1.0).l == (0, 1, 1, 1)


def test_quantizer_zero():
    assert quantize(lambda x: np.zeros_like(x), 3, 0.5).l == (0,) * 16


def test_quantizer_needs_zero_at_origin():
    with pytest.raises(ValueError):
        quantize(lambda x: np.ones_like(x), 1, 1.0)


def test_quantized_code_evaluation():
    code = UnivariateQuantizedCode(1, 1.0, (0, 1, 1, 1))
    assert code(0.5) == 0.25
    assert code(0.125) == 0.125
    assert code(0.0) == 0.0
    assert code(1.0) == 0.0


def test_code_validation():
    with pytest.raises(ValueError):
        UnivariateQuantizedCode(1, 1.0, (0, 1, 1))
    with pytest.raises(ValueError):
        UnivariateQuantizedCode(0, 1.0, (1, 0))


def _random_hoelder_values(data, m, alpha):
    """Node values of a random function whose consecutive increments are within the Hoelder modulus."""
    h = 2.0 ** (-m - 1)
    steps = data.draw(st.lists(st.floats(-1, 1), min_size=2 ** (m + 1) - 1, max_size=2 ** (m + 1) - 1))
    return np.concatenate([[0.0], np.cumsum(np.asarray(steps) * h**alpha)])


@given(st.integers(0, 6), st.sampled_from([0.3, 0.5, 1.0]), st.data())
def test_quantizer_error_and_chain(m, alpha, data):
    values = _random_hoelder_values(data, m, alpha)
    l = quantize_values(values, m, alpha)
    unit = 2.0 ** (-alpha * (m + 1))
    assert l[0] == 0
    assert np.max(np.abs(values - unit * np.asarray(l))) <= unit / 2 + 1e-12
    assert all(abs(b - a) <= 1 for a, b in zip(l, l[1:]))
