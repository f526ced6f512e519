import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faberapprox.tensor import (
    SparseFaberExpansion,
    TensorFaberIndex,
    basis_eval,
    dim_Fdm,
    multi_indices,
    smolyak_grid,
    sparse_truncate,
    tensor_coeff,
    tensor_indices,
    truncation_error_bound,
)
from faberapprox.faber1d import DyadicIndex, faber_coeff

from conftest import quad1, quad_product


def random_expansion(data, d, m):
    coeffs = {
        idx: data.draw(st.floats(-1, 1, allow_subnormal=False)) for idx in tensor_indices(d, m)
    }
    return SparseFaberExpansion(d, m, coeffs)


def test_coefficient_of_quadratic_product():
    value, bound = tensor_coeff(quad_product, TensorFaberIndex((0, 0), (0, 0)), 1.0)
    assert value == 0.0625
    assert bound == 0.25


def test_affine_in_first_coordinate_annihilated():
    f = lambda X: 3 * X[:, 0] + 1 + 0 * X[:, 1]
    for k in [(0, 0), (2, 1), (1, 3)]:
        for s in [(0, 0), (1, 1)]:
            if all(si < 2**ki for si, ki in zip(s, k)):
                assert tensor_coeff(f, TensorFaberIndex(k, s), 1.0)[0] == 0.0


@given(st.integers(0, 5), st.data())
def test_one_dimension_matches_univariate(k, data):
    s = data.draw(st.integers(0, 2**k - 1))
    v, _ = tensor_coeff(lambda X: quad1(X[:, 0]), TensorFaberIndex((k,), (s,)), 1.0)
    assert v == faber_coeff(quad1, DyadicIndex(k, s))


def test_invalid_index():
    with pytest.raises(ValueError):
        tensor_coeff(quad_product, TensorFaberIndex((1, 0), (2, 0)), 1.0)


def test_basis_element_reproduced():
    f = lambda X: basis_eval((0, 0), (0, 0), X)
    e = sparse_truncate(f, 0, 2)
    assert e.coefficients == {TensorFaberIndex((0, 0), (0, 0)): 1.0}


def test_truncation_hits_grid_value():
    e = sparse_truncate(quad_product, 1, 2)
    assert e([[0.5, 0.5]])[0] == 0.0625


def test_stored_index_count():
    e = sparse_truncate(quad_product, 2, 2)
    assert len(e.coefficients) == 17


def test_expansion_eval_trivial_cases():
    assert SparseFaberExpansion(2, 3)([[0.3, 0.4]])[0] == 0.0
    one = SparseFaberExpansion(2, 0, {TensorFaberIndex((0, 0), (0, 0)): 1.0})
    assert one([[0.5, 0.5]])[0] == 1.0


def test_truncation_error_at_quarter_point():
    e = sparse_truncate(quad_product, 2, 2)
    x = np.array([[0.25, 0.25]])
    assert abs(quad_product(x)[0] - e(x)[0]) <= truncation_error_bound(1.0, 2, 2)


@pytest.mark.parametrize("m, d, count", [(1, 2, 5), (1, 3, 7), (2, 1, 7)])
def test_smolyak_grid_size(m, d, count):
    assert len(smolyak_grid(m, d).points) == count


def test_smolyak_grid_one_dimension():
    pts = smolyak_grid(2, 1).points[:, 0]
    np.testing.assert_array_equal(pts, np.arange(1, 8) / 8)


@pytest.mark.parametrize("m, d, dim", [(2, 2, 17), (3, 2, 49)] + [(m, 1, 2 ** (m + 1) - 1) for m in range(6)])
def test_dim_Fdm(m, d, dim):
    assert dim_Fdm(m, d) == dim


@pytest.mark.parametrize(
    "alpha, d, m, bound", [(1.0, 2, 4, 0.1875), (1.0, 2, 2, 0.5), (0.5, 2, 4, 6.182)]
)
def test_truncation_bound_values(alpha, d, m, bound):
    assert truncation_error_bound(alpha, d, m) == pytest.approx(bound, rel=1e-3 if alpha == 0.5 else 1e-15)


@given(st.integers(1, 3), st.integers(0, 3))
def test_multi_indices_count_and_order(d, m):
    ks = list(multi_indices(d, m))
    assert len(ks) == math.comb(m + d, d)
    assert ks == sorted(ks, key=lambda k: (sum(k), k))


@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_truncation_is_projector(d, m, data):
    g = random_expansion(data, d, m)
    X = np.random.default_rng(0).random((200, d))
    np.testing.assert_allclose(sparse_truncate(g, m, d)(X), g(X), atol=1e-12)


@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_interpolates_on_smolyak_grid(d, m, data):
    g = random_expansion(data, d, m + 2)
    pts = smolyak_grid(m, d).points
    np.testing.assert_allclose(sparse_truncate(g, m, d)(pts), g(pts), atol=1e-12)


@given(st.integers(1, 3), st.integers(0, 2), st.data())
def test_text_round_trip(d, m, data):
    g = random_expansion(data, d, m)
    back = SparseFaberExpansion.from_text(g.to_text())
    assert back.coefficients == g.coefficients
    assert back.to_text() == g.to_text()
