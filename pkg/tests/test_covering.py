import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faberapprox.covering import (
    CoveringBatch,
    CoveringCode,
    K_function,
    bank_keys,
    build_covering,
    cardinality_bound,
    covering_error_bound,
    covering_to_expansion,
    representation_eval,
)
from faberapprox.faber1d import quantize
from faberapprox.tensor import sparse_truncate

from conftest import quad1, quad_product


def zero(X):
    return np.zeros(len(np.atleast_2d(X)))


def test_K_slice_of_quadratic_product():
    K = K_function(quad_product, (0,), (0,), 1.0)
    assert K(np.array([0.5]))[0] == 0.125
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(K(x), 0.5 * quad1(x), atol=1e-16)


def test_K_vanishes_at_ends():
    for kbar, sbar in bank_keys(3, 2):
        K = K_function(quad_product, kbar, sbar, 0.5)
        assert np.all(K(np.array([0.0, 1.0])) == 0.0)


def test_zero_slice():
    assert np.all(K_function(zero, (1, 2), (1, 3), 1.0)(np.linspace(0, 1, 5)) == 0.0)


def test_bank_count_d2_m1():
    assert len(bank_keys(2, 1)) == 3
    code = build_covering(quad_product, 1, 2, 1.0)
    assert len(code.banks) == 3


def test_hand_traced_bank():
    code = build_covering(quad_product, 1, 2, 1.0)
    assert code.banks[((0,), (0,))].l == (0, 0, 0, 0)
    X = np.random.default_rng(1).random((2000, 2))
    assert np.max(np.abs(quad_product(X) - code(X))) <= covering_error_bound(1.0, 2, 1) == 1.5


def test_zero_function_zero_codes():
    code = build_covering(zero, 3, 2, 1.0)
    assert all(set(c.l) == {0} for c in code.banks.values())
    assert np.all(code(np.random.default_rng(0).random((50, 2))) == 0.0)


@pytest.mark.parametrize("m", [0, 1, 3])
def test_d1_is_univariate_quantizer(m):
    code = build_covering(lambda X: quad1(X[:, 0]), m, 1, 1.0)
    assert list(code.banks) == [((), ())]
    assert code.banks[((), ())] == quantize(quad1, m, 1.0)


@pytest.mark.parametrize(
    "alpha, d, m, bound", [(1.0, 2, 4, 0.375), (1.0, 2, 1, 1.5)] + [(1.0, 1, m, 2.0**-m) for m in range(5)]
)
def test_error_bound_values(alpha, d, m, bound):
    assert covering_error_bound(alpha, d, m) == bound


@pytest.mark.parametrize("m, d, count", [(1, 1, 81), (1, 2, 6561), (0, 1, 9)])
def test_cardinality(m, d, count):
    assert cardinality_bound(m, d) == count


@given(st.integers(2, 3), st.integers(0, 3), st.sampled_from([0.5, 1.0]))
def test_representation_matches_truncation(d, m, alpha):
    X = np.random.default_rng(d * 10 + m).random((100, d))
    R = sparse_truncate(quad_product, m, d)
    np.testing.assert_allclose(representation_eval(quad_product, m, d, alpha, X), R(X), atol=1e-12)


def test_covering_lives_in_sparse_space():
    code = build_covering(quad_product, 2, 2, 1.0)
    e = covering_to_expansion(code)
    X = np.random.default_rng(3).random((300, 2))
    np.testing.assert_allclose(e(X), code(X), atol=1e-14)


def test_lines_round_trip_and_key():
    code = build_covering(quad_product, 2, 3, 0.5)
    back = CoveringCode.from_lines(code.to_lines())
    assert back == code
    assert back.key() == code.key()


def test_batch_selects_per_point():
    a = build_covering(quad_product, 2, 2, 1.0)
    b = build_covering(lambda X: -4 * quad_product(X), 2, 2, 1.0)
    X = np.random.default_rng(5).random((40, 2))
    which = np.arange(40) % 2
    got = CoveringBatch([a, b])(which, X)
    np.testing.assert_array_equal(got[::2], a(X[::2]))
    np.testing.assert_array_equal(got[1::2], b(X[1::2]))


def test_batch_rejects_mixed_shapes():
    with pytest.raises(ValueError):
        CoveringBatch([build_covering(quad_product, 1, 2, 1.0), build_covering(quad_product, 2, 2, 1.0)])
