import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxtree.errors import DimensionMismatchError, DomainError
from maxtree.semiring import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    is_max_stochastic,
    is_p_stochastic,
    max_matmul,
    max_matvec,
    normalize_max_stochastic,
    p_add,
    row_p_norms,
)

from helpers import EXAMPLE_W, example_matrix

nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)


def test_max_matmul_identity():
    A = example_matrix()
    assert np.array_equal(max_matmul(A, np.eye(4)), A)
    assert np.array_equal(max_matmul(np.eye(4), A), A)


def test_max_matmul_permutation_involution():
    P = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.array_equal(max_matmul(P, P), np.eye(2))


def test_max_matmul_example_entry():
    A = example_matrix()
    sq = max_matmul(A, A)
    assert sq[0, 3] == pytest.approx(35 / 48, abs=1e-15)


def test_max_matmul_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        max_matmul(np.ones((2, 2)), np.ones((3, 3)))


def test_max_matvec_ones_fixed_point():
    A = example_matrix()
    assert np.array_equal(max_matvec(A, np.ones(4)), np.ones(4))


def test_max_matvec_identity():
    x = np.array([0.3, 1.5, 0.0])
    assert np.array_equal(max_matvec(np.eye(3), x), x)


def test_max_matvec_left_eigen_pair():
    A = example_matrix()
    assert max_matvec(A.T, EXAMPLE_W) == pytest.approx(EXAMPLE_W, abs=1e-15)


def test_is_max_stochastic():
    assert is_max_stochastic(example_matrix())
    assert not is_max_stochastic(np.array([[0.5, 0.5], [1.0, 0.0]]))
    assert is_max_stochastic(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_normalize_already_normalized_is_identity():
    A = example_matrix()
    Ahat, D = normalize_max_stochastic(A)
    assert np.array_equal(Ahat, A)
    assert np.array_equal(D, np.ones(4))


def test_normalize_known_rows():
    Ahat, D = normalize_max_stochastic(np.array([[2.0, 4.0], [1.0, 0.5]]))
    assert np.array_equal(Ahat, np.array([[0.5, 1.0], [1.0, 0.5]]))
    assert np.array_equal(D, np.array([4.0, 1.0]))


def test_normalize_sr_example():
    Ahat, D = normalize_max_stochastic(np.array([[1.0, 2.0], [0.5, 1.0]]))
    assert np.array_equal(Ahat, np.array([[0.5, 1.0], [0.5, 1.0]]))
    assert np.array_equal(D, np.array([2.0, 1.0]))


def test_normalize_zero_row_rejected():
    with pytest.raises(DomainError, match="row 2"):
        normalize_max_stochastic(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_normalize_preserves_argmax_sets():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(2, 6))
        A = rng.uniform(0.1, 3.0, (n, n))
        A[0, 1] = A[0, 0]  # plant one tie
        Ahat, _ = normalize_max_stochastic(A)
        for i in range(n):
            assert set(np.flatnonzero(A[i] == A[i].max())) == set(
                np.flatnonzero(Ahat[i] == Ahat[i].max())
            )


def test_p_add_pythagorean():
    assert p_add(3.0, 4.0, 2) == pytest.approx(5.0, abs=1e-15)


@given(a=nonneg, p=st.integers(1, 20))
def test_p_add_zero_is_neutral(a, p):
    assert p_add(a, 0.0, p) == pytest.approx(a, rel=1e-14)


def test_p_add_ones_decreases_to_max():
    values = [p_add(1.0, 1.0, p) for p in (1, 2, 8, 64, 1024)]
    assert values[0] == 2.0
    assert all(x > y for x, y in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1.0, abs=1e-2)


@settings(max_examples=200)
@given(a=nonneg, b=nonneg, p=st.integers(1, 12))
def test_p_add_isomorphism_from_ordinary_addition(a, b, p):
    # f(x) = x^(1/p) carries ordinary + to +_p.
    f = lambda x: x ** (1.0 / p)
    assert p_add(f(a), f(b), p) == pytest.approx(f(a + b), rel=1e-12, abs=1e-300)


@given(a=nonneg, b=nonneg, c=nonneg)
def test_max_times_semiring_laws(a, b, c):
    assert max(a, b) == max(b, a)
    assert max(max(a, b), c) == max(a, max(b, c))
    assert max(a, a) == a
    assert a * max(b, c) == pytest.approx(max(a * b, a * c), rel=1e-15)


def test_max_matmul_associative_on_random_triples():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        A, B, C = (rng.uniform(0.0, 2.0, (n, n)) for _ in range(3))
        left = max_matmul(max_matmul(A, B), C)
        right = max_matmul(A, max_matmul(B, C))
        assert left == pytest.approx(right, rel=1e-12)


def test_is_p_stochastic():
    assert is_p_stochastic(np.array([[0.5, 0.5], [0.5, 0.5]]), 1)
    assert is_p_stochastic(np.array([[0.6, 0.8], [1.0, 0.0]]), 2)
    assert not is_p_stochastic(np.array([[0.5, 0.5], [0.5, 0.5]]), 2)


def test_row_p_norms_log_domain_matches_direct():
    rng = np.random.default_rng(3)
    A = rng.uniform(0.2, 1.0, (4, 4))
    direct = np.sum(A**65, axis=1) ** (1 / 65)
    assert row_p_norms(A, 65) == pytest.approx(direct, rel=1e-12)


def test_p_must_be_positive_integer():
    with pytest.raises(DomainError):
        p_add(1.0, 1.0, 0)
    with pytest.raises(DomainError):
        row_p_norms(np.ones((2, 2)), 1.5)


def test_as_matrix_rejects_bad_inputs():
    with pytest.raises(DimensionMismatchError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(DomainError):
        as_matrix(np.array([[1.0, -0.1], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        as_matrix(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_tolerance_relative_comparison():
    tol = Tolerance(1e-6)
    assert tol.close(1e6, 1e6 + 0.5)
    assert not tol.close(0.0, 1e-3)
    assert DEFAULT_TOL.is_one(1.0 + 1e-12)
    with pytest.raises(ValueError):
        Tolerance(0.0)
