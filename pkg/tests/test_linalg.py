import random
from fractions import Fraction

import numpy as np
import pytest

from liecurv import linalg
from liecurv.errors import DegenerateMetricError


def test_zeros_and_eye_backends():
    Z = linalg.zeros((2, 3))
    assert Z.dtype == object and Z[0, 0] == Fraction(0)
    Zf = linalg.zeros((2, 3), exact=False)
    assert Zf.dtype == float
    I = linalg.eye(3)
    assert I[0, 0] == Fraction(1) and I[0, 1] == 0


def test_rref_known():
    M = linalg.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    R, pivots = linalg.rref(M)
    assert pivots == [0, 1]
    assert linalg.rank(M) == 2


def test_nullspace_is_kernel_and_ordered():
    M = linalg.from_rows([[1, 2, 0, 1], [0, 0, 1, 1]])
    basis = linalg.nullspace(M)
    assert len(basis) == 2
    for v in basis:
        assert all(x == 0 for x in M @ v)
    # one vector per free column, ascending, unit in its free slot
    assert basis[0][1] == 1 and basis[1][3] == 1


def test_inv_exact_random():
    rng = random.Random(3)
    for _ in range(10):
        M = linalg.from_rows(
            [[rng.randint(-4, 4) for _ in range(4)] for _ in range(4)])
        try:
            Minv = linalg.inv(M)
        except DegenerateMetricError:
            continue
        assert linalg.mat_equal(M @ Minv, linalg.eye(4))


def test_inv_singular_raises():
    M = linalg.from_rows([[1, 2], [2, 4]])
    with pytest.raises(DegenerateMetricError):
        linalg.inv(M)


def test_float_backend_rref_rank():
    M = np.array([[1.0, 2.0], [2.0, 4.0 + 1e-13]])
    assert linalg.rank(M, tol=1e-9) == 1
    assert linalg.rank(M.astype(float) + np.eye(2), tol=1e-9) == 2


@pytest.mark.parametrize("diag,expected", [
    ([1, 1, 1], (3, 0)),
    ([1, -1, 1], (2, 1)),
    ([-2, -3, -5], (0, 3)),
])
def test_signature_diagonal(diag, expected):
    g = linalg.zeros((3, 3))
    for i, x in enumerate(diag):
        g[i, i] = Fraction(x)
    assert linalg.sylvester_signature(g) == expected


def test_signature_isotropic_diagonal():
    # hyperbolic plane: all diagonal entries vanish
    g = linalg.from_rows([[0, 1], [1, 0]])
    assert linalg.sylvester_signature(g) == (1, 1)


def test_signature_congruence_invariant():
    rng = random.Random(11)
    g = linalg.zeros((4, 4))
    for i, x in enumerate([1, 1, -1, -1]):
        g[i, i] = Fraction(x)
    for _ in range(10):
        P = linalg.from_rows(
            [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])
        try:
            linalg.inv(P)
        except DegenerateMetricError:
            continue
        assert linalg.sylvester_signature(P.T @ g @ P) == (2, 2)


def test_signature_degenerate_raises():
    g = linalg.from_rows([[1, 1], [1, 1]])
    with pytest.raises(DegenerateMetricError):
        linalg.sylvester_signature(g)


def test_signature_float_matches_exact():
    g = linalg.from_rows([[2, 1, 0], [1, -3, 1], [0, 1, 5]])
    exact = linalg.sylvester_signature(g)
    assert linalg.sylvester_signature(linalg.to_float(g)) == exact
