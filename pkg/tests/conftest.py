import random
from fractions import Fraction

import numpy as np
import pytest

from liecurv import linalg
from liecurv.catalog import load_catalog, verify_catalog
from liecurv.metric import Metric


@pytest.fixture(scope="session")
def catalog_entries():
    return load_catalog()


@pytest.fixture(scope="session")
def catalog_reports(catalog_entries):
    """Verify the whole shipped catalog once per session."""
    return verify_catalog(catalog_entries)


def random_sparse_bracket(rng: random.Random, n: int, terms: int = 6):
    """Antisymmetric component array with small integer entries."""
    c = linalg.zeros((n, n, n), True)
    for _ in range(terms):
        i, j, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        v = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
        c[i, j, k] += v
        c[j, i, k] -= v
    return c


def random_matrix(rng: random.Random, n: int, terms: int = 5):
    M = linalg.zeros((n, n), True)
    for _ in range(terms):
        M[rng.randrange(n), rng.randrange(n)] += \
            Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return M


def random_metric(rng: random.Random, n: int) -> Metric:
    """Random nondegenerate symmetric matrix, usually indefinite."""
    while True:
        g = linalg.eye(n) + random_matrix(rng, n)
        D = linalg.zeros((n, n), True)
        for i in range(n):
            D[i, i] = Fraction(rng.choice([1, 1, -1]))
        try:
            return Metric(n, g.T @ D @ g)
        except Exception:
            continue


def random_invertible(rng: random.Random, n: int):
    while True:
        g = linalg.eye(n) + random_matrix(rng, n)
        try:
            linalg.inv(g)
            return g
        except Exception:
            continue
