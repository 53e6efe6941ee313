"""Shared helpers for the test suite."""

from liecurv.structure import StructureTensor


def tensor_from_array(c):
    """Build a StructureTensor from an antisymmetric component array."""
    n = c.shape[0]
    coeffs = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if c[i, j, k] != 0:
                    coeffs[(i, j, k)] = c[i, j, k]
    return StructureTensor(n, coeffs)
