"""Derivation algebras and the trace obstruction to nonzero scalar curvature.

A derivation of a bracket is a linear map X with X[v, w] = [Xv, w] + [v, Xw].
For a unimodular Lie algebra with identically zero Killing form, the
existence of a derivation with nonzero trace rules out Einstein metrics of
nonzero scalar curvature, so the space Der(g) -- an exact kernel of a
linear system in the n^2 matrix entries -- is itself a curvature invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .errors import (KillingFormNonzeroError, NotLieAlgebraError,
                     NotUnimodularError)
from .scalars import DEFAULT_TOL, is_zero
from .structure import StructureTensor, is_lie, is_unimodular, killing_form


@dataclass(frozen=True)
class DerivationSpace:
    """Der(g) as a reduced-echelon basis of n x n matrices."""

    n: int
    basis: tuple
    trace_witness: Optional[np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def has_nonzero_trace(self) -> bool:
        return self.trace_witness is not None

    def contains(self, X: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        """Exact membership of X in the span of the basis."""
        if not self.basis:
            return linalg.mat_is_zero(X, tol)
        n = self.n
        rows = np.stack([B.reshape(n * n) for B in self.basis])
        stacked = np.concatenate([rows, X.reshape(1, n * n)], axis=0)
        return linalg.rank(stacked, tol) == self.dim


def _derivation_system(a: StructureTensor) -> np.ndarray:
    """Rows of the linear system on X (flattened row-major, n^2 unknowns).

    One equation per (i < j, l): the e_l component of
    X[e_i, e_j] - [Xe_i, e_j] - [e_i, Xe_j].
    """
    n = a.n
    c = a.as_array()
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(n):
                row = linalg.zeros(n * n, a.exact)
                for k in range(n):
                    if not is_zero(c[i, j, k], a.tol):
                        row[l * n + k] += c[i, j, k]
                    # [X e_i, e_j] picks up X[m, i] a^l_{mj}
                    if not is_zero(c[k, j, l], a.tol):
                        row[k * n + i] -= c[k, j, l]
                    if not is_zero(c[i, k, l], a.tol):
                        row[k * n + j] -= c[i, k, l]
                rows.append(row)
    return np.stack(rows)


def derivation_space(a: StructureTensor) -> DerivationSpace:
    """Exact kernel of the derivation system, with a trace witness if any.

    The witness is the first reduced-echelon basis element with nonzero
    trace, which makes it reproducible across runs.
    """
    if not is_lie(a):
        raise NotLieAlgebraError("derivations are computed for Lie brackets only")
    n = a.n
    null = linalg.nullspace(_derivation_system(a), a.tol)
    if null:
        R, pivots = linalg.rref(np.stack(null), a.tol)
        basis = tuple(R[r].reshape(n, n) for r in range(len(pivots)))
    else:
        basis = ()
    witness = None
    for B in basis:
        if not is_zero(np.trace(B), a.tol):
            witness = B
            break
    return DerivationSpace(n, basis, witness)


def trace_obstruction(a: StructureTensor) -> dict:
    """Einstein obstruction: a trace != 0 derivation forces s = 0.

    Requires a unimodular bracket with identically zero Killing form (the
    class on which the obstruction theorem applies).
    """
    if not is_unimodular(a):
        raise NotUnimodularError("the trace obstruction needs a unimodular bracket")
    if not linalg.mat_is_zero(killing_form(a), a.tol):
        raise KillingFormNonzeroError(
            "the trace obstruction needs an identically zero Killing form")
    der = derivation_space(a)
    return {
        "dim_der": der.dim,
        "has_nonzero_trace_derivation": der.has_nonzero_trace,
        "witness": der.trace_witness,
        "einstein_nonzero_s_excluded": der.has_nonzero_trace,
    }


@dataclass(frozen=True)
class DiagonalSolve:
    """Solutions x of the diagonal-derivation system diag(x) . a = 0."""

    n: int
    basis: tuple          # vectors spanning the solution space
    trace_witness: Optional[np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def trace_can_be_nonzero(self) -> bool:
        return self.trace_witness is not None

    def satisfies(self, functional, tol: float = DEFAULT_TOL) -> bool:
        """Whether a linear relation sum_i functional[i] * x_i = 0 holds."""
        return all(is_zero(np.dot(functional, v), tol) for v in self.basis)


def diagonal_derivation_solve(a: StructureTensor) -> DiagonalSolve:
    """Diagonal X = diag(x_1..x_n) with X a derivation: x_i + x_j = x_k
    for every nonzero a^k_{ij}."""
    n = a.n
    rows = []
    for (i, j, k), c in sorted(a.coeffs.items()):
        row = linalg.zeros(n, a.exact)
        row[i] += c
        row[j] += c
        row[k] -= c
        # the equation is c * (x_i + x_j - x_k) = 0; keep c for exactness
        rows.append(row)
    if not rows:
        basis = tuple(linalg.eye(n, a.exact)[i] for i in range(n))
    else:
        null = linalg.nullspace(np.stack(rows), a.tol)
        if null:
            R, pivots = linalg.rref(np.stack(null), a.tol)
            basis = tuple(R[r] for r in range(len(pivots)))
        else:
            basis = ()
    witness = None
    for v in basis:
        if not is_zero(np.sum(v), a.tol):
            witness = v
            break
    return DiagonalSolve(n, basis, witness)
