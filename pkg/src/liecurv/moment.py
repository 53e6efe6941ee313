"""Moment-map picture of the Ricci operator on metric Lie algebras.

A bracket a lives in Lambda^2 T* (x) T; the metric S pairs it with a dual
object q(a, S) in T (x) T* (x) T through

    q(e^i (x) a_i, S) = S^{-1} e^i (x) S^{-1} a_i^T S,

where a_i is the operator with matrix (a_i)^k_j = a^k_{ij} (that is, ad(e_i)
when a is a Lie bracket).  The two natural contractions

    c1(a, b) = sum_i a_i o b_i,     c2(a, b) = sum_i b_i o a_i

give the invariant pairing <a, b> = Tr c1 = Tr c2, the moment map
mu = c1 - 2 c2 of the GL(n) action, and -- for unimodular brackets with
vanishing Killing form -- the Ricci operator ric = 1/4 c1 - 1/2 c2 and
scalar curvature s(a, S) = -1/4 <a, q(a, S)>.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import linalg
from .curvature import RicciData, _require_lie, match_backends
from .errors import (DimensionMismatchError, KillingFormNonzeroError,
                     NotUnimodularError)
from .metric import Metric
from .scalars import DEFAULT_TOL, Scalar, close, format_scalar, is_zero
from .structure import StructureTensor, is_unimodular, killing_form

#: inputs to the bilinear maps: a full bracket object or a raw component
#: array c[i, j, k] = a^k_{ij} (antisymmetric in i, j but not necessarily Lie)
StructureLike = Union[StructureTensor, np.ndarray]


def _c_array(a: StructureLike) -> np.ndarray:
    return a.as_array() if isinstance(a, StructureTensor) else a


def _operators(c: np.ndarray) -> list:
    """Matrices u_i with (u_i)[k, j] = c[i, j, k]; u_i = ad(e_i) for brackets."""
    return [c[i].T for i in range(c.shape[0])]


def _is_exact(M: np.ndarray) -> bool:
    return not linalg.is_float_array(M)


@dataclass(frozen=True)
class DualStructureTensor:
    """Element of T (x) T* (x) T, antisymmetric in the two vector slots.

    comps[m, j, l] = b^{mj}_l, so b = sum b^{mj}_l e_m (x) e^l (x) e_j and
    the matrix comps[m] is the operator b_m (row = output index j).
    """

    n: int
    comps: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.comps.shape != (self.n, self.n, self.n):
            raise DimensionMismatchError(
                f"component array shape {self.comps.shape} != ({self.n},) * 3")
        skew = self.comps + np.transpose(self.comps, (1, 0, 2))
        if not linalg.mat_is_zero(skew, self.tol):
            raise ValueError("components are not antisymmetric in the vector pair")

    @property
    def exact(self) -> bool:
        return _is_exact(self.comps)

    def matrix(self, m: int) -> np.ndarray:
        return self.comps[m]

    def to_json(self) -> dict:
        terms = []
        for m in range(self.n):
            for j in range(self.n):
                for l in range(self.n):
                    c = self.comps[m, j, l]
                    if not is_zero(c, self.tol):
                        terms.append({"m": m + 1, "l": l + 1, "j": j + 1,
                                      "c": format_scalar(c)})
        return {"n": self.n, "terms": terms}


@dataclass(frozen=True)
class GaugeDirection:
    """An arbitrary element X of gl(n), acting infinitesimally on brackets."""

    X: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def traceless(self) -> bool:
        return is_zero(np.trace(self.X), self.tol)


def _direction(X) -> np.ndarray:
    return X.X if isinstance(X, GaugeDirection) else X


# --- the q map and its contractions ----------------------------------------

def q_map(a: StructureLike, S: Metric,
          require_unimodular: bool = True) -> DualStructureTensor:
    """The metric dual q(a, S) = S^{-1} e^i (x) S^{-1} a_i^T S.

    Linear in a.  The unimodularity precondition applies when `a` is a
    bracket meant to describe a metric Lie algebra; pass
    require_unimodular=False to evaluate the bare bilinear formula.
    """
    if isinstance(a, StructureTensor):
        a, S = match_backends(a, S)
        if require_unimodular and not is_unimodular(a):
            raise NotUnimodularError("q is defined on unimodular brackets")
    c = _c_array(a)
    n = S.n
    if c.shape != (n, n, n):
        raise DimensionMismatchError(
            f"bracket array shape {c.shape} incompatible with metric on R^{n}")
    ops = _operators(c)
    duals = [S.ginv @ u.T @ S.g for u in ops]
    comps = linalg.zeros((n, n, n), _is_exact(S.g))
    for m in range(n):
        acc = comps[m]
        for i in range(n):
            w = S.ginv[i, m]
            if not is_zero(w, S.tol):
                acc = acc + w * duals[i]
        comps[m] = acc
    return DualStructureTensor(n, comps, S.tol)


def contractions(a: StructureLike, b: DualStructureTensor):
    """(c1, c2) = (sum_i a_i o b_i, sum_i b_i o a_i); Tr c1 = Tr c2."""
    c = _c_array(a)
    n = b.n
    if c.shape != (n, n, n):
        raise DimensionMismatchError(
            f"bracket array shape {c.shape} does not match n={n}")
    ops = _operators(c)
    exact = _is_exact(c) and b.exact
    c1 = linalg.zeros((n, n), exact)
    c2 = linalg.zeros((n, n), exact)
    for i in range(n):
        c1 = c1 + ops[i] @ b.comps[i]
        c2 = c2 + b.comps[i] @ ops[i]
    return c1, c2


def pairing(a: StructureLike, b: DualStructureTensor) -> Scalar:
    """Invariant pairing <a, b> = Tr c1(a, b)."""
    c1, _ = contractions(a, b)
    return np.trace(c1)


def moment_map(a: StructureLike, b: DualStructureTensor):
    """(mu, <a, b>) with mu = c1 - 2 c2, the moment map of the GL(n) action."""
    c1, c2 = contractions(a, b)
    return c1 - 2 * c2, np.trace(c1)


def ricci_via_moment(a: StructureTensor, S: Metric) -> RicciData:
    """ric = 1/4 c1(a, q(a,S)) - 1/2 c2(a, q(a,S)).

    Valid on unimodular Lie brackets with identically zero Killing form;
    agrees with the curvature-module Ricci exactly on that class.
    """
    _require_lie(a)
    a, S = match_backends(a, S)
    if not is_unimodular(a):
        raise NotUnimodularError("the moment-map Ricci needs a unimodular bracket")
    if not linalg.mat_is_zero(killing_form(a), a.tol):
        raise KillingFormNonzeroError(
            "the moment-map Ricci needs an identically zero Killing form")
    c1, c2 = contractions(a, q_map(a, S))
    quarter = Fraction(1, 4) if S.exact else 0.25
    half = Fraction(1, 2) if S.exact else 0.5
    op = quarter * c1 - half * c2
    return RicciData.from_form(S, S.g @ op)


# --- the gauge action -------------------------------------------------------

def gauge_metric(g: np.ndarray, S: Metric) -> Metric:
    """Finite action g.S = g^{-T} S g^{-1} (pullback along g^{-1})."""
    ginv = linalg.inv(g, S.tol)
    return Metric(S.n, ginv.T @ S.g @ ginv, S.tol)


def infinitesimal_metric(X, S: Metric) -> np.ndarray:
    """Derivative of exp(tX).S at t = 0: -X^T S - S X (a symmetric matrix)."""
    X = _direction(X)
    return -X.T @ S.g - S.g @ X


def gauge_structure(g: np.ndarray, a: StructureTensor) -> StructureTensor:
    """Finite action (g.a)(x, y) = g [g^{-1} x, g^{-1} y]."""
    c = a.as_array()
    ginv = linalg.inv(g, a.tol)
    t = np.tensordot(c, g, axes=([2], [1]))          # [p, q, k]
    t = np.tensordot(ginv, t, axes=([0], [0]))       # [i, q, k]
    t = np.tensordot(t, ginv, axes=([1], [0]))       # [i, k, j]
    t = np.transpose(t, (0, 2, 1))
    return _structure_from_array(a.n, t, a.tol)


def infinitesimal_structure(X, a: StructureLike) -> np.ndarray:
    """(X.a)(x, y) = X[x, y] - [Xx, y] - [x, Xy], as a component array.

    Vanishes exactly when X is a derivation of a.
    """
    X = _direction(X)
    c = _c_array(a)
    t1 = np.tensordot(c, X, axes=([2], [1]))                   # X[k,m] c[i,j,m]
    t2 = np.tensordot(X, c, axes=([0], [0]))                   # X[m,i] c[m,j,k]
    t3 = np.transpose(np.tensordot(X, np.transpose(c, (1, 0, 2)),
                                   axes=([0], [0])), (1, 0, 2))
    return t1 - t2 - t3


def gauge_dual(g: np.ndarray, b: DualStructureTensor) -> DualStructureTensor:
    """Finite action on the dual side; equivariance partner of gauge_structure."""
    ginv = linalg.inv(g, b.tol)
    t = np.tensordot(g, b.comps, axes=([1], [0]))    # [k, j', l']
    t = np.tensordot(g, t, axes=([1], [1]))          # [j, k, l']
    t = np.tensordot(t, ginv, axes=([2], [0]))       # [j, k, l]
    return DualStructureTensor(b.n, np.transpose(t, (1, 0, 2)), b.tol)


def infinitesimal_dual(X, b: DualStructureTensor) -> np.ndarray:
    """Derivative of exp(tX).b at t = 0, as a raw component array."""
    X = _direction(X)
    c = b.comps
    t1 = np.tensordot(X, c, axes=([1], [0]))
    t2 = np.transpose(np.tensordot(X, np.transpose(c, (1, 0, 2)),
                                   axes=([1], [0])), (1, 0, 2))
    t3 = np.tensordot(c, X, axes=([2], [0]))
    return t1 + t2 - t3


def dq(a: StructureLike, S: Metric, a_prime: StructureLike,
       W: np.ndarray) -> DualStructureTensor:
    """Derivative of q at (a, S) in the direction (a_prime, W), W symmetric.

    Satisfies dq(a, S)(a', X.S) = q(a' - X.a, S) + X.q(a, S) for any X.
    """
    n = S.n
    base = q_map(a_prime, S, require_unimodular=False).comps
    ops = _operators(_c_array(a))
    T = S.ginv @ W @ S.ginv
    comps = linalg.zeros((n, n, n), _is_exact(S.g) and _is_exact(W))
    for m in range(n):
        acc = base[m]
        for i in range(n):
            at = ops[i].T
            if not is_zero(T[i, m], S.tol):
                acc = acc - T[i, m] * (S.ginv @ at @ S.g)
            w = S.ginv[i, m]
            if not is_zero(w, S.tol):
                acc = acc + w * (-T @ at @ S.g + S.ginv @ at @ W)
        comps[m] = acc
    return DualStructureTensor(n, comps, S.tol)


# --- the scalar functional and criticality ----------------------------------

def scalar_functional(a: StructureTensor, S: Metric) -> Scalar:
    """s(a, S) = -1/4 <a, q(a, S)>; the scalar curvature when a is in P."""
    a, S = match_backends(a, S)
    if not is_unimodular(a):
        raise NotUnimodularError("the scalar functional needs a unimodular bracket")
    quarter = Fraction(1, 4) if S.exact else 0.25
    return -quarter * pairing(a, q_map(a, S))


def gauge_derivative(a: StructureTensor, S: Metric, X) -> Scalar:
    """Directional derivative X+s of s along the gauge orbit: -2 <ric, X>.

    Asserts the two equivalent expressions <ric, X> = 1/4 <X.a, q(a, S)>
    before returning; zero whenever X is a derivation of a, and zero for
    traceless X exactly at Einstein metrics.
    """
    a, S = match_backends(a, S)
    X = _direction(X)
    ric = ricci_via_moment(a, S)
    inner = np.trace(ric.ric_op @ X)
    quarter = Fraction(1, 4) if S.exact else 0.25
    alt = quarter * pairing(infinitesimal_structure(X, a), q_map(a, S))
    if not close(inner, alt, S.tol):
        raise AssertionError(
            f"gauge-derivative identities disagree: {inner} vs {alt}")
    return -2 * inner


def _structure_from_array(n, c, tol) -> StructureTensor:
    coeffs = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if not is_zero(c[i, j, k], tol):
                    coeffs[(i, j, k)] = c[i, j, k]
    return StructureTensor.from_brackets(n, coeffs, tol)


def _variable_index(n):
    """Column order for components a'^k_{ij}, i < j."""
    index = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                index[(i, j, k)] = len(index)
    return index


def _add_var(row, index, i, j, k, coef):
    if i == j:
        return
    if i < j:
        row[index[(i, j, k)]] += coef
    else:
        row[index[(j, i, k)]] -= coef


def _linearized_jacobi_matrix(a: StructureTensor, index):
    """Matrix of a' -> d/dt Jacobi(a + t a') at t = 0."""
    n = a.n
    c = a.as_array()
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    row = linalg.zeros(len(index), a.exact)
                    for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                        for m in range(n):
                            if not is_zero(c[x, y, m], a.tol):
                                _add_var(row, index, m, z, l, c[x, y, m])
                            if not is_zero(c[m, z, l], a.tol):
                                _add_var(row, index, x, y, m, c[m, z, l])
                    rows.append(row)
    return np.stack(rows)


def _linearized_killing_matrix(a: StructureTensor, index):
    """Matrix of a' -> d/dt Killing(a + t a') at t = 0, rows over pairs u <= v."""
    n = a.n
    ads = [a.ad_basis(i) for i in range(n)]
    cols = {}
    for (i, j, k), col in index.items():
        entries = linalg.zeros((n, n), a.exact)
        # unit direction a'^k_{ij} = 1: the only nonzero operators are
        # a'_i = e_k (x) e^j and a'_j = -e_k (x) e^i
        for v in range(n):
            entries[i, v] += ads[v][j, k]
            entries[j, v] -= ads[v][i, k]
            entries[v, i] += ads[v][j, k]
            entries[v, j] -= ads[v][i, k]
        cols[col] = entries
    rows = []
    for u in range(n):
        for v in range(u, n):
            row = linalg.zeros(len(index), a.exact)
            for col, entries in cols.items():
                row[col] = entries[u, v]
            rows.append(row)
    return np.stack(rows)


def _vector_to_array(vec, index, n, exact):
    c = linalg.zeros((n, n, n), exact)
    for (i, j, k), col in index.items():
        c[i, j, k] = vec[col]
        c[j, i, k] = -vec[col]
    return c


def jacobi_tangent_critical(a: StructureTensor, S: Metric) -> dict:
    """Criticality of the scalar functional along bracket deformations.

    The tangent space is the kernel of the linearized Jacobi map; the
    bracket is critical when <a', q(a, S)> vanishes for every tangent a'.
    The kernel cut down by the linearized Killing-form-zero condition is
    reported alongside with its own verdict.
    """
    _require_lie(a)
    a, S = match_backends(a, S)
    if not is_unimodular(a):
        raise NotUnimodularError("criticality is considered for unimodular brackets")
    if not linalg.mat_is_zero(killing_form(a), a.tol):
        raise KillingFormNonzeroError(
            "criticality is considered for brackets with zero Killing form")
    n = a.n
    index = _variable_index(n)
    J = _linearized_jacobi_matrix(a, index)
    K = _linearized_killing_matrix(a, index)
    qb = q_map(a, S)

    def verdict(matrix):
        basis = linalg.nullspace(matrix, a.tol)
        vals = [pairing(_vector_to_array(v, index, n, a.exact), qb) for v in basis]
        return len(basis), all(is_zero(x, S.tol) for x in vals)

    tangent_dim, critical = verdict(J)
    killing_dim, killing_critical = verdict(np.concatenate([J, K], axis=0))
    return {
        "tangent_dim": tangent_dim,
        "critical": bool(critical),
        "tangent_dim_killing": killing_dim,
        "critical_killing": bool(killing_critical),
    }
