"""Scalar products, signatures, musical isomorphisms, induced pairings.

A metric is the symmetric matrix g of the isomorphism S: T -> T*, so
<v, w> = v^T g w.  Induced pairings on tensor spaces follow the usual
conventions: on operators <u1, u2> = Tr(u1 o u2*) with u2* = g^{-1} u2^T g
the metric adjoint, and on 2-forms <e^{ij}, e^{ij}> = eps_i eps_j in a
pseudo-orthonormal frame.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import (DegenerateMetricError, DimensionMismatchError,
                     MetricParseError)
from .scalars import DEFAULT_TOL, Scalar, format_scalar, is_zero, parse_scalar

TENSOR_SHAPES = ("T", "T*", "Lambda2T*", "T*T", "Lambda2T*T")


@dataclass(frozen=True)
class Metric:
    """Nondegenerate symmetric scalar product on R^n."""

    n: int
    g: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.g.shape != (self.n, self.n):
            raise DimensionMismatchError(
                f"metric matrix shape {self.g.shape} != ({self.n}, {self.n})")
        if not linalg.mat_equal(self.g, self.g.T, self.tol):
            raise MetricParseError("metric matrix is not symmetric")
        try:
            object.__setattr__(self, "_ginv", linalg.inv(self.g, self.tol))
        except DegenerateMetricError:
            raise DegenerateMetricError("metric is degenerate")

    @property
    def exact(self) -> bool:
        return not linalg.is_float_array(self.g)

    @property
    def ginv(self) -> np.ndarray:
        return self._ginv

    @classmethod
    def diagonal(cls, entries: Sequence[Scalar], tol: float = DEFAULT_TOL) -> "Metric":
        exact = all(not isinstance(x, float) for x in entries)
        g = linalg.zeros((len(entries), len(entries)), exact)
        for i, x in enumerate(entries):
            g[i, i] = x
        return cls(len(entries), g, tol)

    @classmethod
    def euclidean(cls, n: int, exact: bool = True) -> "Metric":
        return cls(n, linalg.eye(n, exact))

    def to_float(self) -> "Metric":
        return Metric(self.n, linalg.to_float(self.g), self.tol)

    def inner(self, v: np.ndarray, w: np.ndarray) -> Scalar:
        return (v @ self.g @ w)

    def lower(self, v: np.ndarray) -> np.ndarray:
        """v^flat as a component row of a covector."""
        return self.g @ v

    def raise_(self, alpha: np.ndarray) -> np.ndarray:
        """alpha^sharp."""
        return self.ginv @ alpha

    def to_json(self) -> dict:
        return {"n": self.n,
                "g": [[format_scalar(x) for x in row] for row in self.g]}

    def __str__(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def to_json(self):
        return [self.p, self.q]


def signature(S: Metric) -> Signature:
    """(p, q) by Sylvester's law of inertia."""
    p, q = linalg.sylvester_signature(S.g, S.tol)
    return Signature(p, q)


# --- parsing ----------------------------------------------------------------

_METRIC_TERM = re.compile(
    r"""(?P<sign>[+-]?)\s*
        (?P<coeff>\d+(?:\.\d+)?(?:/\d+)?)?\s*\*?\s*
        e(?P<i>\d+)\s*(?P<op>[.⊙⊗ox])\s*e(?P<j>\d+)\s*""",
    re.VERBOSE,
)


def parse_metric(text: str, n: int, exact: bool = True,
                 tol: float = DEFAULT_TOL) -> Metric:
    """Parse "diag(...)", a JSON matrix, or a sum of eI.eJ / eI*eI terms.

    The symmetric product eI.eJ contributes the coefficient to entries
    (i, j) and (j, i); eI.eI contributes to the diagonal entry only.
    """
    text = text.strip()
    if text.startswith("diag"):
        inner = text[4:].strip()
        if not (inner.startswith("(") and inner.endswith(")")):
            raise MetricParseError(f"malformed diag(...) input: {text!r}")
        entries = [parse_scalar(tok, exact) for tok in inner[1:-1].split(",")]
        if len(entries) != n:
            raise MetricParseError(
                f"diag has {len(entries)} entries, expected {n}")
        if any(is_zero(x, tol) for x in entries):
            raise MetricParseError("diagonal metric with a zero entry is degenerate")
        return Metric.diagonal(entries, tol)
    if text.startswith("[") or text.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            if "n" in data and data["n"] != n:
                raise MetricParseError(f"dimension mismatch: {data['n']} != {n}")
            data = data["g"]
        if len(data) != n or any(len(row) != n for row in data):
            raise MetricParseError(f"matrix is not {n}x{n}")
        g = linalg.zeros((n, n), exact)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                g[i, j] = parse_scalar(str(x), exact)
        return Metric(n, g, tol)
    # sum of terms
    g = linalg.zeros((n, n), exact)
    pos = 0
    while pos < len(text):
        m = _METRIC_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise MetricParseError(
                f"malformed metric term at position {pos}: {text[pos:pos+12]!r}")
        pos = m.end()
        coeff = parse_scalar(m.group("coeff") or "1", exact)
        if m.group("sign") == "-":
            coeff = -coeff
        i, j = int(m.group("i")) - 1, int(m.group("j")) - 1
        if not (0 <= i < n and 0 <= j < n):
            raise MetricParseError(f"index out of range 1..{n} in {m.group(0).strip()!r}")
        if i == j:
            g[i, i] += coeff
        else:
            g[i, j] += coeff
            g[j, i] += coeff
    return Metric(n, g, tol)


# --- induced pairings -------------------------------------------------------

def pair_vectors(S: Metric, v, w):
    return v @ S.g @ w


def pair_covectors(S: Metric, alpha, beta):
    return alpha @ S.ginv @ beta


def metric_adjoint(S: Metric, u: np.ndarray) -> np.ndarray:
    """u* with <u v, w> = <v, u* w>."""
    return S.ginv @ u.T @ S.g


def pair_operators(S: Metric, u1: np.ndarray, u2: np.ndarray):
    """Induced pairing on T*⊗T: <u1, u2> = Tr(u1 o u2*)."""
    return np.trace(u1 @ metric_adjoint(S, u2))


def pair_two_forms(S: Metric, alpha: np.ndarray, beta: np.ndarray):
    """Induced pairing on Lambda^2 T* for antisymmetric component matrices."""
    half = Fraction(1, 2) if S.exact else 0.5
    return half * np.trace(S.ginv @ alpha @ S.ginv @ beta.T)


def pair_bracket_tensors(S: Metric, c1: np.ndarray, c2: np.ndarray):
    """Induced pairing on Lambda^2 T* ⊗ T for arrays c[i, j, k] (antisym i,j)."""
    half = Fraction(1, 2) if S.exact else 0.5
    # raise the two form indices, lower the vector index, then contract
    t = np.tensordot(c1, S.ginv, axes=([0], [0]))   # [j, k, l]
    t = np.tensordot(t, S.ginv, axes=([0], [0]))    # [k, l, m]
    t = np.tensordot(t, S.g, axes=([0], [0]))       # [l, m, p]
    return half * np.tensordot(t, c2, axes=([0, 1, 2], [0, 1, 2]))[()]


def induced_pairing(S: Metric, shape: str) -> Callable:
    """Bilinear form on the tensor space named by `shape`.

    Shapes: "T" (vectors), "T*" (covectors), "Lambda2T*" (antisymmetric
    matrices of 2-form components), "T*T" (operators), "Lambda2T*T"
    (arrays c[i,j,k], antisymmetric in i,j).
    """
    table = {
        "T": pair_vectors,
        "T*": pair_covectors,
        "Lambda2T*": pair_two_forms,
        "T*T": pair_operators,
        "Lambda2T*T": pair_bracket_tensors,
    }
    if shape not in table:
        raise ValueError(f"unsupported tensor shape {shape!r}; "
                         f"expected one of {TENSOR_SHAPES}")
    fn = table[shape]
    return lambda x, y: fn(S, x, y)


def pseudo_orthonormal_frame(S: Metric):
    """Frame F with F^T g F = diag(eps), eps sorted +1 first (float backend)."""
    g = np.asarray(linalg.to_float(S.g), dtype=float)
    w, Q = np.linalg.eigh(g)
    if np.min(np.abs(w)) <= S.tol:
        raise DegenerateMetricError("numerically degenerate metric")
    order = np.argsort(w < 0, kind="stable")  # positives first, stable
    w, Q = w[order], Q[:, order]
    F = Q / np.sqrt(np.abs(w))
    eps = np.where(w > 0, 1, -1).astype(int)
    return F, eps
