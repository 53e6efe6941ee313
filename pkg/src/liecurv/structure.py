"""Structure tensors of Lie brackets and metric-independent Lie theory.

A bracket on an n-dimensional space is stored through its components
a^k_{ij} with [e_i, e_j] = sum_k a^k_{ij} e_k, kept for i < j only
(antisymmetry is enforced by storage).  The text notation is the usual
tuple of exterior derivatives, de^k = sum coeff * e^i ^ e^j, with the sign
convention

    de^k(e_i, e_j) = -e^k([e_i, e_j]),

so the slot "12" in position k encodes a^k_{12} = -1.  All golden values in
the test suite are transcribed under this convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, StructureParseError
from .scalars import (DEFAULT_TOL, Scalar, format_scalar, is_zero,
                      parse_scalar)

MAX_DIM = 16


def _freeze(coeffs, tol):
    out = {}
    for (i, j, k), c in coeffs.items():
        if i == j:
            raise ValueError(f"bracket [e{i+1},e{i+1}] must vanish")
        if i > j:
            i, j, c = j, i, -c
        if not is_zero(c, tol):
            out[(i, j, k)] = out.get((i, j, k), type(c)(0)) + c
    return {key: c for key, c in out.items() if not is_zero(c, tol)}


@dataclass(frozen=True)
class StructureTensor:
    """Components a^k_{ij} of an antisymmetric bracket on R^n (0-based keys)."""

    n: int
    coeffs: Mapping[tuple[int, int, int], Scalar]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not 2 <= self.n <= MAX_DIM:
            raise ValueError(f"dimension must be in [2, {MAX_DIM}], got {self.n}")
        for (i, j, k) in self.coeffs:
            if not (0 <= i < j < self.n and 0 <= k < self.n):
                raise ValueError(f"index triple {(i, j, k)} out of range for n={self.n}")
        object.__setattr__(self, "coeffs", dict(self.coeffs))

    @classmethod
    def from_brackets(cls, n, coeffs, tol=DEFAULT_TOL):
        """Build from a {(i, j, k): a^k_ij} map, 0-based, any index order."""
        return cls(n, _freeze(coeffs, tol), tol)

    @property
    def exact(self) -> bool:
        return all(not isinstance(c, float) for c in self.coeffs.values())

    def a(self, i: int, j: int, k: int) -> Scalar:
        """Component a^k_{ij} with antisymmetry in (i, j)."""
        zero = Fraction(0) if self.exact else 0.0
        if i == j:
            return zero
        if i < j:
            return self.coeffs.get((i, j, k), zero)
        return -self.coeffs.get((j, i, k), zero)

    def as_array(self) -> np.ndarray:
        """Dense components c[i, j, k] = a^k_{ij}."""
        c = linalg.zeros((self.n, self.n, self.n), self.exact)
        for (i, j, k), v in self.coeffs.items():
            c[i, j, k] = v
            c[j, i, k] = -v
        return c

    def bracket(self, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        return self.ad(v) @ w

    def ad(self, v: np.ndarray) -> np.ndarray:
        """Matrix of ad(v): w -> [v, w]."""
        if len(v) != self.n:
            raise DimensionMismatchError(f"vector length {len(v)} != n={self.n}")
        M = linalg.zeros((self.n, self.n), self.exact)
        for (i, j, k), c in self.coeffs.items():
            M[k, j] += c * v[i]
            M[k, i] -= c * v[j]
        return M

    def ad_basis(self, i: int) -> np.ndarray:
        """Matrix of ad(e_i)."""
        M = linalg.zeros((self.n, self.n), self.exact)
        for (p, q, k), c in self.coeffs.items():
            if p == i:
                M[k, q] += c
            elif q == i:
                M[k, p] -= c
        return M

    def to_float(self) -> "StructureTensor":
        return StructureTensor(
            self.n, {key: float(c) for key, c in self.coeffs.items()}, self.tol)

    def terms(self) -> Iterator[tuple[int, int, int, Scalar]]:
        """Nonzero (i, j, k, a^k_ij) with i < j, sorted by (k, i, j)."""
        for (i, j, k) in sorted(self.coeffs, key=lambda t: (t[2], t[0], t[1])):
            yield i, j, k, self.coeffs[(i, j, k)]

    def __str__(self) -> str:
        return print_structure(self)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "brackets": [
                {"i": i + 1, "j": j + 1, "k": k + 1, "c": format_scalar(c)}
                for i, j, k, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data, exact=True, tol=DEFAULT_TOL):
        coeffs = {
            (b["i"] - 1, b["j"] - 1, b["k"] - 1): parse_scalar(str(b["c"]), exact)
            for b in data["brackets"]
        }
        return cls.from_brackets(data["n"], coeffs, tol)


# --- text notation ----------------------------------------------------------

_TERM = re.compile(
    r"""(?P<sign>[+-]?)\s*
        (?P<coeff>\d+(?:\.\d+)?(?:/\d+)?)?\s*\*?\s*
        (?:
            (?P<pair>\d\d)
          | \(\s*(?P<pi>\d+)\s*,\s*(?P<pj>\d+)\s*\)
        )\s*""",
    re.VERBOSE,
)


def _split_slots(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    slots, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            slots.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    slots.append("".join(cur))
    return slots


def parse_structure(text: str, exact: bool = True,
                    tol: float = DEFAULT_TOL) -> StructureTensor:
    """Parse tuple notation like "(0,0,12)" or "(0,0,3*(1,2))".

    Slot k lists de^k as a sum of coeff * e^i ^ e^j terms; two-digit tokens
    are only allowed for n <= 9.  Each term contributes a^k_{ij} = -coeff.
    """
    slots = _split_slots(text)
    n = len(slots)
    if not 2 <= n <= MAX_DIM:
        raise StructureParseError(f"need between 2 and {MAX_DIM} slots, got {n}")
    coeffs: dict[tuple[int, int, int], Scalar] = {}
    for k, slot in enumerate(slots):
        slot = slot.strip()
        if slot in ("0", ""):
            continue
        pos = 0
        seen_pairs = set()
        while pos < len(slot):
            m = _TERM.match(slot, pos)
            if not m or m.end() == pos:
                raise StructureParseError(
                    f"malformed token at position {pos}", slot=k + 1,
                    token=slot[pos:pos + 8])
            pos = m.end()
            coeff = parse_scalar(m.group("coeff") or "1", exact)
            if m.group("sign") == "-":
                coeff = -coeff
            if m.group("pair"):
                if n > 9:
                    raise StructureParseError(
                        "two-digit pairs need n <= 9; use (i,j)", slot=k + 1,
                        token=m.group("pair"))
                i, j = int(m.group("pair")[0]), int(m.group("pair")[1])
            else:
                i, j = int(m.group("pi")), int(m.group("pj"))
            if not (1 <= i <= n and 1 <= j <= n):
                raise StructureParseError(
                    f"index out of range 1..{n}", slot=k + 1, token=m.group(0).strip())
            if i == j:
                raise StructureParseError(
                    "repeated index in wedge pair", slot=k + 1, token=m.group(0).strip())
            pair = (min(i, j), max(i, j))
            if pair in seen_pairs:
                raise StructureParseError(
                    f"repeated index pair {pair}", slot=k + 1, token=m.group(0).strip())
            seen_pairs.add(pair)
            if i > j:
                i, j, coeff = j, i, -coeff
            # de^k = sum coeff e^ij  <=>  a^k_ij = -coeff
            coeffs[(i - 1, j - 1, k)] = -coeff
    return StructureTensor.from_brackets(n, coeffs, tol)


def print_structure(a: StructureTensor) -> str:
    """Canonical inverse of parse_structure."""
    slots = []
    for k in range(a.n):
        parts = []
        for i, j, kk, c in a.terms():
            if kk != k:
                continue
            coeff = -c  # back to d-notation
            sign = "-" if (coeff < 0 if not isinstance(coeff, float) else coeff < 0) else "+"
            mag = -coeff if sign == "-" else coeff
            pair = f"{i + 1}{j + 1}" if a.n <= 9 else f"({i + 1},{j + 1})"
            body = pair if mag == 1 else f"{format_scalar(mag)}*{pair}"
            parts.append((sign, body))
        if not parts:
            slots.append("0")
        else:
            first_sign, first_body = parts[0]
            out = ("-" if first_sign == "-" else "") + first_body
            for sign, body in parts[1:]:
                out += sign + body
            slots.append(out)
    return "(" + ",".join(slots) + ")"


# --- Lie-theoretic predicates ----------------------------------------------

def jacobi_defect(a: StructureTensor) -> dict[tuple[int, int, int], np.ndarray]:
    """J(e_i,e_j,e_k) = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j].

    Returns the nonzero components on triples i < j < k; empty iff `a`
    satisfies the Jacobi identity.
    """
    n = a.n
    ads = [a.ad_basis(i) for i in range(n)]

    def bracket_col(vec, k):
        # ad(vec) e_k, skipping the zero components of vec
        out = linalg.zeros(n, a.exact)
        for m in range(n):
            x = vec[m]
            if not is_zero(x, a.tol):
                out = out + x * ads[m][:, k]
        return out

    defect = {}
    for i in range(n):
        for j in range(i + 1, n):
            bij = ads[i][:, j]
            for k in range(j + 1, n):
                v = bracket_col(bij, k) + bracket_col(ads[j][:, k], i) \
                    - bracket_col(ads[i][:, k], j)
                if not all(is_zero(x, a.tol) for x in v):
                    defect[(i, j, k)] = v
    return defect


def _basis(n, i, exact):
    v = linalg.zeros(n, exact)
    v[i] = Fraction(1) if exact else 1.0
    return v


def is_lie(a: StructureTensor) -> bool:
    return not jacobi_defect(a)


def killing_form(a: StructureTensor) -> np.ndarray:
    """B(v, w) = Tr(ad v o ad w) on the basis."""
    ads = [a.ad_basis(i) for i in range(a.n)]
    B = linalg.zeros((a.n, a.n), a.exact)
    for i in range(a.n):
        for j in range(i, a.n):
            t = linalg.sparse_frob(ads[i], ads[j].T)
            B[i, j] = t
            B[j, i] = t
    return B


def trace_ad(a: StructureTensor) -> np.ndarray:
    """Vector of Tr ad(e_i); zero iff unimodular."""
    t = linalg.zeros(a.n, a.exact)
    for (i, j, k), c in a.coeffs.items():
        if k == j:
            t[i] += c
        if k == i:
            t[j] -= c
    return t


def is_unimodular(a: StructureTensor) -> bool:
    return all(is_zero(x, a.tol) for x in trace_ad(a))


@dataclass(frozen=True)
class SubspaceFlag:
    """Descending chain of subspaces, each given by a row-space basis matrix."""

    n: int
    spaces: Sequence[np.ndarray]  # each of shape (dim, n), rref rows

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.shape[0] for s in self.spaces)


def _row_space(rows, n, exact, tol):
    if not rows:
        return linalg.zeros((0, n), exact)
    M = np.stack(rows)
    R, pivots = linalg.rref(M, tol)
    return R[:len(pivots), :]


def _bracket_space(a: StructureTensor, basis_rows: Optional[np.ndarray] = None):
    """Row basis of [g, U] where U is spanned by basis_rows (default g)."""
    n = a.n
    if basis_rows is None:
        vs = [_basis(n, i, a.exact) for i in range(n)]
    else:
        vs = list(basis_rows)
    rows = [a.ad_basis(i) @ v for i in range(n) for v in vs]
    rows = [r for r in rows if not all(is_zero(x, a.tol) for x in r)]
    return _row_space(rows, n, a.exact, a.tol)


def lower_central_series(a: StructureTensor) -> SubspaceFlag:
    """g^1 = [g, g], g^{i+1} = [g, g^i], until stabilization or zero."""
    spaces = []
    current = _bracket_space(a)
    while True:
        spaces.append(current)
        if current.shape[0] == 0:
            break
        nxt = _bracket_space(a, current)
        if nxt.shape[0] == current.shape[0]:
            break
        current = nxt
    return SubspaceFlag(a.n, spaces)


def derived_series_terminates(a: StructureTensor) -> bool:
    """Solvability via the derived series g, [g,g], [[g,g],[g,g]], ..."""
    current = None
    dim = a.n
    while True:
        rows = _derived(a, current)
        if rows.shape[0] == 0:
            return True
        if rows.shape[0] == dim:
            return False
        current, dim = rows, rows.shape[0]


def _derived(a, basis_rows):
    n = a.n
    if basis_rows is None:
        vs = [_basis(n, i, a.exact) for i in range(n)]
    else:
        vs = list(basis_rows)
    rows = [a.ad(v) @ w for v in vs for w in vs]
    rows = [r for r in rows if not all(is_zero(x, a.tol) for x in r)]
    return _row_space(rows, n, a.exact, a.tol)


def centre(a: StructureTensor) -> np.ndarray:
    """Row basis of Z = {v : ad(v) = 0}."""
    n = a.n
    M = linalg.zeros((n * n, n), a.exact)
    for (i, j, k), c in a.coeffs.items():
        M[k * n + j, i] += c
        M[k * n + i, j] -= c
    null = linalg.nullspace(M, a.tol)
    return _row_space(null, n, a.exact, a.tol)


def subspace_contained(U: np.ndarray, W: np.ndarray, tol=DEFAULT_TOL) -> bool:
    """Row space of U contained in row space of W."""
    if U.shape[0] == 0:
        return True
    stacked = np.concatenate([W, U], axis=0)
    return linalg.rank(stacked, tol) == linalg.rank(W, tol)


@dataclass(frozen=True)
class ClassifyReport:
    is_lie: bool
    unimodular: Optional[bool] = None
    nilpotent: Optional[bool] = None
    solvable: Optional[bool] = None
    step: Optional[int] = None
    killing_zero: Optional[bool] = None
    lcs: Optional[SubspaceFlag] = None
    centre: Optional[np.ndarray] = None
    derived: Optional[np.ndarray] = None
    centre_in_derived: Optional[bool] = None

    def to_json(self) -> dict:
        out = {"is_lie": self.is_lie}
        if not self.is_lie:
            return out
        out.update({
            "unimodular": self.unimodular,
            "nilpotent": self.nilpotent,
            "solvable": self.solvable,
            "step": self.step,
            "killing_zero": self.killing_zero,
            "lcs_dims": list(self.lcs.dims),
            "centre_dim": int(self.centre.shape[0]),
            "derived_dim": int(self.derived.shape[0]),
            "centre_in_derived": self.centre_in_derived,
        })
        return out


def classify(a: StructureTensor) -> ClassifyReport:
    """Metric-independent report; fields beyond is_lie are absent if it fails."""
    if not is_lie(a):
        return ClassifyReport(is_lie=False)
    lcs = lower_central_series(a)
    nilpotent = lcs.dims[-1] == 0
    step = len(lcs.dims) if nilpotent else None
    B = killing_form(a)
    Z = centre(a)
    derived = lcs.spaces[0]
    return ClassifyReport(
        is_lie=True,
        unimodular=is_unimodular(a),
        nilpotent=nilpotent,
        solvable=derived_series_terminates(a),
        step=step,
        killing_zero=linalg.mat_is_zero(B, a.tol),
        lcs=lcs,
        centre=Z,
        derived=derived,
        centre_in_derived=subspace_contained(Z, derived, a.tol),
    )


def ad_matrix(a: StructureTensor, v: np.ndarray) -> np.ndarray:
    """Matrix of ad(v) for an arbitrary vector; column action w -> [v, w]."""
    return a.ad(v)
