"""Levi-Civita connection, curvature, Ricci, B-forms, and obstruction tests.

All exact paths are frame-free: the connection comes from the Koszul formula
in the coordinate basis, the Ricci tensor from the bilinear forms

    Ric = -1/2 B1 + 1/2 B5 - 1/2 B3 - 1/2 B4,

and the pseudo-orthonormal index formula exists only as a float oracle (an
orthonormal frame needs square roots).  Sign conventions: the curvature
operator is R(x, y) = [nabla_x, nabla_y] - nabla_{[x,y]} and the stored
components are R[i, j, h, l] = <R(e_i, e_j) e_h, e_l>, so the Ricci tensor
is the contraction Ric(e_j, e_h) = sum_i eps_i R[i, j, h, i] in a
pseudo-orthonormal frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .errors import (KillingFormNonzeroError, NotLieAlgebraError,
                     NotNilpotentError, NotUnimodularError)
from .metric import (Metric, pair_operators, pair_two_forms,
                     pseudo_orthonormal_frame)
from .scalars import Scalar, format_scalar, is_zero
from .structure import (StructureTensor, centre, classify, is_lie, is_unimodular,
                        killing_form, lower_central_series, trace_ad)


def match_backends(a: StructureTensor, S: Metric):
    """Promote both operands to the float backend if either is float."""
    if a.exact == S.exact:
        return a, S
    return a.to_float(), S.to_float()


def _require_lie(a: StructureTensor):
    if not is_lie(a):
        raise NotLieAlgebraError(
            "Jacobi identity fails; refusing to compute curvature")


def lowered_brackets(a: StructureTensor, S: Metric) -> np.ndarray:
    """cl[i, j, k] = <[e_i, e_j], e_k>."""
    return np.tensordot(a.as_array(), S.g, axes=([2], [0]))


@dataclass(frozen=True)
class ConnectionCoefficients:
    """gamma[i, j, k] = Gamma^k_{ij}, i.e. nabla_{e_i} e_j = Gamma^k_{ij} e_k."""

    n: int
    gamma: np.ndarray

    def matrix(self, i: int) -> np.ndarray:
        """Matrix of nabla_{e_i} acting on vectors (column j holds nabla_{e_i}e_j)."""
        return self.gamma[i].T

    def matrices(self) -> list[np.ndarray]:
        return [self.matrix(i) for i in range(self.n)]


def levi_civita(a: StructureTensor, S: Metric) -> ConnectionCoefficients:
    """Unique torsion-free metric connection, from the Koszul formula."""
    _require_lie(a)
    a, S = match_backends(a, S)
    cl = lowered_brackets(a, S)
    n = a.n
    half = Fraction(1, 2) if S.exact else 0.5
    # K[i,j,k] = <nabla_{e_i} e_j, e_k>
    #          = (cl[i,j,k] - cl[j,k,i] + cl[k,i,j]) / 2
    K = half * (cl - np.transpose(cl, (2, 0, 1)) + np.transpose(cl, (1, 2, 0)))
    gamma = np.tensordot(K, S.ginv, axes=([2], [0]))
    return ConnectionCoefficients(n, gamma)


@dataclass(frozen=True)
class CurvatureTensor:
    """R[i, j, h, l] = <R(e_i, e_j) e_h, e_l>, all indices down."""

    n: int
    R: np.ndarray

    def symmetries_hold(self, tol=1e-9) -> bool:
        R = self.R
        checks = [
            R + np.transpose(R, (1, 0, 2, 3)),
            R + np.transpose(R, (0, 1, 3, 2)),
            R - np.transpose(R, (2, 3, 0, 1)),
            R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2)),
        ]
        return all(linalg.mat_is_zero(c, tol) for c in checks)


def curvature_operators(a: StructureTensor, S: Metric,
                        conn: Optional[ConnectionCoefficients] = None):
    """Matrices of R(e_i, e_j) for i < j, as a dict {(i, j): matrix}."""
    a, S = match_backends(a, S)
    if conn is None:
        conn = levi_civita(a, S)
    G = conn.matrices()
    c = a.as_array()
    ops = {}
    for i in range(a.n):
        for j in range(i + 1, a.n):
            M = G[i] @ G[j] - G[j] @ G[i]
            for k in range(a.n):
                if not is_zero(c[i, j, k], a.tol):
                    M = M - c[i, j, k] * G[k]
            ops[(i, j)] = M
    return ops, conn


def riemann(a: StructureTensor, S: Metric) -> CurvatureTensor:
    """(0,4) curvature tensor; raises if Jacobi fails."""
    a, S = match_backends(a, S)
    ops, _ = curvature_operators(a, S)
    n = a.n
    R = linalg.zeros((n, n, n, n), S.exact)
    for (i, j), M in ops.items():
        low = S.g @ M          # low[l, h] = <R(e_i,e_j) e_h, e_l>
        R[i, j] = low.T
        R[j, i] = -low.T
    return CurvatureTensor(n, R)


@dataclass(frozen=True)
class RicciData:
    """Ricci tensor, operator, scalar curvature, and Einstein diagnosis."""

    n: int
    ric_form: np.ndarray
    ric_op: np.ndarray
    scalar: Scalar
    einstein: Optional[Scalar]

    @classmethod
    def from_form(cls, S: Metric, form: np.ndarray) -> "RicciData":
        op = S.ginv @ form
        scalar = np.trace(op)
        lam = op[0, 0]
        ident = linalg.eye(S.n, S.exact)
        einstein = lam if linalg.mat_equal(op, lam * ident, S.tol) else None
        return cls(S.n, form, op, scalar, einstein)

    def to_json(self) -> dict:
        return {
            "ric_form": [[format_scalar(x) for x in row] for row in self.ric_form],
            "ric_op": [[format_scalar(x) for x in row] for row in self.ric_op],
            "scalar": format_scalar(self.scalar),
            "einstein": None if self.einstein is None else format_scalar(self.einstein),
        }


def _ad_form_pairings(a: StructureTensor, S: Metric, cl: np.ndarray):
    """(B3, B5): Gram matrices of the ad(e_j) and the 2-forms de_j^flat.

    B3[j, h] = <ad e_j, ad e_h> on operators, B5[j, h] = <de_j^flat,
    de_h^flat> on 2-forms; contracted in bulk rather than pair by pair.
    """
    n = a.n
    ads = [a.ad_basis(j) for j in range(n)]
    # de_j^flat as a 2-form: F_j[p, q] = -<e_j, [e_p, e_q]> = -cl[p, q, j]
    forms = -np.transpose(cl, (2, 0, 1))
    mm, frob = linalg.sparse_mm, linalg.sparse_frob
    Q = [mm(mm(S.ginv, ads[j].T), S.g) for j in range(n)]
    R = [mm(mm(S.ginv, forms[j]), S.ginv) for j in range(n)]
    half = Fraction(1, 2) if S.exact else 0.5
    B3 = linalg.zeros((n, n), S.exact)
    B5 = linalg.zeros((n, n), S.exact)
    for j in range(n):
        for h in range(j, n):
            B3[j, h] = B3[h, j] = frob(Q[j], ads[h].T)
            B5[j, h] = B5[h, j] = half * frob(R[j], forms[h])
    return B3, B5


def b_forms(a: StructureTensor, S: Metric):
    """The six bilinear forms B1..B6 and the scalars Tr B2, Tr B3, Tr B4.

    Defined for any antisymmetric `a` (Jacobi not required).  Returns
    (B, traces) with B a dict {1: ..., 6: ...} of symmetric matrices and
    traces a dict for {2, 3, 4} (traces of the associated operators).
    """
    a, S = match_backends(a, S)
    n = a.n
    cl = lowered_brackets(a, S)
    tau = trace_ad(a)
    forms = -np.transpose(cl, (2, 0, 1))

    # B1[j, h] = tau . (e_j . de_h^flat + e_h . de_j^flat)^sharp
    if all(is_zero(x, a.tol) for x in tau):
        B1 = linalg.zeros((n, n), S.exact)
    else:
        w = S.ginv @ tau
        T1 = np.tensordot(cl, w, axes=([1], [0]))  # sum_q cl[j,q,h] w_q
        B1 = -(T1 + T1.T)
    B2 = np.outer(tau, tau)
    B3, B5 = _ad_form_pairings(a, S, cl)
    B4 = killing_form(a)
    # B6[j, h] = Tr((ad e_j)^flat_sharp (de_h^flat)^T_sharp) symmetrized
    mm, frob = linalg.sparse_mm, linalg.sparse_frob
    U = [mm(mm(S.ginv, cl[j]), S.ginv) for j in range(n)]
    M1 = linalg.zeros((n, n), S.exact)
    for j in range(n):
        for h in range(n):
            M1[j, h] = frob(U[j], forms[h])
    B6 = M1 + M1.T
    B = {1: B1, 2: B2, 3: B3, 4: B4, 5: B5, 6: B6}
    traces = {k: np.trace(S.ginv @ B[k]) for k in (2, 3, 4)}
    return B, traces


def ricci_general(a: StructureTensor, S: Metric) -> RicciData:
    """Ric = -1/2 B1 + 1/2 B5 - 1/2 B3 - 1/2 B4, valid for any Lie algebra."""
    _require_lie(a)
    a, S = match_backends(a, S)
    B, _ = b_forms(a, S)
    half = Fraction(1, 2) if S.exact else 0.5
    form = half * (-B[1] + B[5] - B[3] - B[4])
    return RicciData.from_form(S, form)


def ricci_killing_zero(a: StructureTensor, S: Metric) -> RicciData:
    """Ric = 1/2 <d v, d w> - 1/2 <ad v, ad w>; needs unimodular, Killing zero."""
    _require_lie(a)
    a, S = match_backends(a, S)
    if not is_unimodular(a):
        raise NotUnimodularError("structure tensor is not unimodular")
    if not linalg.mat_is_zero(killing_form(a), a.tol):
        raise KillingFormNonzeroError("Killing form is not identically zero")
    cl = lowered_brackets(a, S)
    B3, B5 = _ad_form_pairings(a, S, cl)
    half = Fraction(1, 2) if S.exact else 0.5
    return RicciData.from_form(S, half * (B5 - B3))


def ricci_index_oracle(a: StructureTensor, S: Metric) -> RicciData:
    """Float oracle: the literal index formula in a pseudo-orthonormal frame.

    Independent of the frame-free paths; keeps the term that vanishes for
    unimodular frames, so it is valid for arbitrary Lie algebras.
    """
    a, S = match_backends(a.to_float(), S.to_float())
    F, eps = pseudo_orthonormal_frame(S)
    n = a.n
    carr = np.asarray(a.as_array(), dtype=float)
    g = np.asarray(S.g, dtype=float)
    # c[p, q, r] = <[f_p, f_q], f_r> in the orthonormal frame
    br = np.einsum("ip,jq,ijm->pqm", F, F, carr)
    c = np.einsum("pqm,ms,sr->pqr", br, g, F)
    e = eps.astype(float)
    ee = np.einsum("i,k->ik", e, e)
    ric = (0.5 * np.einsum("ik,iki,kjh->jh", ee, c, c)
           + 0.5 * np.einsum("ik,iki,khj->jh", ee, c, c)
           + 0.25 * np.einsum("ik,ikh,ikj->jh", ee, c, c)
           - 0.5 * np.einsum("ik,ijk,khi->jh", ee, c, c)
           + 0.5 * np.einsum("ik,iki,jhk->jh", ee, c, c)
           - 0.5 * np.einsum("ik,ijk,ihk->jh", ee, c, c))
    Finv = np.linalg.inv(F)
    form = Finv.T @ ric @ Finv
    return RicciData.from_form(S, form)


def trace_vector(a: StructureTensor, S: Metric) -> np.ndarray:
    """The vector Z with <Z, v> = Tr ad(v); zero iff unimodular."""
    a, S = match_backends(a, S)
    return S.ginv @ trace_ad(a)


def besse_check(a: StructureTensor, S: Metric, v: np.ndarray):
    """Ric(v, v) evaluated via ricci_general and via the Besse expression.

    Returns the pair (lemma_value, besse_value); they must agree.
    """
    a, S = match_backends(a, S)
    _require_lie(a)
    n = a.n
    lemma = v @ ricci_general(a, S).ric_form @ v
    quarter = Fraction(1, 4) if S.exact else 0.25
    half = Fraction(1, 2) if S.exact else 0.5
    adv = a.ad(v)
    B = killing_form(a)
    Z = trace_vector(a, S)
    # sum_i eps_i f(e_i, e_i) in an orthonormal frame == g^{ij} f(e_i, e_j)
    term1 = -half * np.trace(S.ginv @ adv.T @ S.g @ adv)
    lowered = lowered_brackets(a, S)
    w = np.tensordot(lowered, v, axes=([2], [0]))     # w[i, j] = <[e_i,e_j], v>
    term3 = quarter * np.trace(S.ginv @ w @ S.ginv @ w.T)
    besse = term1 - half * (v @ B @ v) + term3 - S.inner(a.bracket(Z, v), v)
    return lemma, besse


def mn_criterion(a: StructureTensor, S: Metric):
    """Null-space dimensions of the induced pairings on ad(g) and d(g*).

    excluded=True means: for this metric, Einstein forces Ricci-flat.
    """
    a, S = match_backends(a, S)
    rep = classify(a)
    if not rep.is_lie or not rep.nilpotent:
        raise NotNilpotentError("the M/N criterion needs a nilpotent Lie algebra")
    n = a.n
    carr = a.as_array()
    # ad(g): span of the ad(e_i); reduce to an independent set first
    ad_rows = np.stack([a.ad_basis(i).reshape(n * n) for i in range(n)])
    R, piv = linalg.rref(ad_rows, a.tol)
    ad_ops = [R[r].reshape(n, n) for r in range(len(piv))]
    gram_ad = linalg.zeros((len(ad_ops), len(ad_ops)), S.exact)
    for i, u in enumerate(ad_ops):
        for j, w in enumerate(ad_ops):
            gram_ad[i, j] = pair_operators(S, u, w)
    dim_m = len(ad_ops) - linalg.rank(gram_ad, a.tol) if ad_ops else 0
    # d(g*): span of the de^k
    d_rows = np.stack([(-carr[:, :, k]).reshape(n * n) for k in range(n)])
    R, piv = linalg.rref(d_rows, a.tol)
    d_forms = [R[r].reshape(n, n) for r in range(len(piv))]
    gram_d = linalg.zeros((len(d_forms), len(d_forms)), S.exact)
    for i, u in enumerate(d_forms):
        for j, w in enumerate(d_forms):
            gram_d[i, j] = pair_two_forms(S, u, w)
    dim_n = len(d_forms) - linalg.rank(gram_d, a.tol) if d_forms else 0
    dim_derived = rep.derived.shape[0]
    dim_centre = rep.centre.shape[0]
    excluded = dim_m + dim_n >= dim_derived - dim_centre
    return {
        "dim_M": dim_m,
        "dim_N": dim_n,
        "dim_derived": dim_derived,
        "dim_centre": dim_centre,
        "excluded": bool(excluded),
    }


def _covariant_derivative(level: dict, G: list, n: int, tol: float) -> dict:
    """One covariant derivative of a family of operator-valued tensors.

    `level` maps lower-index tuples (..., i, j) to End(T) matrices; the
    result has one extra leading lower index.
    """
    out = {}
    for m in range(n):
        Gm = G[m]
        for idx, M in level.items():
            D = Gm @ M - M @ Gm
            for s, isl in enumerate(idx):
                col = Gm[:, isl]
                for p in range(n):
                    if is_zero(col[p], tol):
                        continue
                    key = idx[:s] + (p,) + idx[s + 1:]
                    key = _canon_pair(key, len(idx))
                    if key is None:
                        continue
                    sign, key = key
                    if key in level:
                        D = D - sign * col[p] * level[key]
            out[(m,) + idx] = D
    return out


def _canon_pair(idx, length):
    """Canonicalize the trailing antisymmetric (i, j) pair of an index tuple."""
    i, j = idx[-2], idx[-1]
    if i == j:
        return None
    if i < j:
        return 1, idx
    return -1, idx[:-2] + (j, i)


def holonomy_span(a: StructureTensor, S: Metric, max_order: int = 3):
    """Infinitesimal holonomy: span of R(x, y) and its covariant derivatives.

    full means the span is all of so(p, q); locally_symmetric means the
    first covariant derivative of R vanishes.  Stops early once the span
    stabilizes (one further order adds no dimension) or is already full.
    """
    _require_lie(a)
    a, S = match_backends(a, S)
    n = a.n
    ops, conn = curvature_operators(a, S)
    G = conn.matrices()
    full_dim = n * (n - 1) // 2

    rows = [M.reshape(n * n) for M in ops.values()]
    curvature_span_dim = linalg.rank(np.stack(rows), a.tol)
    span_dim = curvature_span_dim

    if span_dim >= full_dim:
        # already maximal: only the local-symmetry question remains, and a
        # single nonzero first derivative settles it
        locally_symmetric = True
        for (i, j), M in ops.items():
            for m in range(n):
                D = G[m] @ M - M @ G[m]
                for idx in (0, 1):
                    col = G[m][:, (i, j)[idx]]
                    for p in range(n):
                        if is_zero(col[p], a.tol):
                            continue
                        canon = _canon_pair((p, j) if idx == 0 else (i, p), 2)
                        if canon is None or canon[1] not in ops:
                            continue
                        D = D - canon[0] * col[p] * ops[canon[1]]
                if not linalg.mat_is_zero(D, a.tol):
                    locally_symmetric = False
                    break
            if not locally_symmetric:
                break
        return {"span_dim": int(span_dim), "full": True,
                "locally_symmetric": bool(locally_symmetric)}

    level = dict(ops)
    d1 = _covariant_derivative(level, G, n, a.tol)
    locally_symmetric = all(linalg.mat_is_zero(M, a.tol) for M in d1.values())

    order = 1
    current = d1
    while True:
        new_rows = rows + [M.reshape(n * n) for M in current.values()
                           if not linalg.mat_is_zero(M, a.tol)]
        new_dim = linalg.rank(np.stack(new_rows), a.tol) if new_rows else 0
        grew = new_dim > span_dim
        span_dim, rows = new_dim, new_rows
        if span_dim >= full_dim or not grew or order >= max_order:
            break
        current = _covariant_derivative(current, G, n, a.tol)
        order += 1
    return {
        "span_dim": int(span_dim),
        "full": bool(span_dim == full_dim),
        "locally_symmetric": bool(locally_symmetric),
    }
