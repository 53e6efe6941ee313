import random
from fractions import Fraction

import numpy as np
import pytest

from liecurv import linalg
from liecurv.curvature import ricci_killing_zero
from liecurv.errors import NotUnimodularError
from liecurv.metric import Metric, parse_metric
from liecurv.moment import (DualStructureTensor, GaugeDirection, contractions,
                            dq, gauge_derivative, gauge_dual, gauge_metric,
                            gauge_structure, infinitesimal_dual,
                            infinitesimal_metric, infinitesimal_structure,
                            jacobi_tangent_critical, moment_map, pairing,
                            q_map, ricci_via_moment, scalar_functional)
from liecurv.structure import is_lie, parse_structure

from conftest import (random_invertible, random_matrix, random_metric,
                      random_sparse_bracket)


def test_q_map_heisenberg_euclidean():
    a = parse_structure("(0,0,12)")
    S = Metric.euclidean(3)
    b = q_map(a, S)
    # with the euclidean metric b_m = ad(e_m)^T
    for m in range(3):
        assert linalg.mat_equal(b.matrix(m), a.ad_basis(m).T)
    assert b.comps[0][1, 2] == Fraction(-1)


def test_q_map_antisymmetry_random():
    rng = random.Random(7)
    for _ in range(20):
        c = random_sparse_bracket(rng, 4)
        S = random_metric(rng, 4)
        b = q_map(c, S, require_unimodular=False)
        # b^{mj}_l antisymmetric in (m, j)
        assert linalg.mat_is_zero(b.comps + np.transpose(b.comps, (1, 0, 2)))


def test_q_requires_unimodular():
    a = parse_structure("(0,12)")
    with pytest.raises(NotUnimodularError):
        q_map(a, Metric.euclidean(2))


def test_contractions_a_lambda():
    S = parse_metric("e1.e4+e2.e5+e3.e6", 6)
    for lam in (1, 2, -3):
        a = parse_structure(f"(0,0,{lam}*12,0,0,45)")
        c1, c2 = contractions(a, q_map(a, S))
        lam = Fraction(lam)
        want1 = linalg.zeros((6, 6))
        want1[2, 2] = want1[5, 5] = 2 * lam
        want2 = linalg.zeros((6, 6))
        for i in (0, 1, 3, 4):
            want2[i, i] = lam
        assert linalg.mat_equal(c1, want1)
        assert linalg.mat_equal(c2, want2)
        assert np.trace(c1) == np.trace(c2)


def test_moment_map_and_pairing():
    a = parse_structure("(0,0,12)")
    S = Metric.euclidean(3)
    b = q_map(a, S)
    mu, inner = moment_map(a, b)
    c1, c2 = contractions(a, b)
    assert linalg.mat_equal(mu, c1 - 2 * c2)
    assert inner == pairing(a, b) == Fraction(2)


def test_ricci_via_moment_matches_curvature():
    rng = random.Random(23)
    checked = 0
    while checked < 8:
        c = random_sparse_bracket(rng, 4, terms=3)
        from tests_helpers import tensor_from_array
        a = tensor_from_array(c)
        from liecurv.structure import is_unimodular, killing_form
        if not (is_lie(a) and is_unimodular(a)
                and linalg.mat_is_zero(killing_form(a))):
            continue
        S = random_metric(rng, 4)
        checked += 1
        lhs = ricci_via_moment(a, S)
        rhs = ricci_killing_zero(a, S)
        assert linalg.mat_equal(lhs.ric_form, rhs.ric_form)


def test_scalar_functional_heisenberg():
    a = parse_structure("(0,0,12)")
    assert scalar_functional(a, Metric.euclidean(3)) == Fraction(-1, 2)


def test_gauge_metric_and_structure_consistency():
    # scalar functional is invariant under the simultaneous action
    rng = random.Random(41)
    a = parse_structure("(0,0,12)")
    S = Metric.euclidean(3)
    for _ in range(5):
        g = random_invertible(rng, 3)
        assert scalar_functional(gauge_structure(g, a), gauge_metric(g, S)) \
            == scalar_functional(a, S)


def test_infinitesimal_structure_derivation_kernel():
    a = parse_structure("(0,0,12)")
    X = linalg.zeros((3, 3))
    X[0, 0] = X[1, 1] = Fraction(1)
    X[2, 2] = Fraction(2)
    # diag(1,1,2) is a derivation of the Heisenberg bracket
    assert linalg.mat_is_zero(infinitesimal_structure(X, a))
    Y = linalg.zeros((3, 3))
    Y[0, 1] = Fraction(1)
    assert linalg.mat_is_zero(infinitesimal_structure(Y, a))


def test_equivariance_finite_random():
    rng = random.Random(3)
    for _ in range(10):
        c = random_sparse_bracket(rng, 3)
        S = random_metric(rng, 3)
        g = random_invertible(rng, 3)
        from tests_helpers import tensor_from_array
        a = tensor_from_array(c)
        lhs = q_map(gauge_structure(g, a).as_array(), gauge_metric(g, S),
                    require_unimodular=False)
        rhs = gauge_dual(g, q_map(c, S, require_unimodular=False))
        assert linalg.mat_is_zero(lhs.comps - rhs.comps)


def test_dq_chain_rule_identity():
    rng = random.Random(13)
    for _ in range(10):
        c = random_sparse_bracket(rng, 3)
        S = random_metric(rng, 3)
        X = random_matrix(rng, 3)
        aprime = random_sparse_bracket(rng, 3)
        W = infinitesimal_metric(X, S)
        lhs = dq(c, S, aprime, W).comps
        rhs = q_map(aprime - infinitesimal_structure(X, c), S,
                    require_unimodular=False).comps \
            + infinitesimal_dual(X, q_map(c, S, require_unimodular=False))
        assert linalg.mat_is_zero(lhs - rhs)


def test_gauge_derivative_traceless_at_einstein():
    # Ricci-flat metric: the orbit derivative vanishes for traceless X
    a = parse_structure("(24,0,0,0,0,35)")
    S = parse_metric("e1.e4+e2.e5+e3.e6", 6)
    rng = random.Random(77)
    X = random_matrix(rng, 6)
    tr = np.trace(X)
    X[0, 0] -= tr
    assert GaugeDirection(X).traceless
    assert gauge_derivative(a, S, X) == 0


def test_gauge_derivative_general_value():
    a = parse_structure("(0,0,12)")
    S = Metric.euclidean(3)
    X = linalg.eye(3)
    # X+s = -2 Tr(ric_op) = -2 s = 1 for the Heisenberg metric
    assert gauge_derivative(a, S, X) == Fraction(1)


def test_critical_verdicts():
    a = parse_structure("(24,0,0,0,0,35)")
    S = parse_metric("e1.e4+e2.e5+e3.e6", 6)
    out = jacobi_tangent_critical(a, S)
    assert out["critical"] is True and out["critical_killing"] is True
    b = parse_structure("(0,0,0,0,0,45)")
    out2 = jacobi_tangent_critical(b, S)
    assert out2["critical"] is False
    assert out2["tangent_dim"] >= out2["tangent_dim_killing"]


def test_dual_tensor_json_lists_all_terms():
    a = parse_structure("(24,0,0,0,0,35)")
    S = parse_metric("e1.e4+e2.e5+e3.e6", 6)
    terms = q_map(a, S).to_json()["terms"]
    got = {(t["m"], t["l"], t["j"], t["c"]) for t in terms}
    assert got == {(1, 4, 5, "1"), (2, 3, 6, "1"),
                   (5, 4, 1, "-1"), (6, 3, 2, "-1")}
