from fractions import Fraction

import pytest

from liecurv import linalg
from liecurv.curvature import ricci_general
from liecurv.errors import DegenerateMetricError, NotNiceBasisError
from liecurv.metric import Metric
from liecurv.nice import (diagonal_einstein_search, diagonal_ricci,
                          diagonal_ricci_closed_form, nice_basis_check)
from liecurv.structure import parse_structure

N8 = "(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)"
N8_DIAG = (Fraction(1), Fraction(1), Fraction(1), Fraction(1),
           Fraction(-7, 3), Fraction(-7, 3),
           Fraction(98, 15), Fraction(98, 15))


def test_nice_basis_accept():
    assert nice_basis_check(parse_structure("(0,0,12)")).is_nice
    assert nice_basis_check(parse_structure(N8)).is_nice


def test_nice_basis_reject_multiple_targets():
    # [e1, e2] hits two basis vectors
    rep = nice_basis_check(parse_structure("(0,0,12,12)"))
    assert not rep.is_nice
    assert rep.violations[0][0] == "pair"


def test_nice_basis_reject_shared_source_index():
    # e6 receives 15+23+24: pairs (1,5) and (2,3) are fine, but (2,3) and
    # (2,4) share the index 2
    rep = nice_basis_check(parse_structure("(0,0,0,12,14,15+23+24)"))
    assert not rep.is_nice
    assert any(v[0] == "target" for v in rep.violations)


def test_closed_form_matches_general_ricci():
    a = parse_structure("(0,0,12,13,23)")
    diag = [Fraction(1), Fraction(2), Fraction(-1), Fraction(3), Fraction(1, 2)]
    out = diagonal_ricci_closed_form(a, diag)
    data = ricci_general(a, Metric.diagonal(diag))
    for i in range(5):
        assert out[i] == data.ric_op[i, i]
    assert all(data.ric_op[i, j] == 0 for i in range(5) for j in range(5)
               if i != j)


def test_closed_form_on_einstein_metric():
    a = parse_structure(N8)
    out = diagonal_ricci_closed_form(a, list(N8_DIAG))
    assert all(x == Fraction(7, 15) for x in out)


def test_diagonal_ricci_guards():
    with pytest.raises(NotNiceBasisError):
        diagonal_ricci(parse_structure("(0,0,0,12,14,15+23+24)"),
                       [Fraction(1)] * 6)
    with pytest.raises(DegenerateMetricError):
        diagonal_ricci(parse_structure("(0,0,12)"),
                       [Fraction(1), Fraction(0), Fraction(1)])


def test_diagonal_ricci_values():
    entries, off = diagonal_ricci(parse_structure("(0,0,12)"),
                                  [Fraction(1)] * 3)
    assert entries == [Fraction(-1, 2), Fraction(-1, 2), Fraction(1, 2)]
    assert off == 0


def test_search_recovers_known_einstein_metric():
    a = parse_structure(N8)
    pattern = (1, 1, 1, 1, -1, -1, 1, 1)
    results = diagonal_einstein_search(a, sign_pattern=pattern, seed=0,
                                       restarts=40)
    assert results
    hit = [r for r in results if r.exact and r.diag == N8_DIAG]
    assert hit and hit[0].lam == Fraction(7, 15)
    assert hit[0].scalar == Fraction(56, 15)


def test_search_empty_on_heisenberg():
    # every diagonal metric on the Heisenberg algebra has ric != lambda Id
    results = diagonal_einstein_search(parse_structure("(0,0,12)"),
                                       restarts=30, seed=1)
    assert results == []


def test_search_requires_nice_basis():
    with pytest.raises(NotNiceBasisError):
        diagonal_einstein_search(parse_structure("(0,0,0,12,14,15+23+24)"))


def test_search_deterministic():
    a = parse_structure(N8)
    pattern = (1, 1, 1, 1, -1, -1, 1, 1)
    r1 = diagonal_einstein_search(a, sign_pattern=pattern, seed=3, restarts=15)
    r2 = diagonal_einstein_search(a, sign_pattern=pattern, seed=3, restarts=15)
    assert [r.to_json() for r in r1] == [r.to_json() for r in r2]
