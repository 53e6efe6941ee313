from fractions import Fraction

import numpy as np
import pytest

from liecurv import linalg
from liecurv.errors import StructureParseError
from liecurv.structure import (StructureTensor, centre, classify, is_lie,
                               is_unimodular, jacobi_defect, killing_form,
                               lower_central_series, parse_structure,
                               print_structure, subspace_contained, trace_ad)


def test_parse_heisenberg_sign_convention():
    a = parse_structure("(0,0,12)")
    # slot 3 holds e^12, so [e1, e2] = -e3
    assert a.a(0, 1, 2) == Fraction(-1)
    assert a.a(1, 0, 2) == Fraction(1)


def test_parse_coefficients_and_pairs():
    a = parse_structure("(0,0,3*(1,2))")
    assert a.a(0, 1, 2) == Fraction(-3)
    b = parse_structure("(0,0,1/2*12-2*13,0)")
    assert b.a(0, 1, 2) == Fraction(-1, 2)
    assert b.a(0, 2, 2) == Fraction(2)


def test_parse_decimal_coefficient_float_backend():
    a = parse_structure("(0,0,1.5*12)", exact=False)
    assert a.a(0, 1, 2) == -1.5
    assert not a.exact


@pytest.mark.parametrize("bad", [
    "(0,0,11)",            # repeated wedge index
    "(0,0,12+12)",         # repeated pair in one slot
    "(0,0,14)",            # index out of range
    "(0,0,xy)",            # malformed token
])
def test_parse_errors(bad):
    with pytest.raises(StructureParseError):
        parse_structure(bad)


def test_parse_error_reports_slot():
    with pytest.raises(StructureParseError) as err:
        parse_structure("(0,0,14)")
    assert err.value.slot == 3


def test_two_digit_pairs_rejected_above_nine():
    text = "(" + ",".join(["0"] * 9 + ["12"]) + ")"
    with pytest.raises(StructureParseError):
        parse_structure(text)
    ok = "(" + ",".join(["0"] * 9 + ["(1,2)"]) + ")"
    a = parse_structure(ok)
    assert a.a(0, 1, 9) == Fraction(-1)


@pytest.mark.parametrize("text", [
    "(0,0,12)",
    "(0,0,12,13,23)",
    "(0,12,-13)",
    "(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)",
    "(0,0,1/2*12+2*13,0)",
])
def test_print_parse_round_trip(text):
    a = parse_structure(text)
    assert parse_structure(print_structure(a)).coeffs == a.coeffs


def test_ad_matrix_matches_bracket():
    a = parse_structure("(0,12,-13)")
    e1 = linalg.zeros(3)
    e1[0] = Fraction(1)
    ad1 = a.ad(e1)
    assert linalg.mat_equal(ad1, a.ad_basis(0))
    # [e1, e2] = -e2, [e1, e3] = e3
    assert ad1[1, 1] == Fraction(-1)
    assert ad1[2, 2] == Fraction(1)


def test_jacobi_defect_detects_non_lie():
    bad = parse_structure("(12,13,0)")
    assert not is_lie(bad)
    assert (0, 1, 2) in jacobi_defect(bad)


def test_unimodularity_and_killing():
    a = parse_structure("(0,12,-13)")
    assert is_unimodular(a)
    B = killing_form(a)
    assert not linalg.mat_is_zero(B)
    assert B[0, 0] == Fraction(2)
    nonuni = parse_structure("(0,12)")
    assert not is_unimodular(nonuni)
    assert trace_ad(nonuni)[0] == Fraction(-1)


def test_classify_nilpotent_chain():
    a = parse_structure("(0,0,12,13,23)")
    rep = classify(a)
    assert rep.nilpotent and rep.solvable and rep.killing_zero
    assert rep.step == 3
    assert rep.lcs.dims == (3, 2, 0)
    assert rep.centre_in_derived


def test_classify_abelian():
    rep = classify(parse_structure("(0,0,0,0)"))
    assert rep.nilpotent and rep.step == 1
    assert rep.centre.shape[0] == 4


def test_classify_solvable_not_nilpotent():
    rep = classify(parse_structure("(0,12,-13)"))
    assert rep.solvable and not rep.nilpotent
    assert not rep.killing_zero


def test_centre_and_lcs_of_heisenberg():
    a = parse_structure("(0,0,12)")
    Z = centre(a)
    assert Z.shape[0] == 1 and Z[0][2] == 1
    flag = lower_central_series(a)
    assert flag.dims == (1, 0)
    assert subspace_contained(Z, flag.spaces[0])


def test_json_round_trip():
    a = parse_structure("(0,0,1/2*12,13)")
    back = StructureTensor.from_json(a.to_json())
    assert back.coeffs == a.coeffs
