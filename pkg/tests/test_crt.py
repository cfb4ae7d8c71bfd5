from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obtusity import crt
from obtusity.crt import (KNOWNS, UNKNOWNS, assemble_eta_cube, box_side_weights, build_cube_system,
                          closed_form_coefficient, p0_coefficients, side_weight, solve_numeric,
                          verify_solution_formula)
from obtusity.exact import Const, cf_eval, published_value

F = Fraction


def unit(name):
    return {k: F(int(k == name)) for k in KNOWNS}


def test_side_weight_examples():
    assert side_weight(1, 1, 3, 1) == F(1, 3)
    assert side_weight(1, 1, 3, 0) == 0
    assert side_weight(1, 1, 2, 1) == F(1, 2)
    with pytest.raises(ValueError):
        side_weight(1, 1, 0, 1)
    with pytest.raises(ValueError):
        side_weight(1, 0, 3, 1)


def test_corner_weights_give_factor_nine():
    w = box_side_weights((0, 0, 0))
    opposite = [w[(axis, 1)] for axis in range(3)]
    assert opposite == [F(1, 3)] * 3
    assert all(w[(axis, 0)] == 0 for axis in range(3))
    # three reducing points, each of dimension 3, each seeing three faces at 1/3
    assert 3 * 3 * sum(opposite) == 9
    eq1 = build_cube_system().equations[0]
    assert eq1.terms == ((9, "332"),)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(0, 1), min_size=1, max_size=4))
def test_box_weights_sum_to_one(point):
    assert sum(box_side_weights(point).values()) == 1


def test_system_shape_and_equation_one():
    sys_ = build_cube_system()
    assert len(sys_.equations) == 7 and sys_.unknowns == UNKNOWNS and sys_.knowns == KNOWNS
    a, b = sys_.matrices(F(0))
    assert len(a) == 7 and all(len(r) == 7 for r in a)
    row = sys_.equations[0].row(F(5), sys_.mixing)
    assert row == {"333": -F(14), "332": F(9)}
    assert sys_.mixing["221"] == {"221r": F(1, 3), "221e": F(2, 3)}


def test_solve_examples():
    sys_ = build_cube_system()
    assert solve_numeric(sys_, 0, unit("322r")) == F(1, 4)
    assert solve_numeric(sys_, 0, unit("221e")) == F(1, 7) == F(4, 28)
    assert solve_numeric(sys_, 2, unit("222r")) == F(72, 9 * 10 * 11) == F(4, 55)


def test_solve_errors():
    sys_ = build_cube_system()
    with pytest.raises(KeyError):
        solve_numeric(sys_, 0, {"221e": 1})
    with pytest.raises(ZeroDivisionError):
        solve_numeric(sys_, -9, unit("322r"))


def test_full_verification():
    report = verify_solution_formula()
    assert report.passed and report.checks == 84


def test_mutation_is_detected():
    sys_ = build_cube_system().replace_equation("332", ((3, "331"), (6, "322")))
    report = verify_solution_formula(sys_)
    assert not report.passed and report.mismatches


def test_p0_vector():
    coefs = p0_coefficients()
    assert [coefs[k] * 28 for k in KNOWNS] == [4, 1, 4, 2, 2, 8, 7]
    assert sum(coefs.values()) == 1


@settings(max_examples=50, deadline=None)
@given(st.fractions(-5, 5, max_denominator=20))
def test_constant_knowns_reproduce_constant(c):
    assert solve_numeric(build_cube_system(), 0, {k: c for k in KNOWNS}) == c


@settings(max_examples=40, deadline=None)
@given(st.fractions(-4, 20, max_denominator=12).filter(lambda p: p not in crt.POLES),
       st.dictionaries(st.sampled_from(KNOWNS), st.fractions(-3, 3, max_denominator=9),
                       min_size=7, max_size=7))
def test_solution_is_the_published_linear_form(p, knowns):
    want = sum(closed_form_coefficient(k, p) * v for k, v in knowns.items())
    assert solve_numeric(build_cube_system(), p, knowns) == want


def test_assembly():
    v = assemble_eta_cube()
    assert v == published_value("eta_C3")
    assert v.coefficient(Const.CATALAN) == F(-13, 35)
    assert (F(1, 28) * (4 * F(-7, 30) + 4 * F(-2, 15) + 2 * F(-7, 30) + 2 * F(-7, 30)
                        + 8 * F(-8, 15) + 7 * F(-8, 15))) == F(-13, 35)
    assert str(cf_eval(v, 15)) == "0.542659281427229"
