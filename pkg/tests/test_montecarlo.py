from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obtusity.distributions import Aux
from obtusity.exact import cf_eval, config_closed_form, published_value
from obtusity.geometry import CONFIG_PARTS, Body
from obtusity.montecarlo import (CHUNK_SIZE, EstimateResult, body_counts, estimate_auxiliary_event,
                                 estimate_body, estimate_configuration, estimate_configuration_split,
                                 estimate_paired_subconfigs,
                                 fresh_seed, parse_aux_terms)


def ref(id):
    return float(cf_eval(published_value(id), 20, rounding="nearest"))


def within(result: EstimateResult, reference: float, k: float = 4.0) -> bool:
    return abs(result.estimate - reference) <= k * result.stderr


def test_result_invariants():
    r = estimate_body(Body.UNIT_CUBE, 5000, 1)
    assert 0.0 <= r.estimate <= 1.0 and r.stderr >= 0.0
    assert r.ci95[1] - r.estimate == pytest.approx(1.96 * r.stderr)
    assert r.estimate - r.ci95[0] == pytest.approx(1.96 * r.stderr)
    assert r.stderr == pytest.approx(math.sqrt(r.estimate * (1 - r.estimate) / r.n))


def test_single_draw():
    assert estimate_body(Body.UNIT_CUBE, 1, 77).estimate in (0.0, 1.0)


def test_paired_difference_stderr_formula():
    pr = estimate_paired_subconfigs("3*11", "3*20", 20_000, 4)
    na, nb = pr.first.count, pr.second.count
    assert pr.difference == pytest.approx((na - nb) / pr.n)
    assert 0.0 < pr.stderr <= math.sqrt((na + nb) / pr.n / pr.n) + 1e-15


def test_preconditions():
    with pytest.raises(ValueError):
        estimate_body(Body.BALL3, 0, 1)
    with pytest.raises(ValueError):
        estimate_body(Body.BALL3, 10, -1)
    with pytest.raises(KeyError):
        estimate_configuration("322v", None, 10, 1)
    with pytest.raises(ValueError):
        estimate_configuration("322r", 4, 10, 1)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 3 * CHUNK_SIZE // 2))
def test_determinism(seed, n):
    assert estimate_body(Body.UNIT_SQUARE, n, seed) == estimate_body(Body.UNIT_SQUARE, n, seed)


def test_result_does_not_depend_on_worker_count():
    n = 2 * CHUNK_SIZE + 17
    one = estimate_body(Body.DISK, n, 12)
    three = estimate_body(Body.DISK, n, 12, workers=3)
    assert one == three


def test_seeds_give_different_streams():
    assert estimate_body(Body.UNIT_CUBE, 10**4, 1).count != estimate_body(Body.UNIT_CUBE, 10**4, 2).count


def test_fresh_seed_is_64_bit():
    assert 0 <= fresh_seed() < 2**64


@pytest.mark.parametrize("label", list(CONFIG_PARTS))
def test_vertex_split_sums_exactly(label):
    n, seed = 50_000, 3
    total = estimate_configuration(label, None, n, seed)
    parts = [estimate_configuration(label, v, n, seed) for v in (1, 2, 3)]
    assert sum(p.count for p in parts) == total.count
    assert math.isclose(sum(p.estimate for p in parts), total.estimate, rel_tol=1e-12)
    assert [p.target for p in parts] == list(CONFIG_PARTS[label])


def test_trivial_vertex_is_zero():
    assert estimate_configuration("320", 3, 10**6, 8).count == 0


def test_aux_trivial_and_parsing():
    assert estimate_auxiliary_event([(1, Aux.OMEGA)], 10**4, 1).count == 0
    assert parse_aux_terms("L+L-O") == [(1, Aux.LANGFORD), (1, Aux.LANGFORD), (-1, Aux.OMEGA)]
    assert parse_aux_terms("-Sigma + Xi") == [(-1, Aux.SIGMA), (1, Aux.XI)]
    for bad in ("", "L+Q", "L L"):
        with pytest.raises(ValueError):
            parse_aux_terms(bad)


def test_aux_scaling():
    a = estimate_auxiliary_event("L+L+L", 10**4, 5)
    b = estimate_auxiliary_event("L+L+L", 10**4, 5, scale=3.0)
    assert b.estimate == pytest.approx(3 * a.estimate) and b.stderr == pytest.approx(3 * a.stderr)


# --- statistical agreement at 10^7 ---------------------------------------------

N = 10**7


@pytest.mark.slow
def test_bodies_against_closed_forms():
    assert within(estimate_body(Body.BALL3, N, 101), ref("eta_ball"))
    assert within(estimate_body(Body.UNIT_SQUARE, N, 102), ref("eta_square"))


@pytest.mark.slow
def test_configuration_examples():
    assert within(estimate_configuration("321r", 3, N, 103), ref("321*r"))
    assert within(estimate_configuration("322r", None, N, 104), float(cf_eval(config_closed_form("322r"), 20)))


@pytest.mark.slow
def test_aux_examples():
    assert within(estimate_auxiliary_event("L+L+U", N, 105), ref("32*2r"))
    assert within(estimate_auxiliary_event("U+X+S", N, 106), ref("31*1"))


@pytest.mark.slow
@pytest.mark.parametrize("label", list(CONFIG_PARTS))
def test_subconfigurations_against_closed_forms(label):
    split = estimate_configuration_split(label, N, 200)
    for vertex, id in enumerate(CONFIG_PARTS[label], start=1):
        r = split[vertex]
        assert r.target == id
        assert within(r, ref(id)), (id, r.estimate, r.stderr)


@pytest.mark.slow
@pytest.mark.parametrize("a,b", [("3*11", "3*20"), ("22*2r", "32*1r"), ("2*21r", "32*0")])
def test_identity_pairs_on_shared_samples(a, b):
    pr = estimate_paired_subconfigs(a, b, N, 300)
    assert abs(pr.z) <= 4.0
    assert within(pr.first, ref(b)) and within(pr.second, ref(a))


@pytest.mark.slow
def test_cube_equals_three_langford_sums():
    cube = estimate_body(Body.UNIT_CUBE, N, 400)
    aux = estimate_auxiliary_event("L+L+L", N, 400, scale=3.0)
    assert abs(cube.estimate - aux.estimate) <= 4 * math.hypot(cube.stderr, aux.stderr)


def test_body_counts_have_no_double_obtuse():
    c = body_counts(Body.UNIT_CUBE, 10**5, 9)
    assert c["multiple"] == 0 and sum(c["vertex"]) == c["any"]
