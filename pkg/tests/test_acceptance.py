"""Acceptance gate: one test per criterion, at full size (10^7 samples,
quadrature tolerance 1e-9).  Each test records a PASS/FAIL line that is
printed in the terminal summary."""

from __future__ import annotations

import pytest

from conftest import ACCEPTANCE_LINES
from obtusity.verify import LEVELS, run_check

SEED = 20240917
FULL = LEVELS["full"]

CRITERIA = [
    (1, "exact-50-digits", 1.0),
    (2, "crt-identity", 1.0),
    (3, "quadrature-vs-closed-form", 60.0),
    (4, "mc-cube", None),
    (5, "mc-standard-bodies", None),
    (6, "distribution-suite", None),
    (7, "identity-pairs", None),
    (8, "at-most-one-obtuse", None),
    (9, "cube-vs-langford-sum", None),
]


@pytest.mark.parametrize("number,name,limit", CRITERIA, ids=[f"{n}-{c}" for n, c, _ in CRITERIA])
def test_criterion(number, name, limit):
    result = run_check(name, FULL, seed=SEED)
    in_time = limit is None or result.seconds < limit
    ok = result.passed and in_time
    budget = "" if limit is None else f" (limit {limit:.0f} s)"
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number} {name}: "
                            f"{result.detail} [{result.seconds:.2f} s{budget}]")
    assert result.passed, result.detail
    assert in_time, f"took {result.seconds:.2f} s"
