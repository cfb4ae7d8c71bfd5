"""Cross-checks between the exact, quadrature and Monte Carlo routes.

Each check returns a :class:`CheckResult`.  Two levels are provided:
``quick`` (10^6 samples, quadrature tolerance 1e-7) and ``full`` (10^7
samples, quadrature tolerance 1e-9).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import crt
from .distributions import Aux, cdf_numeric_check, pdf_integral, sample
from .exact import PUBLISHED_DECIMALS, cf_eval, published_value
from .geometry import CONFIG_PARTS, Body
from .montecarlo import (body_counts, estimate_auxiliary_event, estimate_body,
                         estimate_paired_subconfigs)
from .quadrature import SUBCONFIGS, QuadratureSpec, eta_configuration, subconfig_integral

__all__ = ["CheckResult", "Level", "LEVELS", "CHECKS", "run_checks"]

# sub-configurations whose integrands are singular at both ends of a panel
DOUBLY_SINGULAR = frozenset({"3*22r", "3*21r", "2*22r", "3*20", "2*21e"})

IDENTITY_PAIRS = (("3*11", "3*20"), ("22*2r", "32*1r"), ("2*21r", "32*0"),
                  ("22*1e", "32*0"), ("221*e", "31*1"))

BODY_REFERENCES = {
    Body.DISK: "eta_disk",
    Body.BALL3: "eta_ball",
    Body.UNIT_SQUARE: "eta_square",
    Body.EQUILATERAL_TRIANGLE: "eta_triangle",
}


@dataclass(frozen=True)
class Level:
    name: str
    n: int
    tol: float


LEVELS = {"quick": Level("quick", 10**6, 1e-7), "full": Level("full", 10**7, 1e-9)}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)


def _ref(id: str) -> float:
    return float(cf_eval(published_value(id), 30, rounding="nearest"))


def check_exact_digits(level: Level, seed: int, workers: int) -> CheckResult:
    got = str(cf_eval(crt.assemble_eta_cube(), 50))
    want = PUBLISHED_DECIMALS["eta_C3"]
    return CheckResult("exact-50-digits", got == want, f"got {got}", values={"digits": got})


def check_crt_identity(level: Level, seed: int, workers: int) -> CheckResult:
    report = crt.verify_solution_formula()
    coefs = crt.p0_coefficients()
    want = dict(zip(crt.KNOWNS, (4, 1, 4, 2, 2, 8, 7)))
    p0_ok = all(coefs[k] * 28 == v for k, v in want.items())
    ok = report.passed and report.checks == 84 and p0_ok
    return CheckResult("crt-identity", ok,
                       f"{report.checks} checks, {len(report.mismatches)} mismatches, "
                       f"p=0 vector*28 = {[int(coefs[k] * 28) for k in crt.KNOWNS]}")


def _quad_threshold(id: str, level: Level) -> float:
    base = 1e-7 if id in DOUBLY_SINGULAR else 1e-8
    return max(base, level.tol) if level.name == "quick" else base


def check_quadrature(level: Level, seed: int, workers: int) -> CheckResult:
    spec = QuadratureSpec(tol=level.tol)
    worst, bad, values = 0.0, [], {}
    targets = [(i, lambda i=i: subconfig_integral(i, spec)) for i in SUBCONFIGS]
    targets += [(c, lambda c=c: eta_configuration(c, spec)) for c in CONFIG_PARTS]
    for id, fn in targets:
        r = fn()
        dev = abs(r.value - _ref(id))
        values[id] = dev
        worst = max(worst, dev)
        if dev > _quad_threshold(id, level):
            bad.append(f"{id}: {dev:.2e}")
    detail = f"{len(targets)} values, max |dev| {worst:.2e}" + (f"; failing {bad}" if bad else "")
    return CheckResult("quadrature-vs-closed-form", not bad, detail, values=values)


def _mc_vs(name: str, result, reference: float) -> CheckResult:
    z = result.z_score(reference)
    return CheckResult(name, abs(z) <= 4.0,
                       f"estimate {result.estimate:.7f} +- {result.stderr:.1e}, "
                       f"reference {reference:.10f}, z = {z:+.2f}",
                       values={"estimate": result.estimate, "stderr": result.stderr, "z": z})


def check_mc_cube(level: Level, seed: int, workers: int) -> CheckResult:
    r = estimate_body(Body.UNIT_CUBE, level.n, seed, workers)
    return _mc_vs("mc-cube", r, _ref("eta_C3"))


def check_mc_bodies(level: Level, seed: int, workers: int) -> CheckResult:
    parts, ok = [], True
    for body, ref in BODY_REFERENCES.items():
        r = estimate_body(body, level.n, seed, workers)
        z = r.z_score(_ref(ref))
        ok &= abs(z) <= 4.0
        parts.append(f"{body.value} z={z:+.2f}")
    return CheckResult("mc-standard-bodies", ok, ", ".join(parts))


def check_distributions(level: Level, seed: int, workers: int) -> CheckResult:
    parts, ok = [], True
    rng = np.random.default_rng(seed)
    for dist in Aux:
        # the KS test uses 10^6 draws at every level
        lo, hi = dist.support
        norm = abs(pdf_integral(dist, lo, hi, tol=1e-13) - 1.0)
        grid = np.linspace(lo, hi, 101)
        rep = cdf_numeric_check(dist, grid, 1e-9)
        ks = stats.kstest(sample(dist, rng, 10**6), dist.cdf)
        good = norm <= 1e-10 and rep.passed and ks.pvalue >= 0.01
        ok &= good
        parts.append(f"{dist.value}: norm {norm:.0e}, cdf {rep.max_deviation:.0e}, KS p={ks.pvalue:.3f}")
    return CheckResult("distribution-suite", ok, "; ".join(parts))


def check_identities(level: Level, seed: int, workers: int) -> CheckResult:
    spec = QuadratureSpec(tol=level.tol)
    quad_tol = 1e-9 if level.name == "full" else max(1e-9, level.tol)
    parts, ok = [], True
    for a, b in IDENTITY_PAIRS:
        dq = abs(subconfig_integral(a, spec).value - subconfig_integral(b, spec).value)
        pr = estimate_paired_subconfigs(a, b, level.n, seed, workers)
        good = dq <= quad_tol and abs(pr.z) <= 4.0
        ok &= good
        parts.append(f"{a}={b}: quad {dq:.1e}, mc z={pr.z:+.2f}")
    return CheckResult("identity-pairs", ok, "; ".join(parts))


def check_single_obtuse(level: Level, seed: int, workers: int) -> CheckResult:
    n = 10**6
    c = body_counts(Body.UNIT_CUBE, n, seed, workers)
    return CheckResult("at-most-one-obtuse", c["multiple"] == 0,
                       f"{c['multiple']} of {n} triples with two or more obtuse indicators")


def check_langford_sum(level: Level, seed: int, workers: int) -> CheckResult:
    cube = estimate_body(Body.UNIT_CUBE, level.n, seed, workers)
    aux = estimate_auxiliary_event("L+L+L", level.n, seed, workers, scale=3.0)
    diff = cube.estimate - aux.estimate
    se = math.hypot(cube.stderr, aux.stderr)
    z = diff / se
    return CheckResult("cube-vs-langford-sum", abs(z) <= 4.0,
                       f"cube {cube.estimate:.6f}, 3P(L+L+L<0) {aux.estimate:.6f}, z = {z:+.2f}")


CHECKS: dict[str, Callable[[Level, int, int], CheckResult]] = {
    "exact-50-digits": check_exact_digits,
    "crt-identity": check_crt_identity,
    "quadrature-vs-closed-form": check_quadrature,
    "mc-cube": check_mc_cube,
    "mc-standard-bodies": check_mc_bodies,
    "distribution-suite": check_distributions,
    "identity-pairs": check_identities,
    "at-most-one-obtuse": check_single_obtuse,
    "cube-vs-langford-sum": check_langford_sum,
}


def run_check(name: str, level: Level | str = "quick", seed: int = 0, workers: int = 1) -> CheckResult:
    if isinstance(level, str):
        level = LEVELS[level]
    t0 = time.perf_counter()
    result = CHECKS[name](level, seed, workers)
    result.seconds = time.perf_counter() - t0
    return result


def run_checks(level: Level | str = "quick", seed: int = 0, workers: int = 1,
               only=None) -> list[CheckResult]:
    names = list(CHECKS) if only is None else list(only)
    return [run_check(n, level, seed, workers) for n in names]
