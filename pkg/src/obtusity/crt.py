"""Crofton reduction of a three-point functional on the unit cube.

For a functional homogeneous of order p, dilating each sampling domain about
a scaling point relates its mean to means over the domain's sides.  Applied
to three points in the cube this gives seven linear relations among the
configuration means.  The seven "unknown" configurations are eliminated in
exact rational arithmetic, leaving the cube mean as a combination of the
seven irreducible configurations.

Each relation is stored in the form

    p * P[target] = sum_i c_i * (P[x_i] - P[target])

and mixed means such as P322 (a face pair that is opposite with probability
1/3, adjacent with probability 2/3) expand into their pure constituents.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exact import ClosedFormValue, config_closed_form

__all__ = [
    "KNOWNS",
    "UNKNOWNS",
    "CrtEquation",
    "ReductionSystem",
    "VerificationReport",
    "assemble_eta_cube",
    "box_side_weights",
    "build_cube_system",
    "closed_form_coefficient",
    "p0_coefficients",
    "side_weight",
    "solve_numeric",
    "verify_solution_formula",
]

UNKNOWNS = ("333", "332", "331", "322v", "330", "321v", "222v")
KNOWNS = ("221e", "221r", "222r", "311", "320", "321r", "322r")
POLES = (-6, -7, -8, -9)


def side_weight(side_volume, body_volume, dim: int, h) -> Fraction:
    """Weight vol(side) * h / (dim * vol(body)) of one side in a Crofton
    boundary mean; ``h`` is the signed distance from the scaling point."""
    if dim < 1:
        raise ValueError("body dimension must be >= 1")
    if body_volume == 0:
        raise ValueError("body volume must be nonzero")
    return Fraction(side_volume) * Fraction(h) / (dim * Fraction(body_volume))


def box_side_weights(point) -> dict[tuple[int, int], Fraction]:
    """Weights of the 2a sides of the unit a-box seen from ``point``.

    Keys are (axis, 0 | 1) for the side at coordinate 0 or 1 on that axis.
    """
    a = len(point)
    out = {}
    for axis, c in enumerate(point):
        c = Fraction(c)
        out[(axis, 0)] = side_weight(1, 1, a, c)      # outward normal -e_axis
        out[(axis, 1)] = side_weight(1, 1, a, 1 - c)  # outward normal +e_axis
    return out


@dataclass(frozen=True)
class CrtEquation:
    target: str
    terms: tuple[tuple[int, str], ...]  # (c_i, x_i)

    def row(self, p: Fraction, mixing: Mapping[str, Mapping[str, Fraction]]) -> dict[str, Fraction]:
        """Coefficients of sum_j a_j P[j] = 0 with mixed means expanded."""
        out: dict[str, Fraction] = {}

        def add(name, q):
            for part, frac in mixing.get(name, {name: Fraction(1)}).items():
                out[part] = out.get(part, Fraction(0)) + q * frac

        add(self.target, -Fraction(p) - sum(Fraction(c) for c, _ in self.terms))
        for c, name in self.terms:
            add(name, Fraction(c))
        return out


@dataclass(frozen=True)
class ReductionSystem:
    unknowns: tuple[str, ...]
    knowns: tuple[str, ...]
    equations: tuple[CrtEquation, ...]
    mixing: Mapping[str, Mapping[str, Fraction]] = field(default_factory=dict)

    def matrices(self, p) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
        """(A, B) with A @ unknowns + B @ knowns = 0 at order ``p``."""
        p = Fraction(p)
        a, b = [], []
        for eq in self.equations:
            row = eq.row(p, self.mixing)
            stray = set(row) - set(self.unknowns) - set(self.knowns)
            if stray:
                raise ValueError(f"equation for {eq.target} references {sorted(stray)}")
            a.append([row.get(u, Fraction(0)) for u in self.unknowns])
            b.append([row.get(k, Fraction(0)) for k in self.knowns])
        return a, b

    def replace_equation(self, target: str, terms) -> ReductionSystem:
        eqs = tuple(CrtEquation(target, tuple(terms)) if e.target == target else e
                    for e in self.equations)
        return dataclasses.replace(self, equations=eqs)


def build_cube_system() -> ReductionSystem:
    F = Fraction
    equations = (
        CrtEquation("333", ((9, "332"),)),
        CrtEquation("332", ((2, "331"), (6, "322"))),
        CrtEquation("331", ((1, "330"), (6, "321"))),
        CrtEquation("322v", ((4, "321'"), (3, "222"))),
        CrtEquation("330", ((6, "320"),)),
        CrtEquation("321v", ((1, "320"), (2, "311"), (3, "221"))),
        CrtEquation("222v", ((6, "221e"),)),
    )
    mixing = {
        "322": {"322r": F(1, 3), "322v": F(2, 3)},
        "321": {"321r": F(2, 3), "321v": F(1, 3)},
        "321'": {"321r": F(1, 2), "321v": F(1, 2)},
        "222": {"222r": F(2, 3), "222v": F(1, 3)},
        "221": {"221r": F(1, 3), "221e": F(2, 3)},
    }
    return ReductionSystem(UNKNOWNS, KNOWNS, equations, mixing)


def _gauss_solve(a: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(a)
    m = [row[:] + [r] for row, r in zip(a, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("reduction system is singular at this order p")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def solve_numeric(system: ReductionSystem, p, knowns: Mapping[str, Fraction]) -> Fraction:
    """Exact P333 for given known configuration means at order ``p``."""
    missing = [k for k in system.knowns if k not in knowns]
    if missing:
        raise KeyError(f"missing known values: {missing}")
    a, b = system.matrices(p)
    k = [Fraction(knowns[name]) for name in system.knowns]
    rhs = [-sum(bij * kj for bij, kj in zip(row, k)) for row in b]
    sol = _gauss_solve(a, rhs)
    return sol[system.unknowns.index("333")]


def closed_form_coefficient(known: str, p) -> Fraction:
    """Coefficient of P[known] in the published solution for P333."""
    p = Fraction(p)
    d4 = (6 + p) * (7 + p) * (8 + p) * (9 + p)
    d3 = (7 + p) * (8 + p) * (9 + p)
    d2 = (8 + p) * (9 + p)
    return {
        "221e": 108 * 4 / d4,
        "221r": 108 / d4,
        "311": 108 * 2 / d4,
        "320": 108 * 2 / d4,
        "222r": 72 / d3,
        "321r": 72 * 2 / d3,
        "322r": 18 / d2,
    }[known]


@dataclass
class VerificationReport:
    checks: int = 0
    mismatches: list[tuple[str, Fraction, Fraction, Fraction]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checks > 0 and not self.mismatches


# twelve orders clear of the poles; a coefficient has denominator degree <= 4
# and numerator degree 0, so agreement at >= 5 points already pins it down
CHECK_ORDERS = tuple(Fraction(x) for x in
                     ("0", "1", "2", "3", "1/2", "-1/2", "5/3", "-5/2", "10", "-3", "7/4", "-11/3"))


def verify_solution_formula(system: ReductionSystem | None = None,
                            orders=CHECK_ORDERS) -> VerificationReport:
    """Solve the system with each known as an indicator vector and compare
    with the published rational coefficients, exactly."""
    system = system or build_cube_system()
    report = VerificationReport()
    for p in orders:
        for known in system.knowns:
            unit = {k: Fraction(int(k == known)) for k in system.knowns}
            try:
                got = solve_numeric(system, p, unit)
            except ZeroDivisionError:
                got = None
            want = closed_form_coefficient(known, p)
            report.checks += 1
            if got != want:
                report.mismatches.append((known, p, got, want))
    return report


def p0_coefficients(system: ReductionSystem | None = None) -> dict[str, Fraction]:
    """Weights of the irreducible means in P333 for order-zero functionals."""
    system = system or build_cube_system()
    return {k: solve_numeric(system, 0, {j: Fraction(int(j == k)) for j in system.knowns})
            for k in system.knowns}


def assemble_eta_cube(values: Mapping[str, ClosedFormValue] | None = None) -> ClosedFormValue:
    """Exact obtusity probability of the cube from the seven irreducible
    configuration values (by default each summed from its published
    obtuse-vertex values)."""
    coefs = p0_coefficients()
    if values is None:
        values = {k: config_closed_form(k) for k in KNOWNS}
    out = ClosedFormValue()
    for k, q in coefs.items():
        out = out + q * values[k]
    return out
