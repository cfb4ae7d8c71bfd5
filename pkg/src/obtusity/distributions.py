"""Auxiliary random variables built from independent Uniform(0, 1) draws.

    U             uniform on [0, 1]
    Lambda (L)    (U' - U)(U'' - U)      Langford law, support [-1/4, 1]
    Sigma  (S)    (U - U')U              support [-1/4, 1]
    Xi     (X)    U U'                   support [0, 1]
    Omega  (O)    U(1 - U)               support [0, 1/4]

A dot product of cube-point differences splits coordinate-wise into sums of
these variables, so every obtusity probability in the unit cube reduces to
P(sum of +/- auxiliary variables < 0).

pdf/cdf accept scalars or arrays.  Densities are right-continuous at piece
boundaries; where the density blows up (Lambda and Sigma at 0, Xi at 0) the
returned value is ``inf``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Aux",
    "AuxiliaryDistribution",
    "CdfCheckReport",
    "atanh_sqrt1p4x",
    "cdf",
    "cdf_numeric_check",
    "from_uniforms",
    "pdf",
    "pdf_integral",
    "sample",
]


class Aux(enum.Enum):
    UNIFORM = "U"
    LANGFORD = "L"
    SIGMA = "S"
    XI = "X"
    OMEGA = "O"

    @property
    def support(self) -> tuple[float, float]:
        return _SUPPORT[self]

    @property
    def n_uniforms(self) -> int:
        """Number of Uniform(0, 1) inputs consumed by the constructive map."""
        return _N_UNIFORMS[self]

    @property
    def singular_points(self) -> tuple[float, ...]:
        """Points where the density is not analytic (support ends, kinks, poles)."""
        return _BREAKS[self]

    def pdf(self, x):
        return pdf(self, x)

    def cdf(self, x):
        return cdf(self, x)

    def sample(self, rng: np.random.Generator, size=None):
        return sample(self, rng, size)


# Long-form alias matching the domain vocabulary.
AuxiliaryDistribution = Aux

_SUPPORT = {
    Aux.UNIFORM: (0.0, 1.0),
    Aux.LANGFORD: (-0.25, 1.0),
    Aux.SIGMA: (-0.25, 1.0),
    Aux.XI: (0.0, 1.0),
    Aux.OMEGA: (0.0, 0.25),
}
_N_UNIFORMS = {Aux.UNIFORM: 1, Aux.LANGFORD: 3, Aux.SIGMA: 2, Aux.XI: 2, Aux.OMEGA: 1}
_BREAKS = {
    Aux.UNIFORM: (0.0, 1.0),
    Aux.LANGFORD: (-0.25, 0.0, 1.0),
    Aux.SIGMA: (-0.25, 0.0, 1.0),
    Aux.XI: (0.0, 1.0),
    Aux.OMEGA: (0.0, 0.25),
}


def atanh_sqrt1p4x(x):
    """artanh(sqrt(1 + 4x)) for -1/4 <= x < 0.

    Uses (1 + s)/(1 - s) = (1 + s)^2 / (-4x), which has no cancellation as
    x -> 0-, where the value grows like -log(-x)/2.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(1.0 + 4.0 * x)
    return np.log1p(s) - 0.5 * np.log(-4.0 * x)


def _xlogx(x):
    # x*log(x) with the limit 0 at x = 0
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log(safe), 0.0)


def _piecewise(x, pieces, default=0.0):
    """Evaluate ``pieces`` = [(mask_fn, value_fn), ...] without touching
    out-of-piece points (avoids log/sqrt of invalid arguments)."""
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, default, dtype=float)
    for mask_fn, value_fn in pieces:
        m = mask_fn(x)
        if np.any(m):
            out[m] = value_fn(x[m])
    return out if out.ndim else float(out)


def pdf(dist: Aux, x):
    """Density of ``dist`` at ``x`` (0 outside the support, ``inf`` at poles)."""
    if dist is Aux.UNIFORM:
        return _piecewise(x, [(lambda t: (t >= 0) & (t < 1), lambda t: np.ones_like(t))])
    if dist is Aux.LANGFORD:
        return _piecewise(x, [
            (lambda t: (t >= -0.25) & (t < 0),
             lambda t: 4.0 * atanh_sqrt1p4x(t) - 4.0 * np.sqrt(1.0 + 4.0 * t)),
            (lambda t: t == 0, lambda t: np.full_like(t, np.inf)),
            (lambda t: (t > 0) & (t <= 1),
             lambda t: 4.0 * np.sqrt(t) - 2.0 * np.log(t) - 4.0),
        ])
    if dist is Aux.SIGMA:
        return _piecewise(x, [
            (lambda t: (t >= -0.25) & (t < 0), lambda t: 2.0 * atanh_sqrt1p4x(t)),
            (lambda t: t == 0, lambda t: np.full_like(t, np.inf)),
            (lambda t: (t > 0) & (t <= 1), lambda t: -0.5 * np.log(t)),
        ])
    if dist is Aux.XI:
        return _piecewise(x, [
            (lambda t: t == 0, lambda t: np.full_like(t, np.inf)),
            (lambda t: (t > 0) & (t < 1), lambda t: -np.log(t)),
        ])
    if dist is Aux.OMEGA:
        return _piecewise(x, [
            (lambda t: (t >= 0) & (t < 0.25), lambda t: 2.0 / np.sqrt(1.0 - 4.0 * t)),
        ])
    raise ValueError(f"unknown distribution {dist!r}")


def cdf(dist: Aux, x):
    """P(dist <= x), clamped to [0, 1]."""
    if dist is Aux.UNIFORM:
        out = _piecewise(x, [
            (lambda t: (t >= 0) & (t < 1), lambda t: t),
            (lambda t: t >= 1, lambda t: np.ones_like(t)),
        ])
    elif dist is Aux.LANGFORD:
        out = _piecewise(x, [
            (lambda t: (t >= -0.25) & (t < 0),
             lambda t: (1.0 - 8.0 * t) * np.sqrt(1.0 + 4.0 * t) / 3.0
             + 4.0 * t * atanh_sqrt1p4x(t)),
            (lambda t: t == 0, lambda t: np.full_like(t, 1.0 / 3.0)),
            (lambda t: (t > 0) & (t < 1),
             lambda t: (1.0 - 6.0 * t + 8.0 * t * np.sqrt(t)) / 3.0 - 2.0 * _xlogx(t)),
            (lambda t: t >= 1, lambda t: np.ones_like(t)),
        ])
    elif dist is Aux.SIGMA:
        out = _piecewise(x, [
            (lambda t: (t >= -0.25) & (t < 0),
             lambda t: 0.5 * np.sqrt(1.0 + 4.0 * t) + 2.0 * t * atanh_sqrt1p4x(t)),
            (lambda t: (t >= 0) & (t < 1), lambda t: 0.5 * (1.0 + t - _xlogx(t))),
            (lambda t: t >= 1, lambda t: np.ones_like(t)),
        ])
    elif dist is Aux.XI:
        out = _piecewise(x, [
            (lambda t: (t > 0) & (t < 1), lambda t: t - _xlogx(t)),
            (lambda t: t >= 1, lambda t: np.ones_like(t)),
        ])
    elif dist is Aux.OMEGA:
        out = _piecewise(x, [
            (lambda t: (t >= 0) & (t < 0.25), lambda t: 1.0 - np.sqrt(1.0 - 4.0 * t)),
            (lambda t: t >= 0.25, lambda t: np.ones_like(t)),
        ])
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    return np.clip(out, 0.0, 1.0) if isinstance(out, np.ndarray) else min(max(out, 0.0), 1.0)


def from_uniforms(dist: Aux, *u):
    """Apply the constructive product map to explicit uniforms.

    ``u`` holds ``dist.n_uniforms`` scalars or equally shaped arrays, in the
    order (U, U', U'').
    """
    if len(u) != dist.n_uniforms:
        raise ValueError(f"{dist.name} needs {dist.n_uniforms} uniforms, got {len(u)}")
    if dist is Aux.UNIFORM:
        return u[0]
    if dist is Aux.LANGFORD:
        a, b, c = u
        return (b - a) * (c - a)
    if dist is Aux.SIGMA:
        a, b = u
        return (a - b) * a
    if dist is Aux.XI:
        a, b = u
        return a * b
    a, = u
    return a * (1.0 - a)


def sample(dist: Aux, rng: np.random.Generator, size=None):
    """Draw from ``dist`` via its product definition (no inversion)."""
    shape = () if size is None else np.atleast_1d(size).tolist()
    u = rng.random((dist.n_uniforms, *shape))
    out = from_uniforms(dist, *u)
    return float(out) if size is None else out


@dataclass
class CdfCheckReport:
    dist: Aux
    tol: float
    max_deviation: float
    failures: list[tuple[float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def pdf_integral(dist: Aux, a: float, b: float, tol: float = 1e-12) -> float:
    """Integral of the density over [a, b] by tanh-sinh, split at the
    singular points.

    Near the upper end of Omega the density 2/sqrt(1 - 4w) is evaluated
    from the node's distance to the panel end, since 1 - 4w itself has lost
    most of its digits there.
    """
    from .quadrature import QuadratureSpec, integrate_1d

    lo, hi = dist.support
    a, b = max(a, lo), min(b, hi)
    if b <= a:
        return 0.0
    pts = [a, *(p for p in dist.singular_points if a < p < b), b]
    spec = QuadratureSpec(tol=tol)
    total = []
    for left, right in zip(pts[:-1], pts[1:]):
        if dist is Aux.OMEGA:
            gap = hi - right

            def f(x, da, db, gap=gap):
                return 1.0 / np.sqrt(db + gap)

            total.append(integrate_1d(f, left, right, spec, with_distance=True).value)
        else:
            total.append(integrate_1d(dist.pdf, left, right, spec).value)
    return math.fsum(total)


def cdf_numeric_check(dist: Aux, grid, tol: float) -> CdfCheckReport:
    """Compare cdf(x) with the quadrature of pdf from the lower support end.

    Points exceeding ``tol`` are collected as (x, deviation) in the report
    rather than raised.
    """
    lo, _ = dist.support
    worst = 0.0
    failures = []
    for x in np.asarray(grid, dtype=float):
        integral = pdf_integral(dist, lo, x, tol=max(tol * 1e-2, 1e-14))
        dev = abs(cdf(dist, x) - integral)
        worst = max(worst, dev)
        if dev > tol:
            failures.append((float(x), dev))
    return CdfCheckReport(dist, tol, worst, failures)
