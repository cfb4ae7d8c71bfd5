"""Nested 1-D quadrature of the auxiliary-variable integrals.

Every obtusity probability of the reduced cube configurations has the form
P(A + B +/- C < 0) for independent auxiliary variables.  The innermost
variable enters only through its CDF, the rest are integrated numerically
with panels split at every point where the integrand is not analytic, so
each panel has its singularities (log, inverse square root, x log x kinks)
at its ends.  Those ends are handled by the double-exponential (tanh-sinh)
rule.

Integrands used with ``with_distance=True`` receive ``(x, x - a, b - x)``
with both distances computed from the node complement rather than by
subtraction; the Omega density 2/sqrt(1 - 4w) near w = 1/4 needs this to
keep full precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate as _sp_integrate

from .distributions import Aux, cdf, pdf
from .geometry import CONFIG_PARTS

__all__ = [
    "CONFIG_PARTS",
    "QuadResult",
    "QuadratureError",
    "QuadratureSpec",
    "SUBCONFIGS",
    "SubconfigIntegral",
    "eta_configuration",
    "eta_cube_direct",
    "eta_subconfig",
    "integrate_1d",
    "integrate_piecewise",
    "subconfig_integral",
    "xi_xi_omega_reduced",
]

L, S, X, O = Aux.LANGFORD, Aux.SIGMA, Aux.XI, Aux.OMEGA


class QuadratureError(RuntimeError):
    def __init__(self, message: str, value: float, error: float):
        super().__init__(f"{message} (best value {value!r}, error bound {error:.3g})")
        self.value = value
        self.error = error


class QuadResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class QuadratureSpec:
    tol: float = 1e-10
    max_levels: int = 9
    singular_left: bool = True
    singular_right: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")


# ---------------------------------------------------------------------------
# tanh-sinh core

_T_MAX = 4.5  # 1 - |u| ~ 1e-62 here; the tails beyond are far below any tolerance
_H0 = 0.5
_MIN_LEVEL = 3


def _level_nodes(level: int):
    """Abscissa parameters t introduced at ``level`` (all of them at level 0)."""
    if level == 0:
        k = np.arange(-int(_T_MAX / _H0), int(_T_MAX / _H0) + 1)
        return k * _H0
    h = _H0 / 2**level
    k = np.arange(1, int(_T_MAX / h) + 1, 2)
    t = k * h
    return np.concatenate([-t[::-1], t])


_NODE_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _rule(level: int):
    """(t sign, complement 1 - |u|, weight) for the nodes new at ``level``."""
    if level not in _NODE_CACHE:
        t = _level_nodes(level)
        y = 0.5 * math.pi * np.sinh(np.abs(t))
        comp = 2.0 / (np.exp(2.0 * y) + 1.0)
        w = 0.5 * math.pi * np.cosh(t) / np.cosh(y) ** 2
        _NODE_CACHE[level] = (np.sign(t), comp, w)
    return _NODE_CACHE[level]


def _tanh_sinh(f, a: float, b: float, tol: float, max_levels: int, with_distance: bool) -> QuadResult:
    half = 0.5 * (b - a)
    total = 0.0
    prev = None
    err = math.inf
    for level in range(max_levels + 1):
        sign, comp, w = _rule(level)
        d = half * comp  # distance to the nearer end
        x = np.where(sign < 0, a + d, np.where(sign > 0, b - d, 0.5 * (a + b)))
        da = np.where(sign < 0, d, (b - a) - d)
        db = np.where(sign > 0, d, (b - a) - d)
        # x may round onto an end; only distance-aware integrands can use such nodes
        keep = (d > 0) if with_distance else (x > a) & (x < b)
        if np.any(keep):
            fx = f(x[keep], da[keep], db[keep]) if with_distance else f(x[keep])
            total += float(np.sum(np.asarray(fx, dtype=float) * w[keep]))
        h = _H0 / 2**level
        estimate = half * h * total
        if prev is not None:
            err = abs(estimate - prev)
            floor = 64 * np.finfo(float).eps * abs(estimate)
            if level >= _MIN_LEVEL and err <= max(tol, floor):
                return QuadResult(estimate, err)
        prev = estimate
    raise QuadratureError(f"tanh-sinh did not converge on [{a}, {b}]", prev, err)


def integrate_1d(f: Callable, a: float, b: float, spec: QuadratureSpec | None = None,
                 *, with_distance: bool = False) -> QuadResult:
    """Integrate ``f`` over [a, b].

    ``f`` must accept a numpy array.  With any singularity flag set in
    ``spec`` (the default) the tanh-sinh rule is used with level halving
    until successive estimates differ by less than ``spec.tol``; otherwise
    adaptive Gauss-Kronrod from QUADPACK.

    Raises QuadratureError carrying the best value if ``spec.max_levels``
    is exhausted.
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return QuadResult(0.0, 0.0)
    if a > b:
        r = integrate_1d(f, b, a, spec, with_distance=with_distance)
        return QuadResult(-r.value, r.error)
    if spec.singular_left or spec.singular_right or with_distance:
        return _tanh_sinh(f, a, b, spec.tol, spec.max_levels, with_distance)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _sp_integrate.IntegrationWarning)
        out = _sp_integrate.quad(lambda t: float(f(np.asarray(t))), a, b, epsabs=spec.tol,
                                 epsrel=0.0, limit=50 * spec.max_levels, full_output=1)
    value, error = out[0], out[1]
    if len(out) > 3 or error > spec.tol:
        raise QuadratureError(f"Gauss-Kronrod did not converge on [{a}, {b}]", value, error)
    return QuadResult(value, error)


def integrate_piecewise(f: Callable, points, tol: float = 1e-12, max_levels: int = 9,
                        with_distance: bool = False) -> float:
    """Sum of tanh-sinh integrals of ``f`` over consecutive ``points``.

    Points are sorted and zero-width panels dropped.
    """
    pts = sorted(set(float(p) for p in points))
    spec = QuadratureSpec(tol=tol, max_levels=max_levels)
    return math.fsum(integrate_1d(f, lo, hi, spec, with_distance=with_distance).value
                     for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo)


def _within(lo: float, hi: float, *cuts: float) -> list[float]:
    return [lo, *(c for c in cuts if lo < c < hi), hi]


def _tanh_sinh_batch(f, a, b, tol: float, max_levels: int = 9, with_distance: bool = False):
    """tanh-sinh on many intervals at once, sharing the node levels.

    ``f`` receives arrays of shape (m, k) (row i holds nodes of [a_i, b_i])
    and closes over any per-row parameters as (m, 1) arrays.  Iterates until
    every row meets ``tol``; returns the (m,) values.
    """
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[:, None]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    total = np.zeros(a.shape[0])
    prev = None
    err = np.inf
    with np.errstate(all="ignore"):
        for level in range(max_levels + 1):
            sign, comp, w = _rule(level)
            d = half * comp
            x = np.where(sign < 0, a + d, np.where(sign > 0, b - d, mid))
            keep = (d > 0) if with_distance else (x > a) & (x < b)
            x = np.where(keep, x, mid)
            if with_distance:
                da = np.where(sign < 0, d, 2 * half - d)
                db = np.where(sign > 0, d, 2 * half - d)
                fx = f(x, da, db)
            else:
                fx = f(x)
            total += np.sum(np.where(keep, fx * w, 0.0), axis=1)
            estimate = half[:, 0] * (_H0 / 2**level) * total
            if prev is not None:
                err = np.abs(estimate - prev)
                floor = 64 * np.finfo(float).eps * np.abs(estimate)
                if level >= _MIN_LEVEL and np.all(err <= np.maximum(tol, floor)):
                    return estimate
            prev = estimate
    raise QuadratureError("batched tanh-sinh did not converge", float(prev[np.argmax(err)]),
                          float(np.max(err)))


def _batch_piecewise(f, lo, hi, cuts, tol: float, with_distance: bool = False):
    """Row-wise sum over panels [lo, sorted cuts clipped to [lo, hi], hi]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    pts = [lo, *(np.clip(np.broadcast_to(c, lo.shape), lo, hi) for c in cuts), hi]
    pts = np.sort(np.stack(pts, axis=1), axis=1)
    out = np.zeros(lo.shape[0])
    for j in range(pts.shape[1] - 1):
        a, b = pts[:, j], pts[:, j + 1]
        live = b > a
        if np.any(live):
            out[live] += _tanh_sinh_batch(_rows(f, live), a[live], b[live], tol,
                                          with_distance=with_distance)
    return out


def _rows(f, live):
    """Restrict a row-parametrised integrand to the rows in ``live``.

    Integrands take a trailing ``rows`` argument selecting their per-row
    parameters.
    """
    idx = np.flatnonzero(live)
    return lambda *args: f(*args, idx)


# ---------------------------------------------------------------------------
# building blocks (vectorised over the outer variable)

def _omega_weighted(inner, spec: QuadratureSpec) -> QuadResult:
    """Integral of f_Omega(w) * inner(w) over [0, 1/4]; ``inner`` maps arrays."""
    def g(w, _da, db):
        # 2 / sqrt(1 - 4w) with 1 - 4w = 4 * (distance to 1/4)
        return inner(w) / np.sqrt(db)
    return integrate_1d(g, 0.0, 0.25, spec, with_distance=True)


def _sum_cdf(first: Aux, second: Aux, t, tol: float):
    """P(first + second <= t) as the integral of f_first(x) F_second(t - x)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lo1, hi1 = first.support
    lo2, hi2 = second.support
    lo = np.maximum(lo1, t - hi2)
    hi = np.minimum(hi1, t - lo2)
    # mass of ``first`` where the CDF factor is already 1
    tail = np.where(t - hi2 >= lo1, cdf(first, np.minimum(t - hi2, hi1)), 0.0)
    tail = np.where(t >= hi1 + hi2, 1.0, tail)
    live = hi > lo
    out = tail.copy()
    if np.any(live):
        tl = t[live][:, None]
        f = lambda x, rows: pdf(first, x) * cdf(second, tl[rows] - x)
        cuts = [*first.singular_points, *(t[live] - p for p in second.singular_points)]
        out[live] += _batch_piecewise(f, lo[live], hi[live], cuts, tol)
    return out


def _cdf_antiderivative(dist: Aux, x, tol: float):
    """Integral of F_dist from -inf to x (finite since supports are bounded)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo, _ = dist.support
    out = np.zeros_like(x)
    live = x > lo
    if np.any(live):
        f = lambda t, rows: cdf(dist, t)
        out[live] = _batch_piecewise(f, np.full(live.sum(), lo), x[live],
                                     dist.singular_points, tol)
    return out


def _sum_parts(f, pts, spec: QuadratureSpec) -> QuadResult:
    parts = [integrate_1d(f, a, b, spec) for a, b in zip(pts[:-1], pts[1:]) if b > a]
    return QuadResult(math.fsum(p.value for p in parts), sum(p.error for p in parts))


def _inner_tol(spec: QuadratureSpec) -> float:
    return max(spec.tol * 1e-2, 1e-15)


def _cdf_product(first: Aux, second: Aux, lo: float, hi: float, spec: QuadratureSpec) -> QuadResult:
    """Integral of F_first(-x) F_second(x) over [lo, hi].

    Equals P(first + second + U < 0) after integrating the uniform out and
    one integration by parts.
    """
    f = lambda x: cdf(first, -x) * cdf(second, x)
    pts = _within(lo, hi, *second.singular_points, *(-p for p in first.singular_points))
    return _sum_parts(f, pts, spec)


def _minus_omega_event(first: Aux, second: Aux, spec: QuadratureSpec) -> QuadResult:
    """P(first + second - Omega < 0) = int f_Omega(w) P(first + second < w) dw."""
    tol = _inner_tol(spec)
    return _omega_weighted(lambda w: _sum_cdf(first, second, w, tol), spec)


def _plus_uniform_event_by_density(first: Aux, second: Aux, spec: QuadratureSpec) -> QuadResult:
    """P(first + second + U < 0) integrating the density of ``first`` against
    the CDF antiderivative of ``second`` (the other integration by parts)."""
    tol = _inner_tol(spec)
    lo = first.support[0]
    hi = -second.support[0]  # beyond this the antiderivative vanishes
    f = lambda x: pdf(first, x) * _cdf_antiderivative(second, -x, tol)
    pts = _within(lo, hi, *first.singular_points, *(-p for p in second.singular_points))
    return _sum_parts(f, pts, spec)


def _plus_uniform_event_by_sum_cdf(first: Aux, second: Aux, spec: QuadratureSpec) -> QuadResult:
    """P(first + second + U < 0) = integral over t < 0 of P(first + second <= t)."""
    tol = _inner_tol(spec)
    lo = first.support[0] + second.support[0]
    cuts = sorted({a + b for a in first.singular_points for b in second.singular_points})
    return _sum_parts(lambda t: _sum_cdf(first, second, t, tol), _within(lo, 0.0, *cuts), spec)


def _omega_survival(x):
    # P(Omega > x)
    return np.where(x < 0, 1.0, np.sqrt(np.clip(1.0 - 4.0 * x, 0.0, None)))


def _sigma_sigma_below_omega(spec: QuadratureSpec) -> QuadResult:
    """P(Sigma + Sigma' < Omega) integrating Omega out through its survival
    function, with both Sigma densities kept."""
    tol = _inner_tol(spec)

    def inner(s):
        sc = s[:, None]
        f = lambda t, rows: pdf(S, t) * _omega_survival(sc[rows] + t)
        return _batch_piecewise(f, np.full(s.shape, -0.25), 0.25 - s, [0.0, -s], tol)

    return _sum_parts(lambda s: pdf(S, s) * inner(s), [-0.25, 0.0, 0.25, 0.5], spec)


def _xi_xi_omega_direct(spec: QuadratureSpec) -> QuadResult:
    """P(Xi + Xi' < Omega) as the 2-D integral of ln(x) ln(y) sqrt(1 - 4(x + y))."""
    tol = _inner_tol(spec)

    def inner(x):
        f = lambda y, _da, db, rows: np.log(y) * np.sqrt(4.0 * db)
        return _batch_piecewise(f, np.zeros_like(x), 0.25 - x, [], tol, with_distance=True)

    return integrate_1d(lambda x: np.log(x) * inner(x), 0.0, 0.25, spec)


def xi_xi_omega_reduced(spec: QuadratureSpec | None = None) -> QuadResult:
    """P(Xi + Xi' < Omega) from its 1-D reduction
    int_0^{1/4} (1 - 4x)^{3/2} (3 ln(1 - 4x) - 8) ln(x) / 18 dx."""
    def f(x, _da, db):
        q = 4.0 * db  # 1 - 4x
        return q ** 1.5 * (3.0 * np.log(q) - 8.0) * np.log(x) / 18.0
    return integrate_1d(f, 0.0, 0.25, spec, with_distance=True)


# ---------------------------------------------------------------------------
# sub-configuration registry

@dataclass(frozen=True)
class SubconfigIntegral:
    id: str
    event: str
    evaluate: Callable[[QuadratureSpec], QuadResult]


def _trivial_zero(_spec: QuadratureSpec) -> QuadResult:
    return QuadResult(0.0, 0.0)


_ENTRIES = [
    # primary routes, in the reduced form with the innermost variable as a CDF
    SubconfigIntegral("3*22r", "L + L' - O < 0", lambda sp: _minus_omega_event(L, L, sp)),
    SubconfigIntegral("32*2r", "L + L' + U < 0", lambda sp: _cdf_product(L, L, -0.25, 0.25, sp)),
    SubconfigIntegral("3*21r", "L + S - O < 0", lambda sp: _minus_omega_event(L, S, sp)),
    SubconfigIntegral("32*1r", "L + S + U < 0", lambda sp: _cdf_product(L, S, -0.25, 0.25, sp)),
    SubconfigIntegral("321*r", "L + X + U < 0", lambda sp: _cdf_product(L, X, 0.0, 0.25, sp)),
    SubconfigIntegral("2*22r", "X + L - O < 0", lambda sp: _minus_omega_event(L, X, sp)),
    SubconfigIntegral("3*20", "S + S' - O < 0", lambda sp: _minus_omega_event(S, S, sp)),
    SubconfigIntegral("32*0", "S + S' + U < 0", lambda sp: _cdf_product(S, S, -0.25, 0.25, sp)),
    SubconfigIntegral("320*", "X + X' + U < 0", _trivial_zero),
    SubconfigIntegral("3*11", "S + S' - O < 0", _sigma_sigma_below_omega),
    SubconfigIntegral("31*1", "U + X + S < 0", lambda sp: _cdf_product(S, X, 0.0, 0.25, sp)),
    SubconfigIntegral("221*r", "X + X' - O < 0", _xi_xi_omega_direct),
    SubconfigIntegral("2*21e", "S + X - O < 0", lambda sp: _minus_omega_event(S, X, sp)),
    # sub-configurations equal in law to one above, each via a different reduction
    SubconfigIntegral("22*2r", "S + L + U < 0", lambda sp: _plus_uniform_event_by_density(S, L, sp)),
    SubconfigIntegral("2*21r", "S + S' + U < 0", lambda sp: _plus_uniform_event_by_density(S, S, sp)),
    SubconfigIntegral("22*1e", "U + S + S' < 0", lambda sp: _plus_uniform_event_by_sum_cdf(S, S, sp)),
    SubconfigIntegral("221*e", "U + X + S < 0", lambda sp: _plus_uniform_event_by_density(X, S, sp)),
]

SUBCONFIGS: dict[str, SubconfigIntegral] = {e.id: e for e in _ENTRIES}

# mirror-image vertices that the registry does not integrate separately
_SYMMETRIC = {"322*r": "32*2r", "222*r": "22*2r", "311*": "31*1", "22*1r": "2*21r"}

def subconfig_integral(id: str, spec: QuadratureSpec | None = None) -> QuadResult:
    """Value and error bound of the obtusity probability of sub-configuration ``id``."""
    spec = spec or QuadratureSpec()
    key = _SYMMETRIC.get(id, id)
    try:
        entry = SUBCONFIGS[key]
    except KeyError:
        raise KeyError(f"unknown sub-configuration {id!r}") from None
    return entry.evaluate(spec)


def eta_subconfig(id: str, spec: QuadratureSpec | None = None) -> float:
    return subconfig_integral(id, spec).value


def eta_configuration(label: str, spec: QuadratureSpec | None = None) -> QuadResult:
    """Obtusity probability of an irreducible configuration as the sum over
    the three obtuse-vertex positions (mirror-equal vertices reuse one value)."""
    try:
        parts = CONFIG_PARTS[label]
    except KeyError:
        raise KeyError(f"unknown configuration {label!r}") from None
    cache: dict[str, QuadResult] = {}
    for p in parts:
        key = _SYMMETRIC.get(p, p)
        if key not in cache:
            cache[key] = subconfig_integral(key, spec)
    rs = [cache[_SYMMETRIC.get(p, p)] for p in parts]
    return QuadResult(math.fsum(r.value for r in rs), sum(r.error for r in rs))


def eta_cube_direct(spec: QuadratureSpec | None = None) -> QuadResult:
    """3 P(L1 + L2 + L3 < 0) by direct nested quadrature over the cube.

    Slow cross-check only; the closed form comes from the reduction.
    """
    spec = spec or QuadratureSpec(tol=1e-9)
    tol = _inner_tol(spec)
    f = lambda l1: pdf(L, l1) * _sum_cdf(L, L, -l1, tol)
    r = _sum_parts(f, [-0.25, 0.0, 0.25, 0.5], spec)
    return QuadResult(3.0 * r.value, 3.0 * r.error)
