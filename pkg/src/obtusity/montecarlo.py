"""Reproducible Monte Carlo estimators for obtusity probabilities.

Samples are drawn in fixed-size chunks.  Chunk ``k`` of a run with seed
``s`` always uses the Philox stream derived from ``(s, kind, k)``, so an
estimate depends only on (seed, n) and not on how chunks are spread over
workers.  Each chunk returns integer counts; aggregation is an ordered sum
of integers and therefore exact.
"""

from __future__ import annotations

import math
import re
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .distributions import Aux, from_uniforms
from .geometry import CONFIGURATIONS, Body, CubeConfiguration, obtuse_parts, parse_subconfig, sample_body

__all__ = [
    "CHUNK_SIZE",
    "EstimateResult",
    "PairedResult",
    "body_counts",
    "estimate_auxiliary_event",
    "estimate_body",
    "estimate_configuration",
    "estimate_configuration_split",
    "estimate_paired_subconfigs",
    "fresh_seed",
    "parse_aux_terms",
]

CHUNK_SIZE = 1 << 18
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EstimateResult:
    n: int
    count: int
    estimate: float
    stderr: float
    ci95: tuple[float, float]
    seed: int
    target: str

    @classmethod
    def from_count(cls, count: int, n: int, seed: int, target: str, scale: float = 1.0):
        """Binomial plug-in estimate of ``scale * count / n``."""
        p = count / n
        se = math.sqrt(p * (1.0 - p) / n)
        est, se = scale * p, scale * se
        return cls(n, int(count), est, se, (est - 1.96 * se, est + 1.96 * se), seed, target)

    def z_score(self, reference: float) -> float:
        """(estimate - reference) / stderr; +-inf if stderr is 0 and they differ."""
        diff = self.estimate - reference
        if self.stderr > 0:
            return diff / self.stderr
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)


@dataclass(frozen=True)
class PairedResult:
    """Two indicator estimates on shared samples and their difference."""

    n: int
    first: EstimateResult
    second: EstimateResult
    difference: float
    stderr: float

    @property
    def z(self) -> float:
        if self.stderr > 0:
            return self.difference / self.stderr
        return 0.0 if self.difference == 0 else math.inf


def fresh_seed() -> int:
    """A 64-bit seed from OS entropy."""
    return int(np.random.SeedSequence().entropy) & _MASK64


def _check(n: int, seed: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"sample count must be a positive integer, got {n!r}")
    if not 0 <= seed <= _MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")


def _chunk_rng(seed: int, kind: str, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(kind.encode()), index))
    return np.random.Generator(np.random.Philox(ss))


def _run_chunk(kernel: Callable, seed: int, kind: str, job: tuple[int, int]) -> np.ndarray:
    index, size = job
    return np.asarray(kernel(_chunk_rng(seed, kind, index), size), dtype=np.int64)


def _run(kernel: Callable, n: int, seed: int, kind: str, workers: int = 1) -> np.ndarray:
    """Sum of integer count vectors returned by ``kernel(rng, size)`` per chunk."""
    _check(n, seed)
    jobs = [(k, min(CHUNK_SIZE, n - k * CHUNK_SIZE)) for k in range(-(-n // CHUNK_SIZE))]
    task = partial(_run_chunk, kernel, seed, kind)
    if workers <= 1 or len(jobs) == 1:
        parts = map(task, jobs)
        return sum(parts, np.int64(0))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves job order, so the reduction is deterministic
        return sum(pool.map(task, jobs), np.int64(0))


def _body_kernel(body: Body, rng: np.random.Generator, size: int) -> np.ndarray:
    pts = sample_body(body, rng, 3 * size).reshape(size, 3, -1)
    parts = obtuse_parts(pts[:, 0], pts[:, 1], pts[:, 2])
    k = parts.sum(axis=1)
    return np.array([np.count_nonzero(k), np.count_nonzero(k >= 2), *parts.sum(axis=0)])


def body_counts(body: Body, n: int, seed: int, workers: int = 1) -> dict[str, int]:
    """Counts over ``n`` triples: any obtuse angle, two or more obtuse
    indicators at once, and obtuse at each of the three vertices."""
    c = _run(partial(_body_kernel, body), n, seed, f"body:{body.value}", workers)
    return {"any": int(c[0]), "multiple": int(c[1]),
            "vertex": tuple(int(v) for v in c[2:])}


def estimate_body(body: Body, n: int, seed: int, workers: int = 1) -> EstimateResult:
    counts = body_counts(body, n, seed, workers)
    return EstimateResult.from_count(counts["any"], n, seed, body.value)


def _config_kernel(config: CubeConfiguration, rng: np.random.Generator, size: int) -> np.ndarray:
    parts = obtuse_parts(*config.sample(rng, size))
    return np.array([np.count_nonzero(parts.any(axis=1)), *parts.sum(axis=0)])


def _configuration(config) -> CubeConfiguration:
    if isinstance(config, CubeConfiguration):
        return config
    try:
        return CONFIGURATIONS[config]
    except KeyError:
        raise KeyError(f"unknown configuration {config!r}; known: {sorted(CONFIGURATIONS)}") from None


def estimate_configuration_split(config: CubeConfiguration | str, n: int, seed: int,
                                 workers: int = 1) -> dict[int | None, EstimateResult]:
    """One pass over the sample stream of ``config``: the unpinned estimate
    (key None) and the estimates pinned to vertices 1, 2 and 3."""
    config = _configuration(config)
    c = _run(partial(_config_kernel, config), n, seed, f"config:{config.label}", workers)
    out = {None: EstimateResult.from_count(int(c[0]), n, seed, config.label)}
    for v in (1, 2, 3):
        star = config.label[:v] + "*" + config.label[v:]
        out[v] = EstimateResult.from_count(int(c[v]), n, seed, star)
    return out


def estimate_configuration(config: CubeConfiguration | str, obtuse_vertex: int | None = None,
                           n: int = 1_000_000, seed: int = 0, workers: int = 1) -> EstimateResult:
    """Obtusity probability of a cube configuration, or with the obtuse
    angle pinned to vertex 1, 2 or 3 when ``obtuse_vertex`` is given.

    All vertex choices read the same sample stream, so the three pinned
    counts add up to the unpinned count.
    """
    if obtuse_vertex not in (None, 1, 2, 3):
        raise ValueError("obtuse_vertex must be 1, 2, 3 or None")
    return estimate_configuration_split(config, n, seed, workers)[obtuse_vertex]


_TERM_RE = re.compile(r"\s*([+-]?)\s*([A-Za-z]+)")
_ALIASES = {"U": Aux.UNIFORM, "L": Aux.LANGFORD, "S": Aux.SIGMA, "X": Aux.XI, "O": Aux.OMEGA,
            "LAMBDA": Aux.LANGFORD, "SIGMA": Aux.SIGMA, "XI": Aux.XI, "OMEGA": Aux.OMEGA}


def parse_aux_terms(expr: str) -> list[tuple[int, Aux]]:
    """'L+L-O' -> [(+1, LANGFORD), (+1, LANGFORD), (-1, OMEGA)]."""
    terms, pos = [], 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TERM_RE.match(expr, pos)
        if not m or (terms and not m.group(1)):
            raise ValueError(f"cannot parse auxiliary expression {expr!r}")
        name = m.group(2).upper()
        if name not in _ALIASES:
            raise ValueError(f"unknown auxiliary variable {m.group(2)!r}")
        terms.append((-1 if m.group(1) == "-" else 1, _ALIASES[name]))
        pos = m.end()
    if not terms:
        raise ValueError("auxiliary expression is empty")
    return terms


def _format_terms(terms) -> str:
    out = ""
    for i, (sign, dist) in enumerate(terms):
        out += ("-" if sign < 0 else ("+" if i else "")) + dist.value
    return out


def _aux_kernel(terms, rng: np.random.Generator, size: int) -> np.ndarray:
    total = np.zeros(size)
    for sign, dist in terms:
        total += sign * from_uniforms(dist, *rng.random((dist.n_uniforms, size)))
    return np.array([np.count_nonzero(total < 0)])


def estimate_auxiliary_event(terms: Sequence[tuple[int, Aux]] | str, n: int, seed: int,
                             workers: int = 1, scale: float = 1.0) -> EstimateResult:
    """P(sum of signed auxiliary variables < 0) by constructive sampling.

    ``scale`` multiplies estimate and stderr (e.g. 3 for 3 P(...)).
    """
    if isinstance(terms, str):
        terms = parse_aux_terms(terms)
    terms = [(1 if s > 0 else -1, Aux(d)) for s, d in terms]
    if not terms:
        raise ValueError("at least one term is required")
    label = _format_terms(terms)
    c = _run(partial(_aux_kernel, tuple(terms)), n, seed, f"aux:{label}", workers)
    return EstimateResult.from_count(int(c[0]), n, seed, f"P({label}<0)", scale)


def _pair_kernel(a: tuple[CubeConfiguration, int], b: tuple[CubeConfiguration, int],
                 rng: np.random.Generator, size: int) -> np.ndarray:
    # one uniform block feeds both configurations (leading columns)
    width = max(a[0].n_uniforms, b[0].n_uniforms)
    u = rng.random((size, width))
    hit_a = obtuse_parts(*a[0].from_uniforms(u[:, :a[0].n_uniforms]))[:, a[1]]
    hit_b = obtuse_parts(*b[0].from_uniforms(u[:, :b[0].n_uniforms]))[:, b[1]]
    return np.array([np.count_nonzero(hit_a), np.count_nonzero(hit_b),
                     np.count_nonzero(hit_a & hit_b)])


def estimate_paired_subconfigs(first: str, second: str, n: int, seed: int,
                               workers: int = 1) -> PairedResult:
    """Estimate two starred sub-configurations from a shared uniform block.

    The difference's standard error uses the per-sample variance of
    1[first] - 1[second], which accounts for the induced correlation.
    """
    ka, va = parse_subconfig(first)
    kb, vb = parse_subconfig(second)
    a, b = (CONFIGURATIONS[ka], va), (CONFIGURATIONS[kb], vb)
    c = _run(partial(_pair_kernel, a, b), n, seed, f"pair:{first}|{second}", workers)
    na, nb, nab = (int(v) for v in c)
    ra = EstimateResult.from_count(na, n, seed, first)
    rb = EstimateResult.from_count(nb, n, seed, second)
    diff = (na - nb) / n
    second_moment = (na + nb - 2 * nab) / n  # E[(1a - 1b)^2]
    var = max(second_moment - diff * diff, 0.0)
    return PairedResult(n, ra, rb, diff, math.sqrt(var / n))
