"""Sampling sites in the unit cube, whole bodies, and the obtusity indicator.

A configuration label such as ``321r`` gives the dimensions of the three
sites (interior 3, face 2, edge 1, vertex 0) and their relative placement:
``r`` opposite, ``v`` adjacent, ``e`` an edge opposite to the face of the
second point.  A star marks the obtuse vertex: ``32*1r`` is the event that
the angle at the face point of configuration 321r is obtuse.

Only the eight configurations that survive the Crofton reduction (333 and
the seven irreducible ones) have samplers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Body",
    "CONFIGURATIONS",
    "CONFIG_PARTS",
    "CubeConfiguration",
    "SiteSpec",
    "obtuse_parts",
    "parse_subconfig",
    "sample_body",
    "sample_site",
]


@dataclass(frozen=True)
class SiteSpec:
    """Affine image of [0, 1]^k in the cube: offset + sum u_i e_{axes[i]}."""

    offset: tuple[float, float, float]
    axes: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.axes)) != len(self.axes) or not set(self.axes) <= {0, 1, 2}:
            raise ValueError(f"axes must be distinct cube axes, got {self.axes}")
        if any(self.offset[a] != 0 for a in self.axes):
            raise ValueError("offset must vanish along the site's own axes")
        if not all(c in (0, 1) for c in self.offset):
            raise ValueError("offset must be a cube vertex")

    @property
    def dimension(self) -> int:
        return len(self.axes)

    def from_uniforms(self, u) -> np.ndarray:
        """Map uniforms of shape (..., dimension) to points (..., 3)."""
        u = np.asarray(u, dtype=float)
        pts = np.broadcast_to(np.asarray(self.offset, dtype=float),
                              u.shape[:-1] + (3,)).copy()
        for i, axis in enumerate(self.axes):
            pts[..., axis] = u[..., i]
        return pts


def sample_site(site: SiteSpec, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    shape = (site.dimension,) if size is None else (size, site.dimension)
    return site.from_uniforms(rng.random(shape))


INTERIOR = SiteSpec((0, 0, 0), (0, 1, 2))
FACE_Z0 = SiteSpec((0, 0, 0), (0, 1))
FACE_Z1 = SiteSpec((0, 0, 1), (0, 1))
FACE_X0 = SiteSpec((0, 0, 0), (1, 2))
FACE_X1 = SiteSpec((1, 0, 0), (1, 2))
EDGE_X_AT_Z1 = SiteSpec((0, 0, 1), (0,))
EDGE_Y_AT_X1 = SiteSpec((1, 0, 0), (1,))
EDGE_Z = SiteSpec((0, 0, 0), (2,))
VERTEX_Z1 = SiteSpec((0, 0, 1), ())


@dataclass(frozen=True)
class CubeConfiguration:
    label: str
    sites: tuple[SiteSpec, SiteSpec, SiteSpec]

    def __post_init__(self):
        dims = "".join(str(s.dimension) for s in self.sites)
        if not self.label.startswith(dims):
            raise ValueError(f"label {self.label} does not match site dimensions {dims}")

    @property
    def n_uniforms(self) -> int:
        return sum(s.dimension for s in self.sites)

    def from_uniforms(self, u) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Split uniforms (..., n_uniforms) across the three sites in order."""
        u = np.asarray(u, dtype=float)
        out, i = [], 0
        for s in self.sites:
            out.append(s.from_uniforms(u[..., i:i + s.dimension]))
            i += s.dimension
        return tuple(out)

    def sample(self, rng: np.random.Generator, size: int):
        return self.from_uniforms(rng.random((size, self.n_uniforms)))


CONFIGURATIONS: dict[str, CubeConfiguration] = {
    c.label: c for c in [
        CubeConfiguration("333", (INTERIOR, INTERIOR, INTERIOR)),
        CubeConfiguration("322r", (INTERIOR, FACE_Z0, FACE_Z1)),
        CubeConfiguration("321r", (INTERIOR, FACE_Z0, EDGE_X_AT_Z1)),
        CubeConfiguration("222r", (FACE_X0, FACE_Z0, FACE_Z1)),
        CubeConfiguration("320", (INTERIOR, FACE_Z0, VERTEX_Z1)),
        CubeConfiguration("311", (INTERIOR, EDGE_Z, EDGE_Y_AT_X1)),
        CubeConfiguration("221r", (FACE_Z0, FACE_Z1, EDGE_Z)),
        CubeConfiguration("221e", (FACE_Z0, FACE_X1, EDGE_Z)),
    ]
}

# obtuse-vertex sub-configurations of each irreducible configuration
CONFIG_PARTS: dict[str, tuple[str, str, str]] = {
    "322r": ("3*22r", "32*2r", "322*r"),
    "321r": ("3*21r", "32*1r", "321*r"),
    "222r": ("2*22r", "22*2r", "222*r"),
    "320": ("3*20", "32*0", "320*"),
    "311": ("3*11", "31*1", "311*"),
    "221r": ("2*21r", "22*1r", "221*r"),
    "221e": ("2*21e", "22*1e", "221*e"),
}


def parse_subconfig(id: str) -> tuple[str, int]:
    """'32*1r' -> ('321r', 1): configuration label and obtuse-vertex index."""
    star = id.find("*")
    if star < 1 or id.count("*") != 1:
        raise ValueError(f"not a starred sub-configuration id: {id!r}")
    label = id.replace("*", "")
    if label not in CONFIGURATIONS:
        raise KeyError(f"unknown configuration {label!r}")
    return label, star - 1


class Body(enum.Enum):
    UNIT_SQUARE = "square"
    UNIT_CUBE = "cube"
    DISK = "disk"
    BALL3 = "ball"
    EQUILATERAL_TRIANGLE = "triangle"

    @property
    def dimension(self) -> int:
        return 3 if self in (Body.UNIT_CUBE, Body.BALL3) else 2


_TRI_APEX = np.array([0.5, math.sqrt(3) / 2])


def sample_body(body: Body, rng: np.random.Generator, size: int,
                return_trials: bool = False):
    """Uniform points in ``body``: (size, dim) array.

    Disk and ball use rejection from [-1, 1]^d (unit radius, centred at 0);
    with ``return_trials`` the number of proposals is returned as well.
    The triangle has vertices (0, 0), (1, 0), (1/2, sqrt(3)/2) and is sampled
    by folding the unit parallelogram onto it.
    """
    trials = size
    if body in (Body.UNIT_SQUARE, Body.UNIT_CUBE):
        pts = rng.random((size, body.dimension))
    elif body is Body.EQUILATERAL_TRIANGLE:
        u = rng.random((size, 2))
        flip = u.sum(axis=1) > 1
        u[flip] = 1.0 - u[flip]
        pts = u[:, :1] * np.array([1.0, 0.0]) + u[:, 1:] * _TRI_APEX
    else:
        d = body.dimension
        chunks, have, trials = [], 0, 0
        accept_rate = math.pi / 4 if d == 2 else math.pi / 6
        while have < size:
            m = max(64, int((size - have) / accept_rate * 1.05) + 16)
            cand = 2.0 * rng.random((m, d)) - 1.0
            inside = np.einsum("ij,ij->i", cand, cand) <= 1.0
            # trials count proposals up to the last one used
            acc = np.flatnonzero(inside)
            need = size - have
            if len(acc) >= need:
                trials += int(acc[need - 1]) + 1
                chunks.append(cand[acc[:need]])
                have = size
            else:
                trials += m
                chunks.append(cand[acc])
                have += len(acc)
        pts = np.concatenate(chunks)
    return (pts, trials) if return_trials else pts


def obtuse_parts(x, y, z) -> np.ndarray:
    """Indicators of an obtuse angle at x, at y and at z.

    Inputs are points (..., d); the result has shape (..., 3).  A right
    angle (zero dot product) does not count as obtuse.
    """
    x, y, z = (np.asarray(p, dtype=float) for p in (x, y, z))
    at_x = np.einsum("...i,...i->...", y - x, z - x) < 0
    at_y = np.einsum("...i,...i->...", z - y, x - y) < 0
    at_z = np.einsum("...i,...i->...", x - z, y - z) < 0
    return np.stack([at_x, at_y, at_z], axis=-1)
