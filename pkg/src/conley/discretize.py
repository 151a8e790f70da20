"""Planar sampled vector fields turned into multivector fields on a triangulated grid."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .complex import SimplicialComplex, build_complex
from .mvf import FieldBuilder, MultivectorField


@dataclass(frozen=True)
class SampledField:
    """Samples on a rectangular grid; point ``(r, c)`` is ``(xs[c], ys[r])``.

    ``vectors`` has shape ``(len(ys), len(xs), 2)``.
    """

    xs: np.ndarray
    ys: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        if len(self.xs) < 2 or len(self.ys) < 2:
            raise ValueError("degenerate grid: need at least 2x2 sample points")
        if self.vectors.shape != (len(self.ys), len(self.xs), 2):
            raise ValueError(
                f"vectors have shape {self.vectors.shape}, expected {(len(self.ys), len(self.xs), 2)}")
        if np.any(np.diff(self.xs) <= 0) or np.any(np.diff(self.ys) <= 0):
            raise ValueError("degenerate grid: coordinates must be strictly increasing")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("sample vectors must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.ys), len(self.xs)


def g_field(x, y):
    """Planar field with a repeller at (2, 0) and an attractor at (-2, 0)."""
    return x * x - y * y - 4.0, 2.0 * x * y


BUILTIN_FIELDS: dict[str, Callable] = {"g": g_field}


def sample_field(fn: Callable, region: tuple[float, float, float, float],
                 resolution: int | tuple[int, int]) -> SampledField:
    """Sample ``fn`` on a uniform grid over ``(xmin, xmax, ymin, ymax)``."""
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    xmin, xmax, ymin, ymax = region
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    X, Y = np.meshgrid(xs, ys)
    vx, vy = fn(X, Y)
    return SampledField(xs, ys, np.stack([np.asarray(vx, float), np.asarray(vy, float)], axis=-1))


def sample_builtin(name: str = "g", region=(-3.0, 3.0, -3.0, 3.0), resolution=21) -> SampledField:
    try:
        fn = BUILTIN_FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown builtin field {name!r}; known: {sorted(BUILTIN_FIELDS)}") from None
    return sample_field(fn, region, resolution)


def read_samples_csv(path) -> SampledField:
    """Rows ``x,y,vx,vy`` (header optional); every grid point must appear once."""
    table: dict[tuple[float, float], tuple[float, float]] = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and [c.strip() for c in row] == ["x", "y", "vx", "vy"]:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields x,y,vx,vy, got {len(row)}")
            try:
                x, y, vx, vy = (float(c) for c in row)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field in {row!r}") from None
            if (x, y) in table:
                raise ValueError(f"{path}:{lineno}: duplicate sample at ({x}, {y})")
            table[(x, y)] = (vx, vy)
    xs = sorted({x for x, _ in table})
    ys = sorted({y for _, y in table})
    if len(table) != len(xs) * len(ys):
        raise ValueError(f"{path}: samples do not form a full {len(xs)}x{len(ys)} grid")
    vec = np.array([[table[(x, y)] for x in xs] for y in ys], dtype=float)
    return SampledField(np.array(xs), np.array(ys), vec)


@dataclass(frozen=True)
class Geometry:
    coords: np.ndarray          # vertex -> (x, y)
    boundary: frozenset[int]    # simplex ids of boundary vertices and edges
    cell_size: float


def triangulate_grid(samples: SampledField) -> tuple[SimplicialComplex, Geometry]:
    """Split every cell by its lower-left to upper-right diagonal.

    Vertex ``r * nx + c`` sits at grid point ``(r, c)``; since vertices are
    listed first, that label is also its simplex id.
    """
    ny, nx = samples.shape
    vid = lambda r, c: r * nx + c  # noqa: E731
    tris = []
    for r in range(ny - 1):
        for c in range(nx - 1):
            v00, v10, v01, v11 = vid(r, c), vid(r, c + 1), vid(r + 1, c), vid(r + 1, c + 1)
            tris.append((v00, v10, v11))
            tris.append((v00, v01, v11))
    K = build_complex([(v,) for v in range(nx * ny)] + tris)
    X, Y = np.meshgrid(samples.xs, samples.ys)
    coords = np.stack([X.ravel(), Y.ravel()], axis=-1)
    on_rim = {vid(r, c) for r in range(ny) for c in range(nx)
              if r in (0, ny - 1) or c in (0, nx - 1)}
    boundary = set()
    for s in range(len(K)):
        d = K.dims[s]
        if d == 0 and s in on_rim:
            boundary.add(s)
        elif d == 1 and len(K.cofaces[s]) == 1:
            boundary.add(s)
    size = float(min(np.min(np.diff(samples.xs)), np.min(np.diff(samples.ys))))
    return K, Geometry(coords, frozenset(boundary), size)


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _unit(v):
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n) if n > 0 else None


def sector_of(K: SimplicialComplex, geometry: Geometry, vertex: int, direction,
              eps: float = 1e-9) -> int | None:
    """The edge or triangle at ``vertex`` whose sector contains the ray.

    A ray within ``eps`` (as a sine) of an edge picks that edge; a ray that
    leaves the triangulated region gives ``None``.
    """
    if not all(math.isfinite(float(t)) for t in direction):
        raise ValueError("direction must be finite")
    d = _unit(direction)
    if d is None or math.hypot(*direction) <= eps:
        return None
    p = geometry.coords[vertex]
    edge_dir = {}
    for e in K.cofaces[vertex]:
        if K.dims[e] != 1:
            continue
        (other,) = [w for w in K.simplices[e].vertices if w != vertex]
        u = _unit(geometry.coords[other] - p)
        edge_dir[other] = u
        if abs(_cross(u, d)) <= eps and u[0] * d[0] + u[1] * d[1] > 0:
            return e
    for e in sorted(K.cofaces[vertex]):
        for t in sorted(K.cofaces[e]):
            a_v, b_v = [w for w in K.simplices[t].vertices if w != vertex]
            a, b = edge_dir[a_v], edge_dir[b_v]
            ab = _cross(a, b)
            if _cross(a, d) * ab > 0 and _cross(d, b) * ab > 0:
                return t
    return None


def discretize_field(K: SimplicialComplex, geometry: Geometry, samples: SampledField,
                     eps: float = 1e-9, merge_boundary: bool = True) -> MultivectorField:
    """Singletons, then vertex merges, then interior-edge merges, then the boundary ring."""
    vec = samples.vectors.reshape(-1, 2)
    b = FieldBuilder(K)
    scale = float(np.max(np.abs(vec))) if vec.size else 0.0
    tol = eps * max(scale, 1.0)
    nverts = len(vec)

    # vertex step
    pairs = []
    for v in range(nverts):
        if math.hypot(*vec[v]) <= tol:
            continue
        c = sector_of(K, geometry, v, vec[v], eps)
        if c is not None:
            pairs.append((v, c))
    for v, c in sorted(pairs):
        _merge(b, v, c)

    # interior-edge step
    pairs = []
    for e in range(len(K)):
        if K.dims[e] != 1 or len(K.cofaces[e]) != 2:
            continue
        u, w = K.simplices[e].vertices
        m = (vec[u] + vec[w]) / 2
        norm = math.hypot(*m)
        if norm <= tol:
            continue
        pu, pw = geometry.coords[u], geometry.coords[w]
        t_dir = _unit(pw - pu)
        normal = (-t_dir[1], t_dir[0])
        comp = (m[0] * normal[0] + m[1] * normal[1]) / norm
        if abs(comp) <= eps:
            continue
        for t in sorted(K.cofaces[e]):
            (apex,) = [x for x in K.simplices[t].vertices if x not in (u, w)]
            side = _cross(t_dir, geometry.coords[apex] - pu)
            if side * comp > 0:
                pairs.append((e, t))
                break
    for e, t in sorted(pairs):
        _merge(b, e, t)

    # boundary ring
    if merge_boundary:
        ring = sorted(geometry.boundary)
        for s in ring[1:]:
            _merge(b, ring[0], s)
    return b.freeze()


def _merge(b: FieldBuilder, s: int, t: int) -> None:
    v1, v2 = b.vector_of[s], b.vector_of[t]
    if v1 != v2:
        b.merge(v1, v2)


def discretize_builtin(name: str = "g", region=(-3.0, 3.0, -3.0, 3.0), resolution=21,
                       eps: float = 1e-9):
    samples = sample_builtin(name, region, resolution)
    K, geo = triangulate_grid(samples)
    return K, geo, discretize_field(K, geo, samples, eps)
