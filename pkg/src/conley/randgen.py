"""Seeded random complexes and random multivector fields built by coarsening."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from .complex import SimplicialComplex, build_complex
from .mvf import FieldBuilder, MultivectorField


def make_rng(seed: int | None) -> np.random.Generator:
    """PCG64, so a seed gives the same stream on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def coarsen_to(K: SimplicialComplex, target_p: float, seed: int | None = 0,
               field: MultivectorField | None = None,
               on_step: Callable[[FieldBuilder], None] | None = None,
               ) -> tuple[MultivectorField, Fraction]:
    """Merge uniformly drawn pairs of vectors until the connection probability reaches ``target_p``.

    Returns the first field at or above the target together with its
    probability. ``on_step`` sees the builder after every merge.
    """
    if not 0 <= target_p <= 1:
        raise ValueError(f"target probability {target_p} outside [0, 1]")
    if len(K) < 2:
        raise ValueError("coarsening needs at least 2 simplices")
    rng = make_rng(seed)
    b = FieldBuilder(K, field)
    ids = sorted(b.vectors)
    slot = {v: i for i, v in enumerate(ids)}

    def drop(v: int) -> None:
        i = slot.pop(v)
        last = ids.pop()
        if last != v:
            ids[i] = last
            slot[last] = i

    while b.connection_probability() < target_p:
        i, j = rng.choice(len(ids), size=2, replace=False)
        v1, v2 = ids[i], ids[j]
        b.merge(v1, v2)
        for v in b.absorbed:
            drop(v)
        if on_step is not None:
            on_step(b)
    return b.freeze(), b.connection_probability()


# -- complexes --------------------------------------------------------------

def full_simplex(d: int) -> SimplicialComplex:
    """Every face of one ``d``-simplex: ``2**(d+1) - 1`` simplices."""
    if d < 0:
        raise ValueError("dimension must be non-negative")
    return build_complex([tuple(range(d + 1))])


def _distinct_subsets(rng: np.random.Generator, n_vertices: int, size: int, count: int) -> list[tuple]:
    total = comb(n_vertices, size)
    if count > total:
        raise ValueError(f"cannot draw {count} distinct {size}-subsets of {n_vertices} vertices (max {total})")
    if count > total // 2:
        # dense regime: sample from the explicit list
        pool = list(combinations(range(n_vertices), size))
        picks = rng.choice(len(pool), size=count, replace=False)
        return [pool[i] for i in sorted(picks)]
    seen: set[tuple] = set()
    out = []
    while len(out) < count:
        s = tuple(sorted(int(x) for x in rng.choice(n_vertices, size=size, replace=False)))
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def triangle_soup(n_vertices: int, n_triangles: int, seed: int | None = 0,
                  all_edges: bool = True) -> SimplicialComplex:
    """Distinct random triangles on ``n_vertices`` vertices, optionally with every edge."""
    rng = make_rng(seed)
    tris = _distinct_subsets(rng, n_vertices, 3, n_triangles)
    tops: list[tuple] = [(v,) for v in range(n_vertices)]
    if all_edges:
        tops += list(combinations(range(n_vertices), 2))
    return build_complex(tops + tris)


def dense_graph(n_vertices: int, n_edges: int, seed: int | None = 0) -> SimplicialComplex:
    if n_edges > comb(n_vertices, 2):
        raise ValueError(f"{n_edges} edges exceed C({n_vertices}, 2) = {comb(n_vertices, 2)}")
    rng = make_rng(seed)
    edges = _distinct_subsets(rng, n_vertices, 2, n_edges)
    return build_complex([(v,) for v in range(n_vertices)] + edges)


def mixed_complex(dims: list[int], n_simplices: int, n_vertices: int,
                  seed: int | None = 0) -> SimplicialComplex:
    """Closure of ``n_simplices`` random top simplices with dimensions drawn from ``dims``."""
    if not dims or min(dims) < 0 or max(dims) + 1 > n_vertices:
        raise ValueError("dims must be non-empty and fit in the vertex set")
    rng = make_rng(seed)
    tops = []
    for _ in range(n_simplices):
        d = int(rng.choice(dims))
        tops.append(tuple(sorted(int(x) for x in rng.choice(n_vertices, size=d + 1, replace=False))))
    return build_complex(tops)


def random_complex(rng: np.random.Generator, n_vertices: int, n_tops: int,
                   max_dim: int = 3) -> SimplicialComplex:
    """Small irregular complex for property tests."""
    tops = [(v,) for v in range(n_vertices)]
    for _ in range(n_tops):
        d = int(rng.integers(1, max_dim + 1))
        d = min(d, n_vertices - 1)
        tops.append(tuple(sorted(int(x) for x in rng.choice(n_vertices, size=d + 1, replace=False))))
    return build_complex(tops)


BENCHMARK_KINDS = ("full-simplex", "triangle-soup", "dense-graph", "mixed")


def build_benchmark_complex(kind: str, params: dict, seed: int | None = 0) -> SimplicialComplex:
    """``params`` per kind:

    * ``full-simplex``: ``d``
    * ``triangle-soup``: ``n_vertices``, ``n_triangles``, optional ``all_edges``
    * ``dense-graph``: ``n_vertices``, ``n_edges``
    * ``mixed``: ``dims``, ``n_simplices``, ``n_vertices``
    """
    try:
        if kind == "full-simplex":
            return full_simplex(int(params["d"]))
        if kind == "triangle-soup":
            return triangle_soup(int(params["n_vertices"]), int(params["n_triangles"]), seed,
                                 bool(params.get("all_edges", True)))
        if kind == "dense-graph":
            return dense_graph(int(params["n_vertices"]), int(params["n_edges"]), seed)
        if kind == "mixed":
            return mixed_complex([int(d) for d in params["dims"]], int(params["n_simplices"]),
                                 int(params["n_vertices"]), seed)
    except KeyError as exc:
        raise ValueError(f"{kind} needs parameter {exc.args[0]!r}") from None
    raise ValueError(f"unknown complex kind {kind!r}; known: {', '.join(BENCHMARK_KINDS)}")


# Desk-scale benchmark instances: (kind, params, target probability).
TABLE_PRESETS: dict[str, tuple[str, dict, float]] = {
    "V1": ("full-simplex", {"d": 12}, 0.4597),
    "V2": ("triangle-soup", {"n_vertices": 55, "n_triangles": 25001}, 0.0636),
    "V3": ("triangle-soup", {"n_vertices": 55, "n_triangles": 25001}, 0.0967),
    "V4": ("dense-graph", {"n_vertices": 1000, "n_edges": 100056}, 0.0309),
    "V5": ("mixed", {"dims": [3, 4, 5], "n_simplices": 1000, "n_vertices": 60}, 0.00001),
    "V6": ("mixed", {"dims": [3, 4, 5], "n_simplices": 1000, "n_vertices": 60}, 0.00003),
}
