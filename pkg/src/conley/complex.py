"""Finite simplicial complexes with an explicit face lattice and Z2 boundaries.

Simplices get dense integer ids in ``(dim, lexicographic vertex list)`` order,
so every downstream structure can refer to a simplex by a plain int.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class InvariantError(ValueError):
    """Raised when an input violates a structural invariant."""


@dataclass(frozen=True)
class Simplex:
    id: int
    vertices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


class SimplicialComplex:
    """Immutable simplicial complex.

    ``facets[s]`` holds the ids of the codimension-1 faces of ``s`` and
    ``cofaces[s]`` the inverse relation.
    """

    def __init__(self, vertex_tuples: Sequence[tuple[int, ...]]):
        self.simplices = tuple(Simplex(i, v) for i, v in enumerate(vertex_tuples))
        self.index = {v: i for i, v in enumerate(vertex_tuples)}
        self.dims = tuple(len(v) - 1 for v in vertex_tuples)
        facets = []
        cofaces: list[list[int]] = [[] for _ in vertex_tuples]
        for i, verts in enumerate(vertex_tuples):
            if len(verts) == 1:
                facets.append(())
                continue
            fs = tuple(self.index[verts[:k] + verts[k + 1:]] for k in range(len(verts)))
            facets.append(fs)
            for f in fs:
                cofaces[f].append(i)
        self.facets = tuple(facets)
        self.cofaces = tuple(tuple(c) for c in cofaces)

    def __len__(self) -> int:
        return len(self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={len(self)}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.vertex_lists() == other.vertex_lists()

    __hash__ = None  # type: ignore[assignment]

    @property
    def dim(self) -> int:
        return max(self.dims)

    def vertices_of(self, s: int) -> tuple[int, ...]:
        return self.simplices[s].vertices

    def vertex_lists(self) -> list[tuple[int, ...]]:
        return [s.vertices for s in self.simplices]

    def id_of(self, vertices: Iterable[int]) -> int:
        key = tuple(sorted(vertices))
        try:
            return self.index[key]
        except KeyError:
            raise ValueError(f"simplex {list(key)} not in complex") from None

    def check(self, s: int) -> None:
        if not 0 <= s < len(self.simplices):
            raise ValueError(f"unknown simplex id {s}")

    def is_face(self, s: int, t: int) -> bool:
        """True iff simplex ``s`` is a (not necessarily proper) face of ``t``."""
        return set(self.simplices[s].vertices) <= set(self.simplices[t].vertices)

    def to_json(self) -> dict:
        return {"simplices": [list(s.vertices) for s in self.simplices]}

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        if not isinstance(data, dict) or "simplices" not in data:
            raise ValueError("complex JSON needs a 'simplices' list")
        return build_complex(data["simplices"])


def build_complex(simplex_list: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of ``simplex_list`` with deterministic id assignment."""
    tops = set()
    for entry in simplex_list:
        verts = tuple(sorted(set(int(v) for v in entry)))
        if not verts:
            raise ValueError("simplex with no vertices")
        tops.add(verts)
    if not tops:
        raise ValueError("empty complex")
    faces = set()
    for top in tops:
        if top in faces:
            continue
        for k in range(1, len(top) + 1):
            faces.update(combinations(top, k))
    return SimplicialComplex(sorted(faces, key=lambda v: (len(v), v)))


def closure(K: SimplicialComplex, A: Iterable[int]) -> set[int]:
    seen: set[int] = set()
    stack = []
    for s in A:
        K.check(s)
        if s not in seen:
            seen.add(s)
            stack.append(s)
    while stack:
        for f in K.facets[stack.pop()]:
            if f not in seen:
                seen.add(f)
                stack.append(f)
    return seen


def star(K: SimplicialComplex, A: Iterable[int]) -> set[int]:
    """All cofaces (inclusive) of the simplices in ``A``."""
    seen: set[int] = set()
    stack = []
    for s in A:
        K.check(s)
        if s not in seen:
            seen.add(s)
            stack.append(s)
    while stack:
        for c in K.cofaces[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def boundary_chain(K: SimplicialComplex, s: int) -> frozenset[int]:
    K.check(s)
    return frozenset(K.facets[s])


def load_complex(path) -> SimplicialComplex:
    with open(path) as fh:
        return SimplicialComplex.from_json(json.load(fh))
