"""Combinatorial multivector fields: partitions of a complex into convex sets."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .complex import InvariantError, SimplicialComplex, closure


@dataclass(frozen=True, eq=False)
class MultivectorField:
    """``vector_of[s]`` is the id of the vector holding simplex ``s``.

    Treat ``vectors`` as read-only; merges go through :class:`FieldBuilder`.
    """

    vector_of: tuple[int, ...]
    vectors: Mapping[int, frozenset[int]]

    def __len__(self) -> int:
        return len(self.vectors)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultivectorField) and self.partition() == other.partition()

    __hash__ = None  # type: ignore[assignment]

    def vector(self, s: int) -> frozenset[int]:
        return self.vectors[self.vector_of[s]]

    def partition(self) -> list[list[int]]:
        return sorted(sorted(v) for v in self.vectors.values())

    def to_json(self) -> dict:
        return {"vectors": [sorted(self.vectors[k]) for k in sorted(self.vectors)]}

    @classmethod
    def from_vectors(cls, n: int, vectors: Iterable[Iterable[int]]) -> "MultivectorField":
        """Build a field on ``n`` simplices; checks the partition, not convexity."""
        vector_of = [-1] * n
        vecs = {}
        for k, vec in enumerate(vectors):
            vec = frozenset(int(s) for s in vec)
            if not vec:
                raise InvariantError(f"partition violated: vector {k} is empty")
            for s in vec:
                if not 0 <= s < n:
                    raise InvariantError(f"partition violated: vector {k} has unknown simplex {s}")
                if vector_of[s] != -1:
                    raise InvariantError(
                        f"partition violated: simplex {s} in vectors {vector_of[s]} and {k}")
                vector_of[s] = k
            vecs[k] = vec
        missing = [s for s, v in enumerate(vector_of) if v == -1]
        if missing:
            raise InvariantError(f"partition violated: simplex {missing[0]} in no vector")
        return cls(tuple(vector_of), vecs)

    @classmethod
    def from_json(cls, K: SimplicialComplex, data: dict) -> "MultivectorField":
        if not isinstance(data, dict) or "vectors" not in data:
            raise ValueError("field JSON needs a 'vectors' list")
        field = cls.from_vectors(len(K), data["vectors"])
        validate_field(K, field)
        return field


def is_convex(K: SimplicialComplex, S: Iterable[int]) -> bool:
    S = set(S)
    down = closure(K, S)
    for mu in down - S:
        stack = list(K.facets[mu])
        seen = set(stack)
        while stack:
            f = stack.pop()
            if f in S:
                return False
            for g in K.facets[f]:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
    return True


def validate_field(K: SimplicialComplex, field: MultivectorField) -> None:
    if len(field.vector_of) != len(K):
        raise InvariantError(
            f"partition violated: field covers {len(field.vector_of)} simplices, complex has {len(K)}")
    seen = 0
    for k in sorted(field.vectors):
        vec = field.vectors[k]
        for s in vec:
            if field.vector_of[s] != k:
                raise InvariantError(f"partition violated: simplex {s} mislabelled in vector {k}")
        seen += len(vec)
        if not is_convex(K, vec):
            raise InvariantError(f"convexity violated in vector {k}")
    if seen != len(K):
        raise InvariantError("partition violated: vectors do not cover the complex exactly")


def singleton_field(K: SimplicialComplex) -> MultivectorField:
    n = len(K)
    return MultivectorField(tuple(range(n)), {s: frozenset((s,)) for s in range(n)})


class FieldBuilder:
    """Mutable multivector field supporting merges with convexity repair.

    Used for long merge sequences where copying an immutable snapshot per
    merge would be quadratic.
    """

    def __init__(self, K: SimplicialComplex, field: MultivectorField | None = None):
        self.K = K
        field = field if field is not None else singleton_field(K)
        self.vector_of = list(field.vector_of)
        self.vectors = {k: set(v) for k, v in field.vectors.items()}
        self.weight = sum(len(v) * (len(v) - 1) for v in self.vectors.values())
        self.absorbed: list[int] = []

    def connection_probability(self) -> Fraction:
        n = len(self.vector_of)
        if n < 2:
            raise ValueError("connection probability needs at least 2 simplices")
        return Fraction(self.weight, n * (n - 1))

    def merge(self, v1: int, v2: int) -> int:
        """Merge vectors ``v1`` and ``v2``, absorbing whatever convexity needs.

        Returns the surviving vector id, the smallest id involved; the ids
        that disappeared are left in ``self.absorbed``.
        """
        if v1 == v2:
            raise ValueError("cannot merge a vector with itself")
        K, vector_of, vectors = self.K, self.vector_of, self.vectors
        merged = {v1, v2}
        members = vectors[v1] | vectors[v2]
        down: set[int] = set()
        up: set[int] = set()
        fresh = members
        while fresh:
            new_down = _grow(K.facets, fresh, down)
            new_up = _grow(K.cofaces, fresh, up)
            # a simplex enters the hull only once it is both above and below S
            candidates = {m for m in new_down if m in up} | {m for m in new_up if m in down}
            candidates -= members
            absorb = sorted({vector_of[m] for m in candidates} - merged)
            fresh = set()
            for v in absorb:
                merged.add(v)
                fresh |= vectors[v]
            members |= fresh
        keep = min(merged)
        self.absorbed = sorted(merged - {keep})
        for v in merged:
            self.weight -= len(vectors[v]) * (len(vectors[v]) - 1)
            if v != keep:
                del vectors[v]
        vectors[keep] = members
        for s in members:
            vector_of[s] = keep
        self.weight += len(members) * (len(members) - 1)
        return keep

    def freeze(self) -> MultivectorField:
        return MultivectorField(tuple(self.vector_of),
                                {k: frozenset(v) for k, v in self.vectors.items()})


def _grow(adj, fresh: set[int], seen: set[int]) -> set[int]:
    """Extend ``seen`` by everything reachable from ``fresh`` through ``adj``."""
    added = set()
    stack = [s for s in fresh if s not in seen]
    for s in stack:
        seen.add(s)
        added.add(s)
    while stack:
        for t in adj[stack.pop()]:
            if t not in seen:
                seen.add(t)
                added.add(t)
                stack.append(t)
    return added


def merge_vectors(K: SimplicialComplex, field: MultivectorField, v1: int, v2: int) -> MultivectorField:
    b = FieldBuilder(K, field)
    b.merge(v1, v2)
    return b.freeze()


def fv(K: SimplicialComplex, field: MultivectorField, s: int) -> set[int]:
    """The multivalued dynamics: the vector of ``s`` together with its closure."""
    return set(field.vector(s)) | closure(K, [s])


def connection_probability(field: MultivectorField) -> Fraction:
    n = len(field.vector_of)
    if n < 2:
        raise ValueError("connection probability needs at least 2 simplices")
    w = sum(len(v) * (len(v) - 1) for v in field.vectors.values())
    return Fraction(w, n * (n - 1))


def load_field(K: SimplicialComplex, path) -> MultivectorField:
    with open(path) as fh:
        return MultivectorField.from_json(K, json.load(fh))
