"""Minimum Morse decompositions and the filtered simplex orders they induce.

Morse sets are the strongly connected components of the F_V digraph. Poset
elements are indexed by the smallest simplex id of their Morse set, so element
``p`` sorts before ``q`` whenever ``min(M_p) < min(M_q)``. ``q <=_P p`` means
some path runs from ``M_p`` into ``M_q``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .complex import InvariantError, SimplicialComplex, closure
from .mvf import MultivectorField


def fv_digraph(K: SimplicialComplex, fld: MultivectorField) -> dict[int, set[int]]:
    """Edge s -> t iff t is in F_V(s) and t != s. Quadratic in vector size."""
    graph = {}
    for s in range(len(K)):
        out = set(fld.vector(s)) | closure(K, [s])
        out.discard(s)
        graph[s] = out
    return graph


def _sparse_dynamics(K: SimplicialComplex, fld: MultivectorField) -> list[list[int]]:
    """A digraph with the same transitive closure as :func:`fv_digraph`.

    Closures are generated by facet edges and each vector by a directed cycle,
    which keeps the edge count linear.
    """
    adj = [list(f) for f in K.facets]
    for vec in fld.vectors.values():
        if len(vec) > 1:
            members = sorted(vec)
            for a, b in zip(members, members[1:] + members[:1]):
                adj[a].append(b)
    return adj


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> list[int]:
    """Iterative Tarjan. Returns a component label per node (labels arbitrary)."""
    n = len(adj)
    index = [-1] * n
    lowlink = [0] * n
    onstack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, k = work[-1]
            succ = adj[v]
            if k < len(succ):
                work[-1] = (v, k + 1)
                w = succ[k]
                if index[w] == -1:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w] and index[w] < lowlink[v]:
                    lowlink[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if lowlink[v] < lowlink[u]:
                    lowlink[u] = lowlink[v]
            if lowlink[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


@dataclass(frozen=True, eq=False)
class MorseDecomposition:
    """Poset-indexed partition of a complex into Morse sets.

    ``below[p]`` lists elements ``q`` with a direct connection ``M_p -> M_q``;
    the partial order is the reflexive-transitive closure of these edges.
    """

    sets: tuple[frozenset[int], ...]
    set_of: tuple[int, ...]
    below: tuple[frozenset[int], ...]
    linear_ext: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.sets)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MorseDecomposition) and self.sets == other.sets
                and self.linear_ext == other.linear_ext and self.poset_edges() == other.poset_edges())

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def rank(self) -> tuple[int, ...]:
        """Position of each poset element in ``linear_ext``."""
        r = [0] * len(self.sets)
        for i, p in enumerate(self.linear_ext):
            r[p] = i
        return tuple(r)

    @cached_property
    def downsets(self) -> tuple[int, ...]:
        """Bitset of ``{q : q <=_P p}`` for every ``p``."""
        down = [0] * len(self.sets)
        for p in self.linear_ext:
            d = 1 << p
            for q in self.below[p]:
                d |= down[q]
            down[p] = d
        return tuple(down)

    def leq(self, q: int, p: int) -> bool:
        """``q <=_P p``."""
        return bool(self.downsets[p] >> q & 1)

    def poset_edges(self) -> list[list[int]]:
        return sorted([p, q] for p in range(len(self.sets)) for q in self.below[p])

    def is_linear_extension(self, ext: Sequence[int]) -> bool:
        if sorted(ext) != list(range(len(self.sets))):
            return False
        pos = {p: i for i, p in enumerate(ext)}
        return all(pos[q] < pos[p] for p in range(len(self.sets)) for q in self.below[p])

    def with_linear_extension(self, ext: Sequence[int]) -> "MorseDecomposition":
        ext = tuple(ext)
        if not self.is_linear_extension(ext):
            raise InvariantError("linear extension violates the Morse poset")
        return MorseDecomposition(self.sets, self.set_of, self.below, ext)

    def to_json(self) -> dict:
        return {
            "morse_sets": [sorted(m) for m in self.sets],
            "poset_edges": self.poset_edges(),
            "linear_ext": list(self.linear_ext),
        }

    @classmethod
    def from_json(cls, data: dict, n: int | None = None) -> "MorseDecomposition":
        try:
            sets = [frozenset(int(s) for s in m) for m in data["morse_sets"]]
            edges = [(int(p), int(q)) for p, q in data["poset_edges"]]
            ext = [int(p) for p in data["linear_ext"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed decomposition JSON: {exc}") from None
        total = sum(len(m) for m in sets)
        n = total if n is None else n
        set_of = [-1] * n
        for p, m in enumerate(sets):
            for s in m:
                if not 0 <= s < n or set_of[s] != -1:
                    raise InvariantError(f"Morse sets do not partition the complex (simplex {s})")
                set_of[s] = p
        if total != n:
            raise InvariantError("Morse sets do not cover the complex")
        below = [set() for _ in sets]
        for p, q in edges:
            below[p].add(q)
        md = cls(tuple(sets), tuple(set_of), tuple(frozenset(b) for b in below), tuple(ext))
        if not md.is_linear_extension(ext):
            raise InvariantError("linear_ext is not a linear extension of the poset")
        return md


def _kahn(below: Sequence[Iterable[int]]) -> tuple[int, ...]:
    """Topological order with minimal elements first, smallest index on ties."""
    m = len(below)
    pending = [0] * m
    above: list[list[int]] = [[] for _ in range(m)]
    for p in range(m):
        for q in below[p]:
            pending[p] += 1
            above[q].append(p)
    heap = [p for p in range(m) if pending[p] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        q = heapq.heappop(heap)
        out.append(q)
        for p in above[q]:
            pending[p] -= 1
            if pending[p] == 0:
                heapq.heappush(heap, p)
    if len(out) != m:
        raise InvariantError("Morse poset has a cycle")
    return tuple(out)


def _decomposition_from_labels(K: SimplicialComplex, fld: MultivectorField,
                               labels: Sequence[int]) -> MorseDecomposition:
    groups: dict[int, list[int]] = {}
    for s, c in enumerate(labels):
        groups.setdefault(c, []).append(s)
    # simplices are visited in id order, so groups[c][0] is the minimum
    ordered = sorted(groups.values(), key=lambda g: g[0])
    set_of = [0] * len(K)
    for p, g in enumerate(ordered):
        for s in g:
            set_of[s] = p
    below: list[set[int]] = [set() for _ in ordered]
    for s, succ in enumerate(_sparse_dynamics(K, fld)):
        p = set_of[s]
        for t in succ:
            q = set_of[t]
            if q != p:
                below[p].add(q)
    frozen_below = tuple(frozenset(b) for b in below)
    return MorseDecomposition(
        tuple(frozenset(g) for g in ordered), tuple(set_of), frozen_below, _kahn(frozen_below))


def minimum_morse_decomposition(K: SimplicialComplex, fld: MultivectorField) -> MorseDecomposition:
    labels = strongly_connected_components(_sparse_dynamics(K, fld))
    return _decomposition_from_labels(K, fld, labels)


def coarsen_decomposition(K: SimplicialComplex, fld: MultivectorField, md: MorseDecomposition,
                          groups: Iterable[Iterable[int]]) -> MorseDecomposition:
    """Coarser decomposition whose Morse sets are unions of the given groups of ``md``'s sets.

    Elements of ``md`` not mentioned in ``groups`` stay on their own.
    """
    label = list(range(len(md)))
    for g in groups:
        g = sorted(set(int(p) for p in g))
        for p in g:
            if not 0 <= p < len(md):
                raise ValueError(f"unknown Morse set {p}")
            label[p] = g[0]
        union = set().union(*(md.sets[p] for p in g))
        if not is_morse_set(K, fld, union):
            raise InvariantError(f"grouping {g} is not a Morse set")
    labels = [label[md.set_of[s]] for s in range(len(K))]
    return _decomposition_from_labels(K, fld, labels)


def is_morse_set(K: SimplicialComplex, fld: MultivectorField, S: Iterable[int]) -> bool:
    """No F_V path leaves ``S`` and comes back."""
    S = set(S)
    adj = _sparse_dynamics(K, fld)
    radj: list[list[int]] = [[] for _ in adj]
    for s, succ in enumerate(adj):
        for t in succ:
            radj[t].append(s)
    fwd = _reach(adj, S)
    bwd = _reach(radj, S)
    return not ((fwd & bwd) - S)


def _reach(adj, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        for t in adj[stack.pop()]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


@dataclass(frozen=True, eq=False)
class FilteredOrder:
    """A P-filtered simplex order: Morse-set blocks in linear-extension order."""

    order: tuple[int, ...]
    md: MorseDecomposition = field(repr=False)
    linear_ext: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return isinstance(other, FilteredOrder) and self.order == other.order

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def position(self) -> dict[int, int]:
        return {s: i for i, s in enumerate(self.order)}

    def grading(self, s: int) -> int:
        return self.md.set_of[s]

    def to_json(self) -> dict:
        return {"order": list(self.order)}

    @classmethod
    def from_permutation(cls, K: SimplicialComplex, md: MorseDecomposition,
                         order: Sequence[int]) -> "FilteredOrder":
        """Validate a user-supplied simplex order against ``md``."""
        order = tuple(int(s) for s in order)
        if sorted(order) != list(range(len(K))):
            raise InvariantError("order is not a permutation of the complex")
        ext: list[int] = []
        for s in order:
            p = md.set_of[s]
            if not ext or ext[-1] != p:
                if p in ext:
                    raise InvariantError(f"Morse set {p} is not contiguous in the order")
                ext.append(p)
        if not md.is_linear_extension(ext):
            raise InvariantError("block order is not a linear extension of the Morse poset")
        for a, b in zip(order, order[1:]):
            if md.set_of[a] == md.set_of[b] and K.dims[a] > K.dims[b]:
                raise InvariantError("non-admissible within-set order")
        return cls(order, md, tuple(ext))


def filtered_order(K: SimplicialComplex, md: MorseDecomposition,
                   within_set_order: Mapping[int, Sequence[int]] | None = None,
                   linear_ext: Sequence[int] | None = None) -> FilteredOrder:
    """Concatenate Morse-set blocks along ``linear_ext`` (default ``md.linear_ext``).

    Blocks are ordered by ``(dim, id)`` unless ``within_set_order`` supplies
    an order for that set, which must have non-decreasing dimension.
    """
    ext = tuple(md.linear_ext if linear_ext is None else linear_ext)
    if linear_ext is not None and not md.is_linear_extension(ext):
        raise InvariantError("linear extension violates the Morse poset")
    within_set_order = within_set_order or {}
    order: list[int] = []
    for p in ext:
        if p in within_set_order:
            block = [int(s) for s in within_set_order[p]]
            if sorted(block) != sorted(md.sets[p]):
                raise InvariantError(f"within-set order for Morse set {p} is not a permutation of it")
            if any(K.dims[a] > K.dims[b] for a, b in zip(block, block[1:])):
                raise InvariantError("non-admissible within-set order")
        else:
            block = sorted(md.sets[p], key=lambda s: (K.dims[s], s))
        order.extend(block)
    return FilteredOrder(tuple(order), md, ext)


def load_order(K: SimplicialComplex, md: MorseDecomposition, path) -> FilteredOrder:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "order" not in data:
        raise ValueError("order JSON needs an 'order' list")
    return FilteredOrder.from_permutation(K, md, data["order"])
