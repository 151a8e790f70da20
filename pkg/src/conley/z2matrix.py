"""Sparse Z2 column matrices over a P-filtered elementary-chain basis.

Columns (and accumulated chains) are Python ints used as bitsets: bit ``i`` of
``cols[j]`` is the entry ``A[i, j]``. XOR is column addition and
``bit_length() - 1`` is the pivot row.
"""

from __future__ import annotations

import json
from typing import Iterator, Sequence

from .complex import InvariantError, SimplicialComplex
from .morse import FilteredOrder, MorseDecomposition


def iter_bits(x: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def bits_of(indices) -> int:
    x = 0
    for i in indices:
        x |= 1 << i
    return x


class FilteredMatrix:
    """Square Z2 matrix whose i-th row and column stand for ``simplices[i]``.

    ``grading[i]`` is the poset element of that simplex and ``lin_rank[i]`` the
    position of the element in the linear extension used for the order.
    """

    def __init__(self, cols: list[int], grading: Sequence[int], dims: Sequence[int],
                 simplices: Sequence[int], lin_rank: Sequence[int],
                 chain: list[int] | None = None, order: FilteredOrder | None = None):
        self.cols = cols
        self.grading = tuple(grading)
        self.dims = tuple(dims)
        self.simplices = tuple(simplices)
        self.lin_rank = tuple(lin_rank)
        self.chain = chain
        self.order = order

    @property
    def n(self) -> int:
        return len(self.cols)

    def __repr__(self) -> str:
        return f"FilteredMatrix(n={self.n}, nnz={self.nnz()})"

    def copy(self) -> "FilteredMatrix":
        return FilteredMatrix(list(self.cols), self.grading, self.dims, self.simplices,
                              self.lin_rank, None if self.chain is None else list(self.chain),
                              self.order)

    def nnz(self) -> int:
        return sum(c.bit_count() for c in self.cols)

    def column(self, j: int) -> list[int]:
        return list(iter_bits(self.cols[j]))

    def entry(self, i: int, j: int) -> int:
        return self.cols[j] >> i & 1

    def low(self, j: int) -> int | None:
        c = self.cols[j]
        return c.bit_length() - 1 if c else None

    def add_column(self, s: int, j: int) -> None:
        """Column ``j`` += column ``s``, chains alike."""
        if s == j:
            raise ValueError("cannot add a column to itself")
        self.cols[j] ^= self.cols[s]
        if self.chain is not None:
            self.chain[j] ^= self.chain[s]

    def is_homogeneous(self, j: int) -> bool:
        c = self.cols[j]
        return bool(c) and self.grading[c.bit_length() - 1] == self.grading[j]

    def targetable_of(self) -> tuple[set[int], set[int]]:
        """Homogeneous columns and the rows they pivot on."""
        hom, tgt = set(), set()
        for j, c in enumerate(self.cols):
            if c:
                i = c.bit_length() - 1
                if self.grading[i] == self.grading[j]:
                    hom.add(j)
                    tgt.add(i)
        return hom, tgt

    def chain_simplices(self, j: int) -> list[int]:
        if self.chain is None:
            raise ValueError("chain tracking is off for this matrix")
        return sorted(self.simplices[i] for i in iter_bits(self.chain[j]))

    # -- invariants -------------------------------------------------------

    def is_upper_triangular(self) -> bool:
        return all(c.bit_length() <= j for j, c in enumerate(self.cols))

    def squares_to_zero(self) -> bool:
        cols = self.cols
        for c in cols:
            acc = 0
            for i in iter_bits(c):
                acc ^= cols[i]
            if acc:
                return False
        return True

    def check_invariants(self, K: SimplicialComplex | None = None,
                         md: MorseDecomposition | None = None) -> None:
        """Raise :class:`InvariantError` naming the first violated invariant.

        With ``K`` the accumulated chains are checked against the boundary;
        with ``md`` filtration is checked against the partial order itself.
        """
        if not self.is_upper_triangular():
            raise InvariantError("upper triangularity violated")
        for j, c in enumerate(self.cols):
            for i in iter_bits(c):
                if self.lin_rank[i] > self.lin_rank[j]:
                    raise InvariantError(f"filtration violated at ({i}, {j})")
                if self.dims[i] != self.dims[j] - 1:
                    raise InvariantError(f"boundary grading violated at ({i}, {j})")
                if md is not None and not md.leq(self.grading[i], self.grading[j]):
                    raise InvariantError(f"poset filtration violated at ({i}, {j})")
        if not self.squares_to_zero():
            raise InvariantError("A*A = 0 violated")
        if self.chain is not None:
            for j, ch in enumerate(self.chain):
                if not ch >> j & 1:
                    raise InvariantError(f"chain of column {j} lost its own simplex")
            if K is not None:
                pos = {s: i for i, s in enumerate(self.simplices)}
                for j, ch in enumerate(self.chain):
                    bd = 0
                    for i in iter_bits(ch):
                        for f in K.facets[self.simplices[i]]:
                            bd ^= 1 << pos[f]
                    if bd != self.cols[j]:
                        raise InvariantError(f"column {j} is not the boundary of its chain")

    # -- debug dump -------------------------------------------------------

    def dump_coo(self) -> str:
        header = {"n": self.n, "simplices": list(self.simplices), "grading": list(self.grading),
                  "dims": list(self.dims), "lin_rank": list(self.lin_rank)}
        lines = [json.dumps(header)]
        for j, c in enumerate(self.cols):
            lines.extend(f"{i} {j}" for i in iter_bits(c))
        return "\n".join(lines) + "\n"

    @classmethod
    def load_coo(cls, text: str) -> "FilteredMatrix":
        head, *rest = text.splitlines()
        h = json.loads(head)
        cols = [0] * h["n"]
        for lineno, line in enumerate(rest, start=2):
            if not line.strip():
                continue
            try:
                i, j = map(int, line.split())
            except ValueError:
                raise ValueError(f"line {lineno}: expected 'i j', got {line!r}") from None
            cols[j] ^= 1 << i
        return cls(cols, h["grading"], h["dims"], h["simplices"], h["lin_rank"])


def boundary_matrix(K: SimplicialComplex, order: FilteredOrder,
                    track_chains: bool = True) -> FilteredMatrix:
    """Column ``j`` holds the positions of the facets of ``order.order[j]``."""
    seq = order.order
    if len(seq) != len(K) or sorted(seq) != list(range(len(K))):
        raise InvariantError("order is not a permutation of the complex")
    pos = order.position
    cols = []
    for s in seq:
        c = 0
        for f in K.facets[s]:
            c |= 1 << pos[f]
        cols.append(c)
    md = order.md
    rank = {p: i for i, p in enumerate(order.linear_ext)}
    grading = [md.set_of[s] for s in seq]
    chain = [1 << j for j in range(len(seq))] if track_chains else None
    return FilteredMatrix(cols, grading, [K.dims[s] for s in seq], seq,
                          [rank[g] for g in grading], chain, order)
