"""Connection-matrix reductions.

``conmat`` is the single-pass reduction: left-to-right column additions whose
sources are restricted to homogeneous columns. ``connectmat`` is the older
reduction with additions from either side and paired row additions; it is
kept as a baseline and as an independent check. ``complete_reduction`` is the
ordinary persistence reduction that ignores homogeneity.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass
from itertools import permutations
from typing import Mapping, Sequence

from .complex import InvariantError
from .morse import MorseDecomposition
from .z2matrix import FilteredMatrix, iter_bits


class ReductionTimeout(TimeoutError):
    pass


def _expired(deadline: float | None) -> bool:
    return deadline is not None and time.perf_counter() > deadline


@dataclass(frozen=True, eq=False)
class ConnectionMatrix:
    """Submatrix of a reduced matrix on the kept basis.

    ``kept`` are positions in the reduced matrix; ``cols[k]`` is a bitset
    over local indices ``0..len(kept)-1``.
    """

    kept: tuple[int, ...]
    simplices: tuple[int, ...]
    grading: tuple[int, ...]
    dims: tuple[int, ...]
    cols: tuple[int, ...]
    basis_chains: tuple[tuple[int, ...], ...] | None = None

    def __len__(self) -> int:
        return len(self.kept)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ConnectionMatrix) and self.simplices == other.simplices
                and self.cols == other.cols and self.grading == other.grading
                and self.dims == other.dims and self.basis_chains == other.basis_chains)

    __hash__ = None  # type: ignore[assignment]

    def entries(self) -> list[tuple[int, int]]:
        return [(i, j) for j, c in enumerate(self.cols) for i in iter_bits(c)]

    def entry(self, i: int, j: int) -> int:
        return self.cols[j] >> i & 1

    def local_index(self, simplex: int) -> int:
        return self.simplices.index(simplex)

    def dense(self) -> list[list[int]]:
        m = len(self)
        return [[self.entry(i, j) for j in range(m)] for i in range(m)]

    def check_invariants(self, md: MorseDecomposition | None = None) -> None:
        for j, c in enumerate(self.cols):
            acc = 0
            for i in iter_bits(c):
                if self.dims[i] != self.dims[j] - 1:
                    raise InvariantError(f"boundary grading violated at ({i}, {j})")
                if self.grading[i] == self.grading[j]:
                    raise InvariantError(f"nonzero diagonal block at ({i}, {j})")
                if md is not None and not md.leq(self.grading[i], self.grading[j]):
                    raise InvariantError(f"poset filtration violated at ({i}, {j})")
                acc ^= self.cols[i]
            if acc:
                raise InvariantError("squared-zero violated")

    def betti_numbers(self) -> dict[int, int]:
        """Homology ranks of the complex this matrix defines, per dimension."""
        reduced = _reduce_plain(list(self.cols))
        count: dict[int, int] = defaultdict(int)
        rank: dict[int, int] = defaultdict(int)
        for j, c in enumerate(reduced):
            count[self.dims[j]] += 1
            if c:
                rank[self.dims[j]] += 1
        return {d: count[d] - rank[d] - rank[d + 1] for d in sorted(count)}

    def to_json(self) -> dict:
        out = {
            "kept": list(self.simplices),
            "grading": list(self.grading),
            "dims": list(self.dims),
            "entries": [list(e) for e in self.entries()],
        }
        if self.basis_chains is not None:
            out["basis_chains"] = [list(ch) for ch in self.basis_chains]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConnectionMatrix":
        simplices = tuple(int(s) for s in data["kept"])
        cols = [0] * len(simplices)
        for i, j in data["entries"]:
            cols[j] |= 1 << i
        chains = data.get("basis_chains")
        return cls(
            kept=tuple(range(len(simplices))),
            simplices=simplices,
            grading=tuple(int(g) for g in data["grading"]),
            dims=tuple(int(d) for d in data["dims"]),
            cols=tuple(cols),
            basis_chains=None if chains is None else tuple(tuple(c) for c in chains),
        )


def _reduce_plain(cols: list[int]) -> list[int]:
    pivots: dict[int, int] = {}
    for j, c in enumerate(cols):
        while c:
            s = pivots.get(c.bit_length() - 1)
            if s is None:
                break
            c ^= cols[s]
        cols[j] = c
        if c:
            pivots[c.bit_length() - 1] = j
    return cols


def extract_connection_matrix(A: FilteredMatrix) -> ConnectionMatrix:
    """Restrict ``A`` to the rows and columns that are neither homogeneous nor targetable."""
    hom, tgt = A.targetable_of()
    kept = [j for j in range(A.n) if j not in hom and j not in tgt]
    local = {j: k for k, j in enumerate(kept)}
    cols = []
    for j in kept:
        c = 0
        for i in iter_bits(A.cols[j]):
            k = local.get(i)
            if k is not None:
                c |= 1 << k
        cols.append(c)
    chains = None
    if A.chain is not None:
        chains = tuple(tuple(A.chain_simplices(j)) for j in kept)
    return ConnectionMatrix(
        kept=tuple(kept),
        simplices=tuple(A.simplices[j] for j in kept),
        grading=tuple(A.grading[j] for j in kept),
        dims=tuple(A.dims[j] for j in kept),
        cols=tuple(cols),
        basis_chains=chains,
    )


def conmat(A: FilteredMatrix, check: bool = True,
           deadline: float | None = None) -> tuple[FilteredMatrix, ConnectionMatrix]:
    """Single left-to-right pass; sources are homogeneous columns only."""
    if check:
        A.check_invariants()
    out = A.copy()
    cols, chain, grading = out.cols, out.chain, out.grading
    owner: dict[int, int] = {}  # row -> the homogeneous processed column pivoting there
    owned = 0
    for j in range(out.n):
        if j & 63 == 0 and _expired(deadline):
            raise ReductionTimeout(f"conmat exceeded its deadline at column {j}")
        c = cols[j]
        was_homogeneous = bool(c) and grading[c.bit_length() - 1] == grading[j]
        hits = c & owned
        if hits:
            ch = chain[j] if chain is not None else 0
            while hits:
                s = owner[hits.bit_length() - 1]
                c ^= cols[s]
                if chain is not None:
                    ch ^= chain[s]
                hits = c & owned
            cols[j] = c
            if chain is not None:
                chain[j] = ch
        if c:
            i = c.bit_length() - 1
            if grading[i] == grading[j]:
                assert was_homogeneous, "a non-homogeneous column became homogeneous"
                assert i not in owner, "two homogeneous columns share a pivot"
                owner[i] = j
                owned |= 1 << i
    return out, extract_connection_matrix(out)


def connectmat(A: FilteredMatrix, check: bool = True,
               deadline: float | None = None) -> tuple[FilteredMatrix, ConnectionMatrix]:
    """Additions from the smallest homogeneous source on either side, each
    paired with the matching row addition on a synchronized transpose."""
    if check:
        A.check_invariants()
    out = A.copy()
    cols, chain, grading = out.cols, out.chain, out.grading
    n = out.n
    rows = [0] * n
    for j, c in enumerate(cols):
        bit = 1 << j
        for i in iter_bits(c):
            rows[i] |= bit
    lows = [c.bit_length() - 1 for c in cols]
    by_low: dict[int, set[int]] = defaultdict(set)
    for j, l in enumerate(lows):
        if l >= 0:
            by_low[l].add(j)

    def relow(k: int) -> None:
        new = cols[k].bit_length() - 1
        old = lows[k]
        if new != old:
            if old >= 0:
                by_low[old].discard(k)
            if new >= 0:
                by_low[new].add(k)
            lows[k] = new

    for j in range(n):
        if j & 63 == 0 and _expired(deadline):
            raise ReductionTimeout(f"connectmat exceeded its deadline at column {j}")
        i = lows[j]
        while i >= 0:
            gi = grading[i]
            sources = [s for s in by_low.get(i, ()) if s != j and grading[s] == gi]
            if sources:
                s = min(sources)
                cs = cols[s]
                cols[j] ^= cs
                jbit = 1 << j
                for r in iter_bits(cs):
                    rows[r] ^= jbit
                if chain is not None:
                    chain[j] ^= chain[s]
                relow(j)
                rj = rows[j]
                rows[s] ^= rj
                sbit = 1 << s
                for k in iter_bits(rj):
                    cols[k] ^= sbit
                    relow(k)
            i = (cols[j] & ((1 << i) - 1)).bit_length() - 1
    return out, extract_connection_matrix(out)


def with_row_additions(A_out: FilteredMatrix) -> FilteredMatrix:
    """``V^-1 A_out``: the output with the row additions ConMat skips applied afterwards.

    ``A_out = A V`` with ``V`` the accumulated chains, so the result is a change
    of basis of ``A`` and squares to zero again. It differs from ``A_out`` only
    in rows of targetable basis elements.
    """
    if A_out.chain is None:
        raise ValueError("chain tracking is needed to undo the column operations")
    V = A_out.chain
    for j, v in enumerate(V):
        if v.bit_length() - 1 != j:
            raise InvariantError("accumulated chains are not unitriangular")
    cols = []
    for x in A_out.cols:
        m = 0
        while x:
            i = x.bit_length() - 1
            m |= 1 << i
            x ^= V[i]
        cols.append(m)
    return FilteredMatrix(cols, A_out.grading, A_out.dims, A_out.simplices, A_out.lin_rank,
                          None, A_out.order)


def complete_reduction(A: FilteredMatrix, deadline: float | None = None) -> FilteredMatrix:
    """Standard persistence reduction: zero columns or pairwise distinct pivots."""
    out = A.copy()
    cols, chain = out.cols, out.chain
    pivots: dict[int, int] = {}
    for j in range(out.n):
        if j & 63 == 0 and _expired(deadline):
            raise ReductionTimeout(f"complete reduction exceeded its deadline at column {j}")
        c = cols[j]
        while c:
            s = pivots.get(c.bit_length() - 1)
            if s is None:
                break
            c ^= cols[s]
            if chain is not None:
                chain[j] ^= chain[s]
        cols[j] = c
        if c:
            pivots[c.bit_length() - 1] = j
    return out


@dataclass(frozen=True)
class ReducedReport:
    R1: bool
    R2: bool
    R3: bool

    def __bool__(self) -> bool:
        return self.R1 and self.R2 and self.R3


def check_reduced(A: FilteredMatrix) -> ReducedReport:
    hom, tgt = A.targetable_of()
    owners: dict[int, list[int]] = defaultdict(list)
    for j in hom:
        owners[A.low(j)].append(j)
    r1 = all(len(v) == 1 for v in owners.values())
    r2 = hom.isdisjoint(tgt)
    r3 = True
    for j, c in enumerate(A.cols):
        for i in iter_bits(c):
            if any(s < j for s in owners.get(i, ())):
                r3 = False
                break
        if not r3:
            break
    return ReducedReport(r1, r2, r3)


@dataclass(frozen=True)
class CompareResult:
    equal: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.equal


def morse_fixed_compare(S: ConnectionMatrix, S2: ConnectionMatrix,
                        correspondence: Mapping[int, int] | None = None) -> CompareResult:
    """Entrywise comparison under an index bijection (default: same simplex)."""
    if correspondence is None:
        where = {s: k for k, s in enumerate(S2.simplices)}
        correspondence = {k: where.get(s) for k, s in enumerate(S.simplices)}
    if (len(S) != len(S2) or sorted(correspondence) != list(range(len(S)))
            or sorted(v for v in correspondence.values() if v is not None) != list(range(len(S2)))):
        missing = next((k for k, v in correspondence.items() if v is None), None)
        return CompareResult(False, ("not a bijection", missing))
    for j in range(len(S)):
        for i in range(len(S)):
            if S.entry(i, j) != S2.entry(correspondence[i], correspondence[j]):
                return CompareResult(False, (i, j))
    return CompareResult(True)


def permutation_equivalent(S: ConnectionMatrix, S2: ConnectionMatrix) -> tuple[int, ...] | None:
    """Exhaustive search for ``pi`` with ``S[i, j] == S2[pi[i], pi[j]]``.

    Factorial time; meant for small matrices only.
    """
    m = len(S)
    if m != len(S2):
        return None
    a, b = S.dense(), S2.dense()
    for pi in permutations(range(m)):
        if all(a[i][j] == b[pi[i]][pi[j]] for i in range(m) for j in range(m)):
            return pi
    return None
