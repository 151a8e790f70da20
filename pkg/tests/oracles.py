"""Slow, independent reference computations used only by the tests.

Nothing here imports the package's reduction, SCC or convexity code; inputs
are plain vertex tuples and vector lists.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations, permutations

import numpy as np


def gf2_rank(M: np.ndarray) -> int:
    """Rank over Z2 by Gaussian elimination on a copy."""
    M = (np.array(M, dtype=np.uint8) & 1).copy()
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(M[r:, c])[0]
        if piv.size == 0:
            continue
        p = r + piv[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        hits = np.nonzero(M[:, c])[0]
        hits = hits[hits != r]
        M[hits] ^= M[r]
        r += 1
    return r


def gf2_nullspace(M: np.ndarray) -> np.ndarray:
    """Basis (as rows) of the kernel of ``M`` over Z2."""
    M = (np.array(M, dtype=np.uint8) & 1).copy()
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(M[r:, c])[0]
        if piv.size == 0:
            continue
        p = r + piv[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        hits = np.nonzero(M[:, c])[0]
        hits = hits[hits != r]
        M[hits] ^= M[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for k, pc in enumerate(pivots):
            v[pc] = M[k, f]
        basis.append(v)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), cols)


def faces_of(tops) -> list[tuple]:
    out = set()
    for t in tops:
        t = tuple(sorted(t))
        for k in range(1, len(t) + 1):
            out.update(combinations(t, k))
    return sorted(out, key=lambda s: (len(s), s))


def boundary_dense(simplices: list[tuple], dim: int, among=None) -> np.ndarray:
    """Boundary map from ``dim``-simplices to ``dim-1``-simplices (restricted to ``among``)."""
    pool = simplices if among is None else [s for s in simplices if s in among]
    hi = [s for s in pool if len(s) == dim + 1]
    lo = [s for s in pool if len(s) == dim]
    where = {s: i for i, s in enumerate(lo)}
    M = np.zeros((len(lo), len(hi)), dtype=np.uint8)
    for j, s in enumerate(hi):
        for v in s:
            f = tuple(x for x in s if x != v)
            if f in where:
                M[where[f], j] = 1
    return M


def betti(simplices: list[tuple]) -> dict[int, int]:
    """Z2 Betti numbers of the complex given by its full list of vertex tuples."""
    simplices = [tuple(s) for s in simplices]
    top = max(len(s) for s in simplices) - 1
    counts = Counter(len(s) - 1 for s in simplices)
    ranks = {d: (gf2_rank(boundary_dense(simplices, d)) if d >= 1 else 0) for d in range(top + 2)}
    return {d: counts[d] - ranks[d] - ranks.get(d + 1, 0) for d in range(top + 1)}


def is_convex_bruteforce(simplices: list[tuple], S) -> bool:
    """``a <= b <= c`` with ``a, c`` in ``S`` forces ``b`` in ``S``."""
    S = set(S)
    sets = [frozenset(s) for s in simplices]
    for a in S:
        for c in S:
            if not sets[a] <= sets[c]:
                continue
            for b in range(len(sets)):
                if sets[a] <= sets[b] <= sets[c] and b not in S:
                    return False
    return True


def reachability(simplices: list[tuple], vectors: list) -> np.ndarray:
    """``R[s, t]`` is true iff t is reachable from s along F_V (reflexive)."""
    n = len(simplices)
    sets = [frozenset(s) for s in simplices]
    vec_of = {}
    for k, v in enumerate(vectors):
        for s in v:
            vec_of[s] = k
    R = np.eye(n, dtype=bool)
    for s in range(n):
        for t in range(n):
            if sets[t] <= sets[s] or vec_of[t] == vec_of[s]:
                R[s, t] = True
    for k in range(n):
        R |= R[:, [k]] & R[[k], :]
    return R


def morse_sets_bruteforce(simplices: list[tuple], vectors: list) -> list[list[int]]:
    R = reachability(simplices, vectors)
    mutual = R & R.T
    seen, out = set(), []
    for s in range(len(simplices)):
        if s in seen:
            continue
        comp = [int(t) for t in np.nonzero(mutual[s])[0]]
        seen.update(comp)
        out.append(sorted(comp))
    return sorted(out)


def persistence_bruteforce(simplices: list[tuple], level: list[float]) -> Counter:
    """Bars with positive length of the sublevel filtration ``level`` (one value per simplex).

    Uses persistent Betti numbers from ranks only:
    ``beta^{a,b} = dim Z(K_a) - dim(Z(K_a) ∩ B(K_b))``.
    """
    simplices = [tuple(s) for s in simplices]
    values = sorted(set(level))
    top = max(len(s) for s in simplices) - 1

    def sub(a):
        return {s for s, f in zip(simplices, level) if f <= a}

    def pbetti(d, a, b):
        Ka, Kb = sub(a), sub(b)
        dd = boundary_dense(simplices, d, Ka) if d >= 1 else np.zeros((0, sum(len(s) == 1 for s in Ka)), np.uint8)
        Z = gf2_nullspace(dd) if dd.shape[1] else np.zeros((0, 0), np.uint8)
        if Z.shape[0] == 0:
            return 0
        # express Z(K_a) in the d-simplex basis of K_b
        cells_a = [s for s in simplices if s in Ka and len(s) == d + 1]
        cells_b = [s for s in simplices if s in Kb and len(s) == d + 1]
        pos = {s: i for i, s in enumerate(cells_b)}
        Zb = np.zeros((Z.shape[0], len(cells_b)), np.uint8)
        for i, s in enumerate(cells_a):
            Zb[:, pos[s]] = Z[:, i]
        Bm = boundary_dense(simplices, d + 1, Kb).T if d + 1 <= top else np.zeros((0, len(cells_b)), np.uint8)
        rb = gf2_rank(Bm) if Bm.size else 0
        both = gf2_rank(np.vstack([Zb, Bm])) if Bm.size else Z.shape[0]
        return Z.shape[0] - (rb + Z.shape[0] - both)

    INF = float("inf")
    bars: Counter = Counter()
    ext = values + [INF]
    for d in range(top + 1):
        for i, a in enumerate(values):
            prev = values[i - 1] if i > 0 else None
            for j in range(i + 1, len(ext)):
                b = ext[j]
                bl = ext[j - 1]
                def pb(x, y):
                    if x is None:
                        return 0
                    return pbetti(d, x, y if y != INF else values[-1])
                if b == INF:
                    m = pb(a, values[-1]) - pb(prev, values[-1])
                else:
                    m = pb(a, bl) - pb(prev, bl) - pb(a, b) + pb(prev, b)
                if m:
                    bars[(d, a, b)] += m
    return bars


def bottleneck_bruteforce(X: list[tuple[float, float]], Y: list[tuple[float, float]]) -> float:
    """Finite bars only; tries every matching, each bar may go to its own diagonal point."""
    n, m = len(X), len(Y)
    left = [("p", i) for i in range(n)] + [("d", j) for j in range(m)]
    right = [("p", j) for j in range(m)] + [("d", i) for i in range(n)]

    def cost(u, v):
        if u[0] == "p" and v[0] == "p":
            (b, d), (b2, d2) = X[u[1]], Y[v[1]]
            return max(abs(b - b2), abs(d - d2))
        if u[0] == "p":
            return (X[u[1]][1] - X[u[1]][0]) / 2 if u[1] == v[1] else float("inf")
        if v[0] == "p":
            return (Y[v[1]][1] - Y[v[1]][0]) / 2 if u[1] == v[1] else float("inf")
        return 0.0

    best = float("inf")
    for perm in permutations(range(len(right))):
        best = min(best, max((cost(left[i], right[perm[i]]) for i in range(len(left))), default=0.0))
    return best
