"""Instance builders and the boundary-invariant bookkeeping shared by the tests."""

from __future__ import annotations

import numpy as np

from conley.complex import build_complex
from conley.morse import minimum_morse_decomposition
from conley.mvf import MultivectorField
from conley.randgen import coarsen_to, make_rng, random_complex
from conley.reduce import conmat, connectmat, with_row_additions

# Counts every matrix checked through ``checked``; the acceptance suite reports it.
BOUNDARY_LOG = {"checked": 0, "failures": []}


def checked(algo, A, **kw):
    """Run a reduction and assert the boundary invariants around it.

    The input must square to zero, be upper triangular and stay untouched.
    ConMat's output is upper triangular; once its deferred row additions are
    applied it squares to zero again and agrees with the extracted
    connection matrix. ConnectMat performs its row additions as it goes, so
    its output must square to zero as it stands.
    """
    name = algo.__name__
    before = list(A.cols)
    _check(A, f"{name} input")
    A_out, cm = algo(A, **kw)
    _check(A, f"{name} input after", ok=A.cols == before)
    if algo is connectmat:
        _check(A_out, f"{name} output", triangular=False)
        return A_out, cm
    _check(A_out, f"{name} output", nilpotent=False)
    if A_out.chain is not None:
        M = with_row_additions(A_out)
        kept = cm.kept
        same = all(M.entry(kept[a], kept[b]) == cm.entry(a, b)
                   for a in range(len(kept)) for b in range(len(kept)))
        _check(M, f"{name} output with row additions", ok=same)
    return A_out, cm


def _check(M, label, nilpotent=True, triangular=True, ok=True):
    BOUNDARY_LOG["checked"] += 1
    ok = (ok and (not triangular or M.is_upper_triangular())
          and (not nilpotent or M.squares_to_zero()))
    if not ok:
        BOUNDARY_LOG["failures"].append(label)
    assert ok, f"{label}: A*A = 0 or upper triangularity failed"


def random_instance(seed: int, max_simplices: int = 500):
    """A random complex of at most ``max_simplices`` simplices and a coarsened field on it."""
    rng = make_rng(seed)
    while True:
        nv = int(rng.integers(4, 22))
        K = random_complex(rng, nv, int(rng.integers(2, 3 * nv)), max_dim=int(rng.integers(1, 5)))
        if 2 <= len(K) <= max_simplices:
            break
    p = float(rng.choice([0.0, 0.01, 0.03, 0.08, 0.15, 0.3]))
    F, _ = coarsen_to(K, p, seed=int(rng.integers(0, 2**31)))
    return K, F


def annulus():
    """Square A-B-C-D with diagonal CA, triangles ABC and CDA, and a periodic orbit."""
    K = build_complex([(0, 1, 2), (0, 2, 3)])
    n = {name: K.id_of(v) for name, v in {
        "A": (0,), "B": (1,), "C": (2,), "D": (3,), "AB": (0, 1), "BC": (1, 2), "CD": (2, 3),
        "DA": (0, 3), "CA": (0, 2), "ABC": (0, 1, 2), "CDA": (0, 2, 3)}.items()}
    F = MultivectorField.from_vectors(len(K), [
        [n["A"], n["AB"]], [n["B"], n["BC"]], [n["C"], n["CD"]], [n["D"], n["DA"]],
        [n["CA"]], [n["ABC"]], [n["CDA"]]])
    return K, F, n


def order_dependent_example():
    """Four vertices, edges AB CA AD DB, triangle ABD; vector {AD, DB, ABD}."""
    K = build_complex([(0, 1), (0, 2), (0, 3), (1, 3), (0, 1, 3)])
    n = {name: K.id_of(v) for name, v in {
        "A": (0,), "B": (1,), "C": (2,), "D": (3,), "AB": (0, 1), "CA": (0, 2),
        "AD": (0, 3), "DB": (1, 3), "ABD": (0, 1, 3)}.items()}
    vectors = [[n["AD"], n["DB"], n["ABD"]]]
    vectors += [[s] for s in range(len(K)) if s not in vectors[0]]
    return K, MultivectorField.from_vectors(len(K), vectors), n


def random_linear_extension(md, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniformly random choice among the available minimal elements at each step."""
    above = [[] for _ in range(len(md))]
    indeg = [len(b) for b in md.below]
    for p, b in enumerate(md.below):
        for q in b:
            above[q].append(p)
    ready = [p for p in range(len(md)) if indeg[p] == 0]
    out = []
    while ready:
        k = int(rng.integers(0, len(ready)))
        p = ready.pop(k)
        out.append(p)
        for r in above[p]:
            indeg[r] -= 1
            if indeg[r] == 0:
                ready.append(r)
    return tuple(out)


__all__ = ["BOUNDARY_LOG", "annulus", "checked", "conmat", "connectmat", "order_dependent_example",
           "minimum_morse_decomposition", "random_instance", "random_linear_extension"]
