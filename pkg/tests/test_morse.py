import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conley.complex import InvariantError
from conley.morse import (FilteredOrder, MorseDecomposition, coarsen_decomposition,
                          filtered_order, fv_digraph, is_morse_set, minimum_morse_decomposition,
                          strongly_connected_components)
from helpers import annulus, random_instance, random_linear_extension
from oracles import morse_sets_bruteforce, reachability


def names(K, n, simplices):
    inv = {v: k for k, v in n.items()}
    return sorted(inv[s] for s in simplices)


def test_annulus_decomposition():
    K, F, n = annulus()
    md = minimum_morse_decomposition(K, F)
    assert [names(K, n, m) for m in md.sets] == [
        sorted("A B C D AB BC CD DA".split()), ["CA"], ["ABC"], ["CDA"]]
    # CA flows to the orbit; both triangles flow to CA and the orbit
    assert md.poset_edges() == [[1, 0], [2, 0], [2, 1], [3, 0], [3, 1]]
    assert md.linear_ext == (0, 1, 2, 3)
    assert md.leq(0, 3) and not md.leq(3, 0) and not md.leq(2, 3)


def test_scc_small_cycle():
    labels = strongly_connected_components([[1], [2], [0, 3], []])
    assert labels[0] == labels[1] == labels[2] != labels[3]


def test_fv_digraph_of_annulus():
    K, F, n = annulus()
    g = fv_digraph(K, F)
    assert g[n["A"]] == {n["AB"]}
    assert g[n["CA"]] == {n["A"], n["C"]}


def test_is_morse_set_and_coarsening():
    K, F, n = annulus()
    md = minimum_morse_decomposition(K, F)
    assert is_morse_set(K, F, md.sets[0] | md.sets[1])
    # orbit and CDA without CA in between: CDA -> CA -> orbit leaves and returns
    assert not is_morse_set(K, F, md.sets[0] | md.sets[3])
    coarse = coarsen_decomposition(K, F, md, [[0, 1]])
    assert len(coarse) == 3
    with pytest.raises(InvariantError, match="not a Morse set"):
        coarsen_decomposition(K, F, md, [[0, 3]])


def test_filtered_order_validation():
    K, F, n = annulus()
    md = minimum_morse_decomposition(K, F)
    o = filtered_order(K, md)
    assert FilteredOrder.from_permutation(K, md, o.order) == o
    bad = list(o.order)
    bad[-1], bad[-2] = bad[-2], bad[-1]  # ABC after CDA: 3 before 2 is fine in the poset
    assert FilteredOrder.from_permutation(K, md, bad).linear_ext == (0, 1, 3, 2)
    swapped = list(o.order)
    i, j = swapped.index(n["CA"]), swapped.index(n["A"])
    swapped[i], swapped[j] = swapped[j], swapped[i]
    with pytest.raises(InvariantError):
        FilteredOrder.from_permutation(K, md, swapped)
    with pytest.raises(InvariantError, match="non-admissible"):
        filtered_order(K, md, within_set_order={0: [n[x] for x in "AB A B C D BC CD DA".split()]})
    with pytest.raises(InvariantError, match="linear extension"):
        filtered_order(K, md, linear_ext=[1, 0, 2, 3])


def test_json_round_trip():
    K, F, _ = annulus()
    md = minimum_morse_decomposition(K, F)
    assert MorseDecomposition.from_json(md.to_json(), len(K)) == md
    data = md.to_json()
    data["linear_ext"] = [3, 2, 1, 0]
    with pytest.raises(InvariantError):
        MorseDecomposition.from_json(data, len(K))


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_decomposition_matches_bruteforce_reachability(seed):
    K, F = random_instance(seed, max_simplices=120)
    md = minimum_morse_decomposition(K, F)
    simp = K.vertex_lists()
    vecs = [sorted(v) for v in F.vectors.values()]
    assert sorted(sorted(m) for m in md.sets) == morse_sets_bruteforce(simp, vecs)
    R = reachability(simp, vecs)
    reps = [min(m) for m in md.sets]
    for p in range(len(md)):
        for q in range(len(md)):
            assert md.leq(q, p) == bool(R[reps[p], reps[q]])
    assert md.is_linear_extension(md.linear_ext)
    ext = random_linear_extension(md, np.random.default_rng(seed))
    assert md.is_linear_extension(ext)
    o = filtered_order(K, md, linear_ext=ext)
    pos = o.position
    for s in range(len(K)):
        assert all(pos[f] < pos[s] for f in K.facets[s])
