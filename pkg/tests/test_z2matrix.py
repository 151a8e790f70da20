import pytest
from hypothesis import given, settings, strategies as st

from conley.complex import InvariantError
from conley.morse import filtered_order, minimum_morse_decomposition
from conley.z2matrix import FilteredMatrix, bits_of, boundary_matrix, iter_bits
from helpers import annulus, random_instance


def test_bit_helpers():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert bits_of([5, 0, 3]) == 0b101001


def test_annulus_boundary_matrix():
    K, F, n = annulus()
    md = minimum_morse_decomposition(K, F)
    A = boundary_matrix(K, filtered_order(K, md))
    A.check_invariants(K, md)
    pos = {s: i for i, s in enumerate(A.simplices)}
    assert A.column(pos[n["CA"]]) == sorted([pos[n["A"]], pos[n["C"]]])
    assert A.low(pos[n["A"]]) is None
    assert A.nnz() == 2 * 5 + 3 * 2
    assert A.is_homogeneous(pos[n["AB"]]) and not A.is_homogeneous(pos[n["CA"]])


def test_invariant_violations_are_named():
    K, F, _ = annulus()
    md = minimum_morse_decomposition(K, F)
    A = boundary_matrix(K, filtered_order(K, md))
    B = A.copy()
    B.cols[0] |= 1 << 5
    with pytest.raises(InvariantError, match="upper triangularity"):
        B.check_invariants()
    C = A.copy()
    C.cols[-1] ^= C.cols[-1] & -C.cols[-1]  # drop one face of the last triangle
    with pytest.raises(InvariantError, match="A\\*A = 0|not the boundary"):
        C.check_invariants(K)
    D = A.copy()
    D.add_column(4, 5)
    assert D.chain_simplices(5) == sorted([A.simplices[4], A.simplices[5]])
    assert D.cols[5] == A.cols[4] ^ A.cols[5]
    with pytest.raises(ValueError):
        D.add_column(3, 3)


def test_coo_round_trip():
    K, F, _ = annulus()
    md = minimum_morse_decomposition(K, F)
    A = boundary_matrix(K, filtered_order(K, md), track_chains=False)
    B = FilteredMatrix.load_coo(A.dump_coo())
    assert B.cols == A.cols and B.grading == A.grading and B.simplices == A.simplices
    head, *_ = A.dump_coo().splitlines()
    with pytest.raises(ValueError, match="line 3"):
        FilteredMatrix.load_coo(f"{head}\n0 4\nx y\n")


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_boundary_matrices_are_filtered_and_square_to_zero(seed):
    K, F = random_instance(seed, max_simplices=200)
    md = minimum_morse_decomposition(K, F)
    A = boundary_matrix(K, filtered_order(K, md))
    A.check_invariants(K, md)
    assert A.is_upper_triangular() and A.squares_to_zero()
