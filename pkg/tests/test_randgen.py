from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conley.complex import build_complex
from conley.mvf import connection_probability, singleton_field, validate_field
from conley.randgen import (TABLE_PRESETS, build_benchmark_complex, coarsen_to, dense_graph,
                            full_simplex, triangle_soup)


def test_target_zero_and_one():
    K = build_complex([(0, 1, 2), (2, 3)])
    F, p = coarsen_to(K, 0.0)
    assert F == singleton_field(K) and p == 0
    F, p = coarsen_to(K, 1.0)
    assert len(F.vectors) == 1 and p == 1
    validate_field(K, F)
    with pytest.raises(ValueError):
        coarsen_to(K, 1.5)


@given(st.integers(0, 10_000), st.floats(0.01, 0.5))
@settings(max_examples=25, deadline=None)
def test_coarsening_stops_at_first_crossing(seed, target):
    K = triangle_soup(9, 12, seed=seed)
    seen = []
    F, p = coarsen_to(K, target, seed=seed, on_step=lambda b: seen.append(b.connection_probability()))
    assert p >= target and p == connection_probability(F)
    if len(seen) > 1:
        assert seen[-2] < target
    assert seen[-1] == p
    validate_field(K, F)


def test_same_seed_same_field():
    K = triangle_soup(12, 30, seed=4)
    assert coarsen_to(K, 0.1, seed=7) == coarsen_to(K, 0.1, seed=7)
    assert triangle_soup(12, 30, seed=4) == K


def test_generator_sizes():
    assert len(full_simplex(12)) == 8191
    assert len(triangle_soup(10, 20, seed=1, all_edges=False)) <= 10 + 45 + 20
    K = dense_graph(30, 400, seed=2)
    assert len(K) == 430
    with pytest.raises(ValueError, match="exceed"):
        dense_graph(10, 46)
    with pytest.raises(ValueError, match="distinct"):
        triangle_soup(5, 11)


def test_benchmark_kinds():
    assert len(build_benchmark_complex("full-simplex", {"d": 3})) == 15
    assert len(build_benchmark_complex("dense-graph", TABLE_PRESETS["V4"][1])) == 101056
    with pytest.raises(ValueError, match="n_edges"):
        build_benchmark_complex("dense-graph", {"n_vertices": 4})
    with pytest.raises(ValueError, match="unknown"):
        build_benchmark_complex("cube", {})


def test_probability_is_exact():
    K = build_complex([(0, 1)])
    F, p = coarsen_to(K, 0.2, seed=0)
    assert isinstance(p, Fraction) and p == Fraction(2, 6)
