"""Transition-graph counting, presentations, and spectral data."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_torus.sft import (
    PerronData,
    TransitionGraph,
    char_poly,
    count_blocks,
    count_periodic,
    higher_block_graph,
    is_irreducible,
    perron_data,
    prune_to_recurrent,
    to_dot,
)
from oracles import brute_count_blocks, brute_count_periodic

FIB = TransitionGraph([[1, 1], [1, 0]])

st_graph = st.integers(min_value=2, max_value=4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=0, max_value=2), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
).map(TransitionGraph)


def test_fibonacci_block_counts():
    assert [count_blocks(FIB, n) for n in range(1, 6)] == [2, 3, 5, 8, 13]


def test_fibonacci_periodic_counts():
    # closed paths: Lucas numbers
    assert [count_periodic(FIB, n) for n in range(1, 6)] == [1, 3, 4, 7, 11]


@settings(max_examples=40)
@given(st_graph, st.integers(min_value=1, max_value=4))
def test_block_count_matches_enumeration(g, n):
    assert count_blocks(g, n) == brute_count_blocks(g.matrix, n)


@settings(max_examples=40)
@given(st_graph, st.integers(min_value=1, max_value=4))
def test_periodic_count_matches_enumeration(g, n):
    assert count_periodic(g, n) == brute_count_periodic(g.matrix, n)


def test_higher_block_presentation():
    hb, blocks = higher_block_graph(FIB)
    assert blocks == [(0, 0), (0, 1), (1, 0)]
    assert hb.matrix == ((1, 1, 0), (0, 0, 1), (1, 1, 0))
    # (n+1)-blocks downstairs are n-blocks upstairs; periodic counts agree
    for n in range(1, 5):
        assert count_blocks(hb, n) == count_blocks(FIB, n + 1)
        assert count_periodic(hb, n) == count_periodic(FIB, n)


def test_higher_block_rejects_multiplicities():
    with pytest.raises(ValueError):
        higher_block_graph(TransitionGraph([[2, 1], [1, 0]]))


def test_irreducibility():
    assert is_irreducible(FIB)
    assert not is_irreducible(TransitionGraph([[1, 1], [0, 1]]))
    assert is_irreducible(TransitionGraph([[1]]))
    assert not is_irreducible(TransitionGraph([[0]]))


def test_prune_to_recurrent():
    g = TransitionGraph([[1, 1], [0, 0]])
    pruned, kept = prune_to_recurrent(g)
    assert pruned.matrix == ((1,),) and kept == [0]
    with pytest.raises(ValueError):
        prune_to_recurrent(TransitionGraph([[0, 1], [0, 0]]))


def test_char_poly_quadratic():
    assert char_poly(FIB) == (1, -1, -1)
    assert char_poly(TransitionGraph([[2, 1], [1, 1]])) == (1, -3, 1)


@settings(max_examples=30)
@given(st_graph)
def test_char_poly_matches_numpy(g):
    exact = char_poly(g)
    numeric = np.poly(np.array(g.matrix, dtype=float))
    assert np.allclose(np.array(exact, dtype=float), numeric, atol=1e-6)


def test_perron_radius_fibonacci():
    data = perron_data(FIB)
    assert isinstance(data, PerronData)
    golden = (1 + 5 ** 0.5) / 2
    assert abs(data.spectral_radius - golden) < 1e-12
    assert data.char_poly == (1, -1, -1)


def test_dot_output_deterministic():
    dot = to_dot(TransitionGraph([[1, 2], [1, 0]]), labels=["R1", "R2"])
    assert dot == (
        "digraph shift {\n"
        "  rankdir=LR;\n"
        '  n0 [label="R1"];\n'
        '  n1 [label="R2"];\n'
        "  n0 -> n0;\n"
        '  n0 -> n1 [label="2"];\n'
        "  n1 -> n0;\n"
        "}\n"
    )
