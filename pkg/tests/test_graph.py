import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from sopsim.circuit import Circuit, Gate, running_example
from sopsim.errors import ParseError, ResourceCapError, ValidationError
from sopsim.families import random_graph
from sopsim.graph import (Graph, cut_rank, gf2_rank, line_graph, parse_graph, serialize_graph,
                          tensor_network_graph, treewidth_exact, treewidth_minfill_ub,
                          validate_tree_decomposition)

from conftest import cut_rank_dense, dense_adjacency, rank_gf2_dense


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def span_rank(rows):
    span = {0}
    for row in rows:
        span |= {x ^ row for x in span}
    return len(span).bit_length() - 1


def elimination_tw_oracle(g):
    """min over all orders of the max elimination degree, using python sets."""
    best = None
    for order in itertools.permutations(range(g.n)):
        nbrs = {v: set(g.neighbors(v)) for v in range(g.n)}
        width = 0
        for v in order:
            nb = nbrs.pop(v)
            width = max(width, len(nb))
            for u in nb:
                nbrs[u] |= nb - {u}
                nbrs[u].discard(v)
        best = width if best is None else min(best, width)
    return best or 0


def test_gf2_rank_examples():
    assert gf2_rank([0b100, 0b010, 0b001]) == 3
    assert gf2_rank([0b111] * 3) == 1
    rows = [0b110, 0b011, 0b101]
    assert span_rank(rows) == 2
    assert gf2_rank(rows) == 2
    assert gf2_rank([]) == 0


@given(st.lists(st.integers(0, 2 ** 9 - 1), max_size=9))
@settings(max_examples=200, deadline=None)
def test_gf2_rank_matches_span_and_dense(rows):
    dense = [[(r >> j) & 1 for j in range(9)] for r in rows] or [[0] * 9]
    assert gf2_rank(rows) == span_rank(rows) == rank_gf2_dense(dense)


def test_cut_rank_examples():
    assert cut_rank(path(3), {0}) == 1
    assert cut_rank(complete(4), {1, 3}) == 1
    assert cut_rank(cycle(5), set()) == 0


def test_cut_rank_random_against_dense():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 9)
        g = random_graph(n, rng.random(), rng)
        a = dense_adjacency(n, g.edges())
        side = {v for v in range(n) if rng.random() < 0.5}
        assert cut_rank(g, side) == cut_rank_dense(a, side)
        assert cut_rank(g, side) == cut_rank(g, set(range(n)) - side)


def test_graph_validation():
    with pytest.raises(ValidationError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValidationError):
        Graph.from_edges(2, [(0, 2)])


def test_graph_format_round_trip():
    g = cycle(5)
    assert parse_graph(serialize_graph(g)) == g
    with pytest.raises(ParseError):
        parse_graph("edge 0 1")
    with pytest.raises(ValidationError):
        parse_graph("vertices 2\nedge 0 5")


def test_tensor_network_running_example():
    tn = tensor_network_graph(running_example())
    assert tn.graph.n == 9 and len(tn.bonds) == 8 and tn.graph.num_edges() == 8
    assert tensor_network_graph(Circuit(1)).graph.n == 0
    hh = tensor_network_graph(Circuit(1, (Gate.h(0), Gate.h(0))))
    assert hh.graph.n == 2 and hh.graph.num_edges() == 1


def test_line_graph_running_example():
    lg = line_graph(tensor_network_graph(running_example()))
    g, labels = lg.graph, list(lg.labels)
    assert g.n == 8
    idx = {lab: i for i, lab in enumerate(labels)}
    assert g.has_edge(idx["e5,6"], idx["e6,8"])
    clique_a = ["e1,4", "e2,4", "e4,5", "e4,7"]
    clique_b = ["e4,5", "e3,5", "e5,6", "e5,9"]
    for clique in (clique_a, clique_b):
        for u, v in itertools.combinations(clique, 2):
            assert g.has_edge(idx[u], idx[v]), (u, v)
    assert set(clique_a) & set(clique_b) == {"e4,5"}


def test_line_graph_single_bond():
    lg = line_graph(tensor_network_graph(Circuit(1, (Gate.h(0), Gate.h(0)))))
    assert lg.graph.n == 1 and lg.graph.num_edges() == 0


@pytest.mark.parametrize("g, tw", [(complete(4), 3), (path(3), 1), (cycle(5), 2),
                                   (Graph.empty(4), 0), (Graph.empty(0), 0)])
def test_treewidth_exact_examples(g, tw):
    width, td = treewidth_exact(g)
    assert width == tw
    validate_tree_decomposition(g, td)
    assert td.width == tw or g.n == 0


@pytest.mark.parametrize("g, tw", [(complete(4), 3), (Graph.empty(5), 0), (cycle(5), 2)])
def test_minfill_examples(g, tw):
    width, order = treewidth_minfill_ub(g)
    assert width == tw and sorted(order) == list(range(g.n))


def test_treewidth_against_permutation_oracle():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 7)
        g = random_graph(n, rng.random(), rng)
        width, td = treewidth_exact(g)
        validate_tree_decomposition(g, td)
        assert width == elimination_tw_oracle(g)
        assert treewidth_minfill_ub(g)[0] >= width


def test_treewidth_cap():
    with pytest.raises(ResourceCapError):
        treewidth_exact(path(6), max_n=5)


def test_validate_tree_decomposition_rejects_uncovered_edge():
    from sopsim.graph import TreeDecomposition
    td = TreeDecomposition([frozenset({0, 1}), frozenset({2})], [(0, 1)])
    with pytest.raises(ValidationError):
        validate_tree_decomposition(path(3), td)
