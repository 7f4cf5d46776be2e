import itertools
import random

import pytest

from sopsim.errors import ParseError, ResourceCapError
from sopsim.families import complete_binary_tree, random_graph
from sopsim.graph import Graph
from sopsim.rankdecomp import (DegreeExceeded, LeafMismatch, NotATree, RankDecomposition,
                               caterpillar_from_order, decompose_greedy_bisection,
                               decomposition_width, edge_widths, layout_width,
                               linear_rankwidth_exact, parse_rdec, rankwidth_exact,
                               root_decomposition, serialize_rdec, validate_decomposition)
from sopsim.sop import extract_sop
from sopsim.circuit import running_example

from conftest import cut_rank_dense, dense_adjacency, tree_cut_sides, unrooted_binary_trees

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
STAR_P3 = "leaf a 0\nleaf b 1\nleaf c 2\nedge m a\nedge m b\nedge m c\n"


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def rankwidth_oracle(g):
    """Minimum over every unrooted binary tree topology of the max cut rank."""
    if g.n <= 1:
        return 0
    a = dense_adjacency(g.n, g.edges())
    return min(max(cut_rank_dense(a, side) for side in tree_cut_sides(tree))
               for tree in unrooted_binary_trees(g.n))


def linear_rankwidth_oracle(g):
    a = dense_adjacency(g.n, g.edges())
    return min(max([cut_rank_dense(a, order[:i]) for i in range(1, g.n)], default=0)
               for order in itertools.permutations(range(g.n)))


def test_parse_star():
    d = parse_rdec(STAR_P3)
    assert len(d.nodes) == 4
    validate_decomposition(P3, d)
    assert serialize_rdec(d) == STAR_P3


def test_parse_rejects_duplicate_vertex():
    with pytest.raises(ParseError):
        parse_rdec("leaf a 0\nleaf b 0\nedge a b\n")
    with pytest.raises(ParseError):
        parse_rdec("leaf a 0\nbranch a b\n")


def test_validate_errors():
    deg4 = parse_rdec("leaf a 0\nleaf b 1\nleaf c 2\nleaf d 3\n"
                      "edge m a\nedge m b\nedge m c\nedge m d\n")
    with pytest.raises(DegreeExceeded) as exc:
        validate_decomposition(Graph.empty(4), deg4)
    assert exc.value.node == "m"
    missing = parse_rdec("leaf a 0\nleaf b 1\nedge a b\n")
    with pytest.raises(LeafMismatch):
        validate_decomposition(P3, missing)
    cyc = RankDecomposition({"a": 0, "b": 1, "c": 2},
                            [("m", "a"), ("m", "b"), ("n", "c"), ("m", "n"), ("n", "m")])
    with pytest.raises(NotATree):
        validate_decomposition(P3, cyc)
    disconnected = RankDecomposition({"a": 0, "b": 1, "c": 2}, [("a", "b")])
    with pytest.raises(NotATree):
        validate_decomposition(P3, disconnected)


def test_caterpillar_examples():
    d = caterpillar_from_order(P3, [0, 1, 2])
    validate_decomposition(P3, d)
    assert decomposition_width(P3, d) == 1
    single = caterpillar_from_order(Graph.empty(1), [0])
    assert single.nodes == ["v0"] and decomposition_width(Graph.empty(1), single) == 0
    k3 = complete(3)
    for order in itertools.permutations(range(3)):
        assert decomposition_width(k3, caterpillar_from_order(k3, order)) == 1


def test_width_examples():
    assert decomposition_width(Graph.empty(4), caterpillar_from_order(Graph.empty(4), range(4))) == 0
    k4 = complete(4)
    assert decomposition_width(k4, parse_rdec("leaf a 0\nleaf b 1\nleaf c 2\nleaf d 3\n"
                                              "edge m a\nedge m b\nedge n c\nedge n d\nedge m n\n")) == 1


def test_caterpillar_width_is_layout_width():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 8)
        g = random_graph(n, rng.random(), rng)
        order = list(range(n))
        rng.shuffle(order)
        assert decomposition_width(g, caterpillar_from_order(g, order)) == layout_width(g, order)


def test_root_two_leaves_and_single():
    rd = root_decomposition(parse_rdec("leaf a 0\nleaf b 1\nedge a b\n"))
    assert len(rd.root.children) == 2
    assert all(rd.nodes[i].is_leaf for i in rd.root.children)
    one = root_decomposition(RankDecomposition({"x": 0}, []))
    assert one.root.is_leaf and one.root.mask == 1


def test_root_running_example_path():
    s = extract_sop(running_example(), "000", "000")
    rd = root_decomposition(caterpillar_from_order(s.graph(), [0, 1, 2]))
    assert rd.root.mask == 0b111
    for node in rd.nodes:
        if not node.is_leaf:
            l, r = (rd.nodes[i] for i in node.children)
            assert l.mask & r.mask == 0 and l.mask | r.mask == node.mask


def test_root_avoids_existing_root_name():
    d = parse_rdec("leaf root 0\nleaf b 1\nedge root b\n")
    rd = root_decomposition(d)
    assert rd.root.id == "root_1"


@pytest.mark.parametrize("g, lrw", [(complete_binary_tree(2), 1), (path(4), 1), (Graph.empty(5), 0)])
def test_linear_rankwidth_examples(g, lrw):
    assert linear_rankwidth_exact(g) == lrw


@pytest.mark.parametrize("g, rw", [(path(3), 1), (complete_binary_tree(2), 1), (Graph.empty(4), 0)])
def test_rankwidth_examples(g, rw):
    width, d = rankwidth_exact(g)
    assert width == rw
    validate_decomposition(g, d)
    assert decomposition_width(g, d) == rw


def test_exact_widths_against_enumeration():
    rng = random.Random(17)
    for _ in range(25):
        n = rng.randint(1, 7)
        g = random_graph(n, rng.random(), rng)
        rw, d = rankwidth_exact(g)
        validate_decomposition(g, d)
        assert decomposition_width(g, d) == rw == rankwidth_oracle(g)
        assert linear_rankwidth_exact(g) == linear_rankwidth_oracle(g)


def test_cycle_rankwidth_two():
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert rankwidth_exact(c6)[0] == rankwidth_oracle(c6) == 2


def test_exact_caps():
    with pytest.raises(ResourceCapError):
        rankwidth_exact(path(5), max_n=4)
    with pytest.raises(ResourceCapError):
        linear_rankwidth_exact(path(5), max_n=4)


def test_greedy_examples():
    k4 = complete(4)
    assert decomposition_width(k4, decompose_greedy_bisection(k4)) == 1
    b2 = complete_binary_tree(2)
    w = decomposition_width(b2, decompose_greedy_bisection(b2))
    assert 1 <= w <= 2
    p8 = path(8)
    d = decompose_greedy_bisection(p8)
    validate_decomposition(p8, d)
    assert decomposition_width(p8, d) >= 1


def test_greedy_is_valid_and_deterministic():
    rng = random.Random(23)
    for _ in range(40):
        n = rng.randint(1, 14)
        g = random_graph(n, rng.random(), rng)
        d = decompose_greedy_bisection(g)
        validate_decomposition(g, d)
        assert serialize_rdec(d) == serialize_rdec(decompose_greedy_bisection(g))
        if n <= 7:
            assert decomposition_width(g, d) >= rankwidth_exact(g)[0]


def test_edge_widths_length():
    d = caterpillar_from_order(path(5), range(5))
    assert len(edge_widths(path(5), d)) == len(d.edges)
