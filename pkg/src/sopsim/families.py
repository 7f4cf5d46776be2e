"""Circuit and graph generators: graph realization, tree blow-ups, random circuits."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .circuit import Circuit, Gate
from .graph import Graph
from .rankdecomp import RankDecomposition


def circuit_from_graph(g: Graph, modulus: int = 8) -> Circuit:
    """H on every qubit, one CZ per edge, H on every qubit.

    Pinned 0...0 -> 0...0 the free variables are the middle segments, one per
    qubit, and their interaction graph is ``g`` itself.
    """
    gates = [Gate.h(q) for q in range(g.n)]
    gates += [Gate.cz(u, v) for u, v in g.edges()]
    gates += [Gate.h(q) for q in range(g.n)]
    return Circuit(max(g.n, 1), tuple(gates), modulus)


def complete_binary_tree(h: int) -> Graph:
    """Breadth-first numbering: children of v are 2v+1 and 2v+2."""
    if h < 0:
        raise ValueError("height must be >= 0")
    n = 2 ** (h + 1) - 1
    return Graph.from_edges(n, [((v - 1) // 2, v) for v in range(1, n)])


def blowup(g: Graph, t: int) -> Graph:
    """Replace v by a t-clique on v*t .. v*t+t-1; tree edges become complete bipartite."""
    if t < 1:
        raise ValueError("t must be >= 1")
    edges = []
    for v in range(g.n):
        base = v * t
        edges += [(base + i, base + j) for i in range(t) for j in range(i + 1, t)]
    for u, v in g.edges():
        edges += [(u * t + i, v * t + j) for i in range(t) for j in range(t)]
    return Graph.from_edges(g.n * t, edges)


@dataclass(frozen=True)
class FamilyInstance:
    circuit: Circuit
    witness: RankDecomposition
    graph: Graph
    h: int
    t: int


class _TreeBuilder:
    def __init__(self):
        self.d = RankDecomposition()
        self.counter = 0

    def internal(self, *children: str) -> str:
        node = f"n{self.counter}"
        self.counter += 1
        for ch in children:
            self.d.edges.append((node, ch))
        return node

    def balanced(self, vertices: list[int]) -> str:
        if len(vertices) == 1:
            v = vertices[0]
            self.d.leaves[f"v{v}"] = v
            return f"v{v}"
        mid = len(vertices) // 2
        return self.internal(self.balanced(vertices[:mid]), self.balanced(vertices[mid:]))


def tree_witness(h: int, t: int) -> RankDecomposition:
    """Width-1 decomposition of B_h[K_t].

    For tree vertex v with children l, r the subtree is ((v, T(l)), T(r)):
    every cut then sees v as the only vertex with outside neighbours, so the
    cut matrix has a single distinct nonzero row.  Each tree leaf v is then
    expanded into a balanced tree over its clique; twins have equal rows, so
    the width stays at 1.
    """
    n = 2 ** (h + 1) - 1
    b = _TreeBuilder()

    def clique(v: int) -> str:
        return b.balanced(list(range(v * t, v * t + t)))

    def sub(v: int) -> str:
        kids = [c for c in (2 * v + 1, 2 * v + 2) if c < n]
        node = clique(v)
        for c in kids:
            node = b.internal(node, sub(c))
        return node

    top = sub(0)
    _unroot(b.d, top)
    # Leaves sorted by vertex give a canonical file layout.
    b.d.leaves = dict(sorted(b.d.leaves.items(), key=lambda kv: kv[1]))
    return b.d


def _unroot(d: RankDecomposition, top: str) -> None:
    """Drop the degree-2 root by joining its two children directly."""
    kids = [b for a, b in d.edges if a == top]
    if len(kids) != 2:
        return
    d.edges = [e for e in d.edges if e[0] != top]
    d.edges.append((kids[0], kids[1]))


def separating_family(h: int, t: int) -> FamilyInstance:
    if h < 1 or t < 1:
        raise ValueError("need h >= 1 and t >= 1")
    g = blowup(complete_binary_tree(h), t)
    return FamilyInstance(circuit_from_graph(g), tree_witness(h, t), g, h, t)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_circuit(n_qubits: int, n_gates: int, rng: random.Random, modulus: int = 8,
                   kinds: tuple[str, ...] = ("h", "t", "cz", "diag")) -> Circuit:
    """Uniform over ``kinds``; H gets double weight so segments actually form."""
    if modulus % 8:
        kinds = tuple(k for k in kinds if k != "t")
    if n_qubits < 2:
        kinds = tuple(k for k in kinds if k != "cz")
    weighted = [k for k in kinds for _ in range(2 if k == "h" else 1)]
    gates = []
    for _ in range(n_gates):
        kind = rng.choice(weighted)
        if kind == "h":
            gates.append(Gate.h(rng.randrange(n_qubits)))
        elif kind == "t":
            gates.append(Gate.t(rng.randrange(n_qubits), modulus))
        elif kind == "cz":
            a, b = rng.sample(range(n_qubits), 2)
            gates.append(Gate.cz(a, b))
        else:
            gates.append(Gate.diag(rng.randrange(n_qubits), rng.randrange(modulus), rng.randrange(modulus)))
    return Circuit(n_qubits, tuple(gates), modulus)


def random_bits(n: int, rng: random.Random) -> str:
    return "".join(rng.choice("01") for _ in range(n))
