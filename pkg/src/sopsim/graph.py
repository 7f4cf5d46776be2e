"""Simple graphs as int bitset rows, GF(2) rank, tensor-network views, treewidth.

Vertex subsets are passed around as int bitmasks (bit v set means v is in
the set); helpers accept any iterable of vertices as well.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ParseError, ResourceCapError, ValidationError

TREEWIDTH_EXACT_CAP = int(os.environ.get("SOPSIM_TREEWIDTH_CAP", "16"))


def to_mask(vertices) -> int:
    if isinstance(vertices, int):
        return vertices
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValidationError("adjacency row count does not match n")
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise ValidationError(f"self-loop at vertex {v}")
            if row >> self.n:
                raise ValidationError(f"row {v} references a vertex >= {self.n}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValidationError(f"adjacency not symmetric at ({v}, {u})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) out of range for {n} vertices")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def bfs_order(self) -> list[int]:
        """Breadth-first order, restarting from the lowest unvisited vertex."""
        seen = 0
        order = []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            seen |= 1 << start
            queue = [start]
            while queue:
                order.extend(queue)
                nxt = []
                for v in queue:
                    for u in iter_bits(self.adj[v] & ~seen):
                        seen |= 1 << u
                        nxt.append(u)
                queue = nxt
        return order


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of a matrix given as int bit rows."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
    return len(basis)


def cut_rank(g: Graph, s) -> int:
    mask = to_mask(s)
    outside = g.full_mask & ~mask
    return gf2_rank([g.adj[v] & outside for v in iter_bits(mask)])


# ---------------------------------------------------------------------------
# .g file format


def parse_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            args = [int(t) for t in rest]
        except ValueError:
            raise ParseError(f"expected integers in {line!r}", lineno) from None
        if head == "vertices" and len(args) == 1:
            if n is not None:
                raise ParseError("duplicate vertices directive", lineno)
            n = args[0]
        elif head == "edge" and len(args) == 2:
            if n is None:
                raise ParseError("edge before vertices directive", lineno)
            u, v = args
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValidationError(f"bad edge ({u}, {v})", lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"cannot parse {line!r}", lineno)
    if n is None:
        raise ParseError("missing vertices directive")
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph) -> str:
    return "\n".join([f"vertices {g.n}"] + [f"edge {u} {v}" for u, v in g.edges()]) + "\n"


# ---------------------------------------------------------------------------
# Tensor-network graph and its line graph


@dataclass(frozen=True)
class Bond:
    """Internal wire segment between gates ``a`` and ``b`` (0-based, a < b) on ``wire``."""

    a: int
    b: int
    wire: int

    @property
    def label(self) -> str:
        # 1-based gate positions, e.g. e_{4,5}
        return f"e{self.a + 1},{self.b + 1}"


@dataclass(frozen=True)
class TensorNetwork:
    graph: Graph
    bonds: tuple[Bond, ...]


def tensor_network_graph(circuit) -> TensorNetwork:
    """One vertex per gate, one bond per wire segment joining two gates.

    Open input/output legs are not bonds.  Parallel bonds stay distinct in
    ``bonds`` but collapse to a single edge of ``graph``.
    """
    last: dict[int, int] = {}
    bonds = []
    for i, g in enumerate(circuit.gates):
        for q in g.qubits:
            if q in last:
                bonds.append(Bond(last[q], i, q))
            last[q] = i
    graph = Graph.from_edges(len(circuit.gates), [(bd.a, bd.b) for bd in bonds])
    return TensorNetwork(graph, tuple(bonds))


@dataclass(frozen=True)
class LabeledGraph:
    graph: Graph
    labels: tuple[str, ...]


def line_graph(tn: TensorNetwork) -> LabeledGraph:
    by_gate: dict[int, list[int]] = {}
    for i, bd in enumerate(tn.bonds):
        by_gate.setdefault(bd.a, []).append(i)
        by_gate.setdefault(bd.b, []).append(i)
    edges = set()
    for members in by_gate.values():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                edges.add((members[x], members[y]))
    g = Graph.from_edges(len(tn.bonds), edges)
    return LabeledGraph(g, tuple(bd.label for bd in tn.bonds))


# ---------------------------------------------------------------------------
# Treewidth


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> None:
    """Raise ValidationError unless ``td`` is a tree decomposition of ``g``."""
    k = len(td.bags)
    if g.n == 0:
        return
    if len(td.edges) != k - 1:
        raise ValidationError("decomposition is not a tree (edge count)")
    nbrs = [[] for _ in range(k)]
    for a, b in td.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    if _components(range(k), nbrs) != 1:
        raise ValidationError("decomposition is not a tree (disconnected)")
    covered = set().union(*td.bags)
    if covered != set(range(g.n)):
        raise ValidationError("not every vertex appears in a bag")
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            raise ValidationError(f"edge ({u}, {v}) not covered")
    for v in range(g.n):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        sub = {i: [j for j in nbrs[i] if v in td.bags[j]] for i in holding}
        if _components(holding, sub) != 1:
            raise ValidationError(f"bags containing vertex {v} are not connected")


def _components(nodes, nbrs) -> int:
    nodes = list(nodes)
    seen = set()
    count = 0
    for start in nodes:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def elimination_width(g: Graph, order: Sequence[int]) -> int:
    """Induced width of eliminating ``order``: max degree at elimination time."""
    adj = list(g.adj)
    width = 0
    for v in order:
        nb = adj[v]
        width = max(width, popcount(nb))
        for u in iter_bits(nb):
            adj[u] = (adj[u] | nb) & ~(1 << u) & ~(1 << v)
        adj[v] = 0
    return width


def decomposition_from_order(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by an elimination order."""
    pos = {v: i for i, v in enumerate(order)}
    adj = list(g.adj)
    bags = []
    higher = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset([v, *iter_bits(nb)]))
        higher.append(nb)
        for u in iter_bits(nb):
            adj[u] = (adj[u] | nb) & ~(1 << u) & ~(1 << v)
        adj[v] = 0
    edges = []
    roots = []
    for i, nb in enumerate(higher):
        if nb:
            parent = min(pos[u] for u in iter_bits(nb))
            edges.append((i, parent))
        else:
            roots.append(i)
    # Chain the components together; they share no vertices.
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(bags, edges)


def treewidth_minfill_ub(g: Graph) -> tuple[int, list[int]]:
    """Min-fill heuristic; ties go to the lowest vertex index."""
    adj = list(g.adj)
    alive = g.full_mask
    order = []
    width = 0
    while alive:
        best = None
        best_fill = None
        for v in iter_bits(alive):
            nb = adj[v]
            fill = 0
            for u in iter_bits(nb):
                fill += popcount(nb & ~adj[u] & ~(1 << u))
            fill //= 2
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        nb = adj[best]
        width = max(width, popcount(nb))
        for u in iter_bits(nb):
            adj[u] = (adj[u] | nb) & ~(1 << u) & ~(1 << best)
        adj[best] = 0
        alive &= ~(1 << best)
        order.append(best)
    return width, order


def _q_size(adj: Sequence[int], s: int, v: int) -> int:
    """|Q(S, v)|: vertices outside S+v reachable from v through S."""
    comp = 1 << v
    frontier = comp
    while frontier:
        reach = 0
        for u in iter_bits(frontier):
            reach |= adj[u]
        frontier = reach & s & ~comp
        comp |= frontier
    reach = 0
    for u in iter_bits(comp):
        reach |= adj[u]
    return popcount(reach & ~s & ~(1 << v))


def treewidth_exact(g: Graph, max_n: int | None = None) -> tuple[int, TreeDecomposition]:
    """Exact treewidth by dynamic programming over eliminated vertex sets.

    TW(S + v) = min over v of max(TW(S), |Q(S, v)|), pruned by the min-fill
    upper bound.  Returns the width and a decomposition realizing it.
    """
    cap = TREEWIDTH_EXACT_CAP if max_n is None else max_n
    if g.n > cap:
        raise ResourceCapError(f"exact treewidth capped at {cap} vertices, graph has {g.n}")
    if g.n == 0:
        return 0, TreeDecomposition()
    ub, ub_order = treewidth_minfill_ub(g)
    full = g.full_mask
    layer: dict[int, tuple[int, int, int]] = {0: (-1, 0, -1)}  # S -> (tw, parent S, v)
    history = [layer]
    for _ in range(g.n):
        nxt: dict[int, tuple[int, int, int]] = {}
        for s, (tw, _, _) in layer.items():
            for v in iter_bits(full & ~s):
                r = max(tw, _q_size(g.adj, s, v))
                if r >= ub:
                    continue
                s2 = s | (1 << v)
                cur = nxt.get(s2)
                if cur is None or r < cur[0]:
                    nxt[s2] = (r, s, v)
        if not nxt:
            break
        history.append(nxt)
        layer = nxt
    if full in history[-1] and len(history) == g.n + 1:
        order = []
        s = full
        for level in range(g.n, 0, -1):
            _, parent, v = history[level][s]
            order.append(v)
            s = parent
        order.reverse()
        width = history[-1][full][0]
    else:
        order, width = ub_order, ub
    td = decomposition_from_order(g, order)
    assert td.width == width, (td.width, width)
    return width, td
