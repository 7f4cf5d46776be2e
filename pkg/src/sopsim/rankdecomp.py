"""Rank-decompositions: subcubic trees whose leaves biject onto the vertices.

``.rdec`` text format::

    # comment
    leaf <nodeId> <vertexIndex>
    edge <nodeIdA> <nodeIdB>

Node ids are arbitrary whitespace-free tokens.  Internal nodes appear only
in ``edge`` lines.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import ParseError, ResourceCapError, ValidationError
from .graph import Graph, cut_rank, iter_bits, to_mask

RANKWIDTH_EXACT_CAP = int(os.environ.get("SOPSIM_RANKWIDTH_CAP", "8"))


class DecompositionError(ValidationError):
    def __init__(self, message: str, node=None):
        self.node = node
        super().__init__(message)


class NotATree(DecompositionError):
    pass


class DegreeExceeded(DecompositionError):
    pass


class LeafMismatch(DecompositionError):
    pass


@dataclass
class RankDecomposition:
    leaves: dict[str, int] = field(default_factory=dict)
    edges: list[tuple[str, str]] = field(default_factory=list)

    @property
    def nodes(self) -> list[str]:
        seen = dict.fromkeys(self.leaves)
        for a, b in self.edges:
            seen.setdefault(a)
            seen.setdefault(b)
        return list(seen)

    def adjacency(self) -> dict[str, list[str]]:
        nbrs: dict[str, list[str]] = {v: [] for v in self.nodes}
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return nbrs

    def leaf_of_vertex(self) -> dict[int, str]:
        return {v: node for node, v in self.leaves.items()}


def parse_rdec(text: str) -> RankDecomposition:
    d = RankDecomposition()
    vertex_seen: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "leaf" and len(parts) == 3:
            node, token = parts[1], parts[2]
            try:
                v = int(token)
            except ValueError:
                raise ParseError(f"vertex index must be an integer, got {token!r}", lineno) from None
            if v < 0:
                raise ParseError(f"negative vertex index {v}", lineno)
            if node in d.leaves:
                raise ParseError(f"node {node!r} declared as leaf twice", lineno)
            if v in vertex_seen:
                raise ParseError(f"vertex {v} labels both {vertex_seen[v]!r} and {node!r}", lineno)
            vertex_seen[v] = node
            d.leaves[node] = v
        elif parts[0] == "edge" and len(parts) == 3:
            d.edges.append((parts[1], parts[2]))
        else:
            raise ParseError(f"cannot parse {line!r}", lineno)
    return d


def serialize_rdec(d: RankDecomposition) -> str:
    lines = [f"leaf {node} {v}" for node, v in d.leaves.items()]
    lines += [f"edge {a} {b}" for a, b in d.edges]
    return "\n".join(lines) + "\n"


def _check_structure(d: RankDecomposition) -> dict[str, list[str]]:
    nodes = d.nodes
    seen_edges = set()
    for a, b in d.edges:
        if a == b:
            raise NotATree(f"self-loop at node {a!r}", a)
        key = frozenset((a, b))
        if key in seen_edges:
            raise NotATree(f"duplicate edge {a!r}-{b!r}", a)
        seen_edges.add(key)
    nbrs = d.adjacency()
    if nodes:
        start = nodes[0]
        reached = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in reached:
                    reached.add(y)
                    stack.append(y)
        for x in nodes:
            if x not in reached:
                raise NotATree(f"node {x!r} is not connected to {start!r}", x)
        if len(d.edges) != len(nodes) - 1:
            raise NotATree(f"{len(d.edges)} edges on {len(nodes)} nodes contain a cycle", nodes[0])
    for x in nodes:
        if len(nbrs[x]) > 3:
            raise DegreeExceeded(f"node {x!r} has degree {len(nbrs[x])} > 3", x)
    for x in nodes:
        deg = len(nbrs[x])
        if deg <= 1 and x not in d.leaves:
            raise LeafMismatch(f"node {x!r} has degree {deg} but no vertex label", x)
        if deg > 1 and x in d.leaves:
            raise LeafMismatch(f"labelled node {x!r} has degree {deg}", x)
    return nbrs


def validate_decomposition(g: Graph, d: RankDecomposition) -> None:
    """Raise NotATree / DegreeExceeded / LeafMismatch, or return None if valid."""
    _check_structure(d)
    for node, v in d.leaves.items():
        if not 0 <= v < g.n:
            raise LeafMismatch(f"leaf {node!r} names vertex {v}, graph has {g.n}", node)
    labelled = set(d.leaves.values())
    if len(labelled) != len(d.leaves):
        raise LeafMismatch("two leaves name the same vertex")
    for v in range(g.n):
        if v not in labelled:
            raise LeafMismatch(f"no leaf for vertex {v}", v)


def _edge_masks(d: RankDecomposition, nbrs) -> list[int]:
    """For every tree edge, the vertex set on one side of it."""
    nodes = d.nodes
    if not nodes:
        return []
    root = nodes[0]
    parent = {root: None}
    order = [root]
    for x in order:
        for y in nbrs[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    mask = {x: (1 << d.leaves[x]) if x in d.leaves else 0 for x in nodes}
    for x in reversed(order):
        if parent[x] is not None:
            mask[parent[x]] |= mask[x]
    return [mask[x] for x in order if parent[x] is not None]


def edge_widths(g: Graph, d: RankDecomposition) -> list[int]:
    validate_decomposition(g, d)
    return [cut_rank(g, m) for m in _edge_masks(d, d.adjacency())]


def decomposition_width(g: Graph, d: RankDecomposition) -> int:
    return max(edge_widths(g, d), default=0)


# ---------------------------------------------------------------------------
# Rooted form


@dataclass(frozen=True)
class RootedNode:
    id: str
    mask: int
    children: tuple[int, ...] = ()
    vertex: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.vertex is not None


@dataclass(frozen=True)
class RootedDecomposition:
    """Binary tree in post-order (children precede parents; root last)."""

    nodes: tuple[RootedNode, ...]

    @property
    def root(self) -> RootedNode:
        return self.nodes[-1]

    @property
    def vertex_mask(self) -> int:
        return self.root.mask if self.nodes else 0


def _fresh_id(taken, base: str = "root") -> str:
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name


def root_decomposition(d: RankDecomposition) -> RootedDecomposition:
    """Subdivide the lexicographically first edge and root at the new node.

    Degree-2 internal nodes are spliced out so every internal node has
    exactly two children; the vertex sets below each node are unchanged.
    """
    nbrs = _check_structure(d)
    nodes = d.nodes
    if not nodes:
        raise ValidationError("cannot root an empty decomposition")
    if not d.edges:
        (leaf,) = nodes
        v = d.leaves[leaf]
        return RootedDecomposition((RootedNode(leaf, 1 << v, (), v),))

    a, b = min(tuple(sorted(e)) for e in d.edges)
    root_id = _fresh_id(set(nodes))
    nbrs = {x: list(ys) for x, ys in nbrs.items()}
    nbrs[a] = [root_id if y == b else y for y in nbrs[a]]
    nbrs[b] = [root_id if y == a else y for y in nbrs[b]]
    nbrs[root_id] = [a, b]

    out: list[RootedNode] = []

    # Iterative post-order: returns the index of the emitted node for (x, parent).
    result: dict[str, int] = {}
    stack = [(root_id, None, False)]
    while stack:
        x, par, done = stack.pop()
        kids = [y for y in nbrs[x] if y != par]
        if not done:
            stack.append((x, par, True))
            for y in reversed(kids):
                stack.append((y, x, False))
            continue
        if x in d.leaves:
            v = d.leaves[x]
            out.append(RootedNode(x, 1 << v, (), v))
            result[x] = len(out) - 1
        elif len(kids) == 1:
            result[x] = result[kids[0]]
        else:
            idx = tuple(result[y] for y in kids)
            mask = 0
            for i in idx:
                mask |= out[i].mask
            out.append(RootedNode(x, mask, idx))
            result[x] = len(out) - 1
    # Splicing may leave the root as a pass-through for a single emitted node.
    root_index = result[root_id]
    if root_index != len(out) - 1:
        raise AssertionError("post-order emission did not end at the root")
    return RootedDecomposition(tuple(out))


# ---------------------------------------------------------------------------
# Constructions


def caterpillar_from_order(g: Graph, order) -> RankDecomposition:
    order = list(order)
    if sorted(order) != list(range(g.n)):
        raise ValidationError(f"order is not a permutation of 0..{g.n - 1}")
    d = RankDecomposition(leaves={f"v{v}": v for v in order})
    n = len(order)
    if n <= 1:
        return d
    if n == 2:
        d.edges.append((f"v{order[0]}", f"v{order[1]}"))
        return d
    spine = [f"s{i}" for i in range(n - 2)]
    d.edges.append((spine[0], f"v{order[0]}"))
    for i, v in enumerate(order[1:-1]):
        d.edges.append((spine[i], f"v{v}"))
    d.edges.append((spine[-1], f"v{order[-1]}"))
    d.edges.extend(zip(spine, spine[1:]))
    return d


def layout_width(g: Graph, order) -> int:
    """max over proper prefixes of the cut rank."""
    width = 0
    prefix = 0
    for v in list(order)[:-1]:
        prefix |= 1 << v
        width = max(width, cut_rank(g, prefix))
    return width


def _check_cap(g: Graph, max_n: int | None) -> None:
    cap = RANKWIDTH_EXACT_CAP if max_n is None else max_n
    if g.n > cap:
        raise ResourceCapError(f"exact search capped at {cap} vertices, graph has {g.n}")


def linear_rankwidth_exact(g: Graph, max_n: int | None = None) -> int:
    """Minimum layout width, by dynamic programming over prefix sets."""
    _check_cap(g, max_n)
    if g.n <= 1:
        return 0
    full = g.full_mask
    best = {0: 0}
    for size in range(1, g.n + 1):
        for combo in combinations(range(g.n), size):
            s = to_mask(combo)
            here = cut_rank(g, s) if s != full else 0
            best[s] = max(here, min(best[s & ~(1 << v)] for v in combo))
    return best[full]


def rankwidth_exact(g: Graph, max_n: int | None = None) -> tuple[int, RankDecomposition]:
    """Exact rank-width with a witness, searching every rooted binary split tree."""
    _check_cap(g, max_n)
    if g.n == 0:
        return 0, RankDecomposition()
    if g.n == 1:
        return 0, RankDecomposition(leaves={"v0": 0})

    @lru_cache(maxsize=None)
    def rho(s: int) -> int:
        return cut_rank(g, s)

    @lru_cache(maxsize=None)
    def best(s: int) -> tuple[int, int]:
        # (width of best subtree on s including the cut above it, left part)
        if s & (s - 1) == 0:
            return rho(s), 0
        width, part = _best_split(s)
        return max(rho(s), width), part

    def _best_split(s: int) -> tuple[int, int]:
        low = s & -s
        rest = s ^ low
        choice = None
        sub = rest
        # Enumerate parts containing the lowest vertex, excluding s itself.
        while True:
            a = sub | low
            if a != s:
                w = max(best(a)[0], best(s ^ a)[0])
                if choice is None or w < choice[0]:
                    choice = (w, a)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return choice

    width, part = _best_split(g.full_mask)
    d = RankDecomposition(leaves={f"v{v}": v for v in range(g.n)})
    counter = [0]

    def build(s: int) -> str:
        if s & (s - 1) == 0:
            return f"v{s.bit_length() - 1}"
        a = best(s)[1]
        node = f"n{counter[0]}"
        counter[0] += 1
        d.edges.append((node, build(a)))
        d.edges.append((node, build(s ^ a)))
        return node

    left, right = build(part), build(g.full_mask ^ part)
    d.edges.append((left, right))
    return width, d


def _split_score(g: Graph, a: int, b: int) -> tuple[int, int]:
    ra, rb = cut_rank(g, a), cut_rank(g, b)
    return max(ra, rb), ra + rb


def _bisect(g: Graph, verts: list[int], max_passes: int) -> tuple[int, int]:
    half = len(verts) // 2
    a = to_mask(verts[:half])
    b = to_mask(verts[half:])
    score = _split_score(g, a, b)
    for _ in range(max_passes):
        best = None
        for u in sorted(iter_bits(a)):
            for w in sorted(iter_bits(b)):
                a2 = (a & ~(1 << u)) | (1 << w)
                b2 = (b & ~(1 << w)) | (1 << u)
                cand = _split_score(g, a2, b2)
                if cand < score and (best is None or cand < best[0]):
                    best = (cand, a2, b2)
        if best is None:
            break
        score, a, b = best
    return a, b


def decompose_greedy_bisection(g: Graph, max_passes: int = 8) -> RankDecomposition:
    """Recursive balanced bipartition with greedy cut-rank-reducing swaps.

    Halves are seeded from the breadth-first order, and swaps are tried in
    ascending vertex order so the result is deterministic.
    """
    if g.n < 1:
        raise ValidationError("cannot decompose an empty graph")
    bfs = g.bfs_order()
    d = RankDecomposition(leaves={f"v{v}": v for v in range(g.n)})
    counter = [0]

    def ordered(mask: int) -> list[int]:
        return [v for v in bfs if mask >> v & 1]

    def build(mask: int) -> str:
        if mask & (mask - 1) == 0:
            return f"v{mask.bit_length() - 1}"
        a, b = _bisect(g, ordered(mask), max_passes)
        node = f"n{counter[0]}"
        counter[0] += 1
        d.edges.append((node, build(a)))
        d.edges.append((node, build(b)))
        return node

    if g.n == 1:
        return d
    a, b = _bisect(g, bfs, max_passes)
    left, right = build(a), build(b)
    d.edges.append((left, right))
    return d
