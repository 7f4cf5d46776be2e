"""Independent reference helpers shared by the test modules.

Nothing here calls into the package's rank, DP, or enumeration code; these
are the second routes the package results are checked against.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from sopsim.families import random_bits, random_circuit


def rank_gf2_dense(matrix) -> int:
    """Row reduction on a 0/1 numpy matrix."""
    m = np.array(matrix, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if m[i, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for i in range(rows):
            if i != rank and m[i, col]:
                m[i] ^= m[rank]
        rank += 1
    return rank


def dense_adjacency(n, edges):
    a = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        a[u, v] = a[v, u] = 1
    return a


def cut_rank_dense(a, side) -> int:
    side = sorted(side)
    rest = [v for v in range(a.shape[0]) if v not in set(side)]
    if not side or not rest:
        return 0
    return rank_gf2_dense(a[np.ix_(side, rest)])


def brute_counts(r, n, edges, b, c):
    """SopCount by direct enumeration, written without the package helpers."""
    counts = [0] * r
    for x in itertools.product((0, 1), repeat=n):
        f = c + sum(bv for bv, xv in zip(b, x) if xv)
        f += (r // 2) * sum(1 for u, v in edges if x[u] and x[v])
        counts[f % r] += 1
    return counts


def unrooted_binary_trees(n):
    """All unrooted binary trees on leaves 0..n-1 (n >= 2), as edge lists.

    Built by inserting leaf k into every edge of each tree on leaves 0..k-1.
    Internal nodes are named ('i', k).
    """
    if n == 2:
        yield [(("l", 0), ("l", 1))]
        return
    for tree in unrooted_binary_trees(n - 1):
        for idx, (a, b) in enumerate(tree):
            mid = ("i", n)
            new = tree[:idx] + tree[idx + 1:] + [(a, mid), (mid, b), (mid, ("l", n - 1))]
            yield new


def tree_cut_sides(edges):
    """For each tree edge, the leaf labels on one side."""
    nbrs = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    out = []
    for a, b in edges:
        seen = {a, b}
        stack = [b]
        leaves = []
        while stack:
            x = stack.pop()
            if x[0] == "l":
                leaves.append(x[1])
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(leaves)
    return out


@pytest.fixture
def rng():
    return random.Random(20261015)


def random_pinned_circuit(rng, max_qubits=5, max_gates=14, modulus=8):
    n = rng.randint(1, max_qubits)
    c = random_circuit(n, rng.randint(0, max_gates), rng, modulus=modulus)
    return c, random_bits(n, rng), random_bits(n, rng)


def brute_node_table(s, mask):
    """{(signature, residue): count} over all assignments z of the vertices in ``mask``.

    The signature is the set of outside vertices with an odd number of
    neighbours set in z; the residue counts unary terms and edges inside.
    """
    inside = [v for v in range(s.n_vars) if mask >> v & 1]
    table = {}
    for vals in itertools.product((0, 1), repeat=len(inside)):
        on = {v for v, x in zip(inside, vals) if x}
        phi = sum(s.b[v] for v in on)
        sig = 0
        for u, v in s.edges:
            if u in on and v in on:
                phi += s.r // 2
            elif u in on and not mask >> v & 1:
                sig ^= 1 << v
            elif v in on and not mask >> u & 1:
                sig ^= 1 << u
        key = (sig, phi % s.r)
        table[key] = table.get(key, 0) + 1
    return table


def random_sop(rng, n_vars, r=8, p=None):
    from sopsim.sop import SopInstance, VarId
    p = rng.random() if p is None else p
    edges = frozenset((u, v) for u in range(n_vars) for v in range(u + 1, n_vars) if rng.random() < p)
    return SopInstance(r, tuple(VarId(v, 1) for v in range(n_vars)), edges,
                       tuple(rng.randrange(r) for _ in range(n_vars)), rng.randrange(r), n_vars)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
