"""SopCount evaluators over a rooted rank-decomposition, plus bucket elimination.

Signatures are full-length int bitmasks supported on the complement of the
node's vertex set.  Each table keeps one witness assignment per signature
(the bitmask of vertices set to 1), which is all the join needs to evaluate
the cross-term parity between two child states.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import FourierPrecisionError, ResourceCapError, ValidationError
from .graph import iter_bits, popcount
from .rankdecomp import RootedDecomposition
from .sop import SopInstance

BUCKET_SEPARATOR_CAP = int(os.environ.get("SOPSIM_BUCKET_SEPARATOR_CAP", "20"))
FOURIER_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ResidueCounts:
    r: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.r:
            raise ValueError(f"expected {self.r} counts, got {len(self.counts)}")

    def __getitem__(self, j: int) -> int:
        return self.counts[j]

    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_sparse(cls, r: int, sparse: dict[int, int]) -> ResidueCounts:
        out = [0] * r
        for j, n in sparse.items():
            out[j % r] += n
        return cls(r, tuple(out))


@dataclass(frozen=True)
class Amplitude:
    counts: ResidueCounts | None
    hadamard_count: int
    value: complex

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag


def root_of_unity(r: int, k: int) -> complex:
    k %= r
    # Exact values on the axes keep small sums free of 1e-17 dust.
    if 4 * k % r == 0:
        return (1, 1j, -1, -1j)[4 * k // r]
    return cmath.exp(2j * math.pi * k / r)


def amplitude_from_counts(counts: ResidueCounts | None, hadamard_count: int,
                          status: str = "consistent") -> Amplitude:
    if status != "consistent":
        return Amplitude(None, hadamard_count, 0j)
    r = counts.r
    half = r // 2
    total = 0j
    # w^(j + r/2) = -w^j: fold antipodal residues in exact integers first.
    for j in range(half):
        n = counts.counts[j] - counts.counts[j + half]
        if n:
            total += n * root_of_unity(r, j)
    return Amplitude(counts, hadamard_count, total * 2.0 ** (-hadamard_count / 2))


def _require_consistent(s: SopInstance) -> None:
    if not s.consistent:
        raise ValidationError("instance is inconsistent: amplitude is exactly 0, no counts exist")


def _check_decomposition(s: SopInstance, d: RootedDecomposition) -> None:
    expected = (1 << s.n_vars) - 1
    if d.vertex_mask != expected:
        raise ValidationError(
            f"decomposition covers vertex set {d.vertex_mask:#x}, instance has {s.n_vars} variables")


def _adjacency(s: SopInstance) -> list[int]:
    return list(s.graph().adj)


def cross_parity(alpha: int, xr_mask: int, witness_b: int) -> int:
    """Parity of edges between the left assignment and ``witness_b``.

    ``alpha`` is the left child's signature; restricted to the right child's
    vertices it is the row combination a^T A[X_L, X_R], so its inner product
    with any right-hand assignment is the crossing-edge parity.
    """
    return popcount(alpha & xr_mask & witness_b) & 1


# ---------------------------------------------------------------------------
# Residue-count DP


@dataclass
class DpTable:
    node: str
    mask: int
    entries: dict[int, dict[int, int]] = field(default_factory=dict)
    witnesses: dict[int, int] = field(default_factory=dict)

    def add(self, sig: int, residue: int, count: int, witness: int) -> None:
        row = self.entries.get(sig)
        if row is None:
            row = self.entries[sig] = {}
            self.witnesses[sig] = witness
        row[residue] = row.get(residue, 0) + count

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        for sig, row in self.entries.items():
            for res, n in row.items():
                yield (sig, res), n

    def get(self, sig: int, residue: int) -> int:
        return self.entries.get(sig, {}).get(residue, 0)

    @property
    def num_signatures(self) -> int:
        return len(self.entries)

    def total(self) -> int:
        return sum(n for _, n in self.items())


def iter_rank_dp_tables(s: SopInstance, d: RootedDecomposition) -> Iterator[DpTable]:
    """Yield the table of every node in post-order (root last)."""
    _require_consistent(s)
    _check_decomposition(s, d)
    adj = _adjacency(s)
    full = (1 << s.n_vars) - 1
    r, eta = s.r, s.eta
    tables: dict[int, DpTable] = {}
    for idx, node in enumerate(d.nodes):
        t = DpTable(node.id, node.mask)
        if node.is_leaf:
            v = node.vertex
            t.add(0, 0, 1, 0)
            t.add(adj[v], s.b[v] % r, 1, 1 << v)
        else:
            li, ri = node.children
            left, right = tables.pop(li), tables.pop(ri)
            y_mask = full & ~node.mask
            xr_mask = right.mask
            for alpha, lrow in left.entries.items():
                wa = left.witnesses[alpha]
                for beta, rrow in right.entries.items():
                    wb = right.witnesses[beta]
                    gamma = (alpha ^ beta) & y_mask
                    shift = eta * cross_parity(alpha, xr_mask, wb)
                    for p, cp in lrow.items():
                        for q, cq in rrow.items():
                            t.add(gamma, (p + q + shift) % r, cp * cq, wa | wb)
        tables[idx] = t
        yield t


def sopcount_rank_dp(s: SopInstance, d: RootedDecomposition | None) -> ResidueCounts:
    _require_consistent(s)
    if s.n_vars == 0:
        return ResidueCounts.from_sparse(s.r, {s.c: 1})
    if d is None:
        raise ValidationError("a rooted decomposition is required for a nonempty instance")
    root = None
    for root in iter_rank_dp_tables(s, d):
        pass
    row = root.entries.get(0, {})
    return ResidueCounts.from_sparse(s.r, {res + s.c: n for res, n in row.items()})


# ---------------------------------------------------------------------------
# Fourier-mode DP


@dataclass
class _Structure:
    """Mode-independent signature spaces and join maps of one node."""

    sigs: list[int]
    witnesses: list[int]
    # For internal nodes: parallel arrays over child signature pairs.
    left_idx: np.ndarray | None = None
    right_idx: np.ndarray | None = None
    out_idx: np.ndarray | None = None
    chi: np.ndarray | None = None


def _structures(s: SopInstance, d: RootedDecomposition) -> list[_Structure]:
    adj = _adjacency(s)
    full = (1 << s.n_vars) - 1
    out: list[_Structure] = []
    for node in d.nodes:
        if node.is_leaf:
            v = node.vertex
            if adj[v] == 0:
                out.append(_Structure([0], [0]))
            else:
                out.append(_Structure([0, adj[v]], [0, 1 << v]))
            continue
        li, ri = node.children
        left, right = out[li], out[ri]
        y_mask = full & ~node.mask
        xr_mask = d.nodes[ri].mask
        index: dict[int, int] = {}
        sigs, wits = [], []
        li_arr, ri_arr, out_arr, chi_arr = [], [], [], []
        for i, alpha in enumerate(left.sigs):
            for j, beta in enumerate(right.sigs):
                gamma = (alpha ^ beta) & y_mask
                k = index.get(gamma)
                if k is None:
                    k = index[gamma] = len(sigs)
                    sigs.append(gamma)
                    wits.append(left.witnesses[i] | right.witnesses[j])
                li_arr.append(i)
                ri_arr.append(j)
                out_arr.append(k)
                chi_arr.append(cross_parity(alpha, xr_mask, right.witnesses[j]))
        out.append(_Structure(sigs, wits, np.array(li_arr), np.array(ri_arr),
                              np.array(out_arr), np.array(chi_arr)))
    return out


def fourier_root_values(s: SopInstance, d: RootedDecomposition) -> np.ndarray:
    """A_root^(a)[empty] for every mode a, as a length-r complex array."""
    _require_consistent(s)
    _check_decomposition(s, d)
    r = s.r
    modes = np.arange(r)
    structs = _structures(s, d)
    # kernel[chi][a] = (-1)^(a*chi)
    kernel = np.stack([np.ones(r), np.where(modes % 2, -1.0, 1.0)]).astype(complex)
    values: dict[int, np.ndarray] = {}
    for idx, node in enumerate(d.nodes):
        st = structs[idx]
        if node.is_leaf:
            phase = np.array([root_of_unity(r, a * s.b[node.vertex]) for a in modes])
            tab = np.zeros((len(st.sigs), r), dtype=complex)
            tab[0] += 1
            if len(st.sigs) == 2:
                tab[1] += phase
            else:
                tab[0] += phase
        else:
            li, ri = node.children
            lv, rv = values.pop(li), values.pop(ri)
            contrib = lv[st.left_idx] * rv[st.right_idx] * kernel[st.chi]
            tab = np.zeros((len(st.sigs), r), dtype=complex)
            np.add.at(tab, st.out_idx, contrib)
        values[idx] = tab
    root = values[len(d.nodes) - 1]
    return root[0]


def sopcount_fourier(s: SopInstance, d: RootedDecomposition | None,
                     tolerance: float = FOURIER_TOLERANCE) -> ResidueCounts:
    _require_consistent(s)
    if s.n_vars == 0:
        return ResidueCounts.from_sparse(s.r, {s.c: 1})
    if d is None:
        raise ValidationError("a rooted decomposition is required for a nonempty instance")
    r = s.r
    a_root = fourier_root_values(s, d)
    counts = []
    for j in range(r):
        acc = 0j
        for a in range(r):
            acc += root_of_unity(r, a * (s.c - j)) * a_root[a]
        nj = acc / r
        rounded = round(nj.real)
        err = max(abs(nj.real - rounded), abs(nj.imag))
        if err > tolerance:
            raise FourierPrecisionError(
                f"count N_{j} = {nj} is {err:.3g} away from an integer (tolerance {tolerance})")
        counts.append(int(rounded))
    return ResidueCounts(r, tuple(counts))


# ---------------------------------------------------------------------------
# Bucket elimination on the primal graph


def _convolve(x: dict[int, int], y: dict[int, int], r: int, shift: int = 0) -> dict[int, int]:
    out: dict[int, int] = {}
    for p, cp in x.items():
        for q, cq in y.items():
            k = (p + q + shift) % r
            out[k] = out.get(k, 0) + cp * cq
    return out


@dataclass
class _Factor:
    scope: tuple[int, ...]
    # assignment over scope (bit i <-> scope[i]) -> sparse residue counts
    table: dict[int, dict[int, int]]

    def lookup(self, assignment: dict[int, int]) -> dict[int, int]:
        key = 0
        for i, v in enumerate(self.scope):
            if assignment[v]:
                key |= 1 << i
        return self.table[key]


def sopcount_bucket(s: SopInstance, order: Sequence[int] | None = None,
                    separator_cap: int | None = None) -> ResidueCounts:
    """Variable elimination; messages map separator assignments to residue counts."""
    _require_consistent(s)
    n, r, eta = s.n_vars, s.r, s.eta
    cap = BUCKET_SEPARATOR_CAP if separator_cap is None else separator_cap
    if order is None:
        order = list(range(n))
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValidationError("elimination order must permute the instance variables")

    factors: list[_Factor] = []
    for v in range(n):
        factors.append(_Factor((v,), {0: {0: 1}, 1: {s.b[v] % r: 1}}))
    for u, v in s.sorted_edges():
        factors.append(_Factor((u, v), {0: {0: 1}, 1: {0: 1}, 2: {0: 1}, 3: {eta % r: 1}}))

    for v in order:
        bucket = [f for f in factors if v in f.scope]
        factors = [f for f in factors if v not in f.scope]
        sep = sorted({u for f in bucket for u in f.scope if u != v})
        if len(sep) > cap:
            raise ResourceCapError(f"separator of size {len(sep)} exceeds cap {cap}")
        table: dict[int, dict[int, int]] = {}
        for key in range(1 << len(sep)):
            assignment = {u: key >> i & 1 for i, u in enumerate(sep)}
            total: dict[int, int] = {}
            for xv in (0, 1):
                assignment[v] = xv
                acc = {0: 1}
                for f in bucket:
                    acc = _convolve(acc, f.lookup(assignment), r)
                for k, cnt in acc.items():
                    total[k] = total.get(k, 0) + cnt
            table[key] = total
        factors.append(_Factor(tuple(sep), table))

    result = {s.c % r: 1}
    for f in factors:
        result = _convolve(result, f.table[0], r)
    return ResidueCounts.from_sparse(r, result)


def bucket_induced_width(s: SopInstance, order: Sequence[int]) -> int:
    from .graph import elimination_width
    return elimination_width(s.graph(), order)
