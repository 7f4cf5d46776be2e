"""Pinned quadratic sum-of-powers extraction.

The amplitude <z|C|y> equals ``2^(-m_H/2) * sum_x w_r^f(x)`` with

    f(x) = c + sum_v b_v x_v + (r/2) * sum_{uv in E} x_u x_v   (mod r)

over the free segment variables.  A wire with ``k`` Hadamards is cut into
``k + 1`` segments; the first is pinned to the input bit, the last to the
output bit.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, hadamard_depths, parse_bits
from .errors import ValidationError
from .graph import Graph

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class VarId:
    wire: int
    segment: int

    def __str__(self) -> str:
        return f"q{self.wire}s{self.segment}"


@dataclass(frozen=True)
class SopInstance:
    r: int
    vars: tuple[VarId, ...]
    edges: frozenset[tuple[int, int]]
    b: tuple[int, ...]
    c: int
    hadamard_count: int
    status: str = CONSISTENT

    @property
    def eta(self) -> int:
        return self.r // 2

    @property
    def n_vars(self) -> int:
        return len(self.vars)

    @property
    def consistent(self) -> bool:
        return self.status == CONSISTENT

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def graph(self) -> Graph:
        return Graph.from_edges(len(self.vars), self.edges)

    def var_names(self) -> list[str]:
        return [str(v) for v in self.vars]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "eta": self.eta,
            "vars": self.var_names(),
            "edges": [list(e) for e in self.sorted_edges()],
            "b": list(self.b),
            "c": self.c,
            "hadamards": self.hadamard_count,
            "status": self.status,
        }


def _as_bits(bits, n: int, what: str) -> tuple[int, ...]:
    if isinstance(bits, str):
        return parse_bits(bits, n, what)
    bits = tuple(int(b) for b in bits)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ValidationError(f"{what} must have {n} entries of 0/1")
    return bits


def extract_sop(circuit: Circuit, in_bits, out_bits) -> SopInstance:
    """Build the pinned SOP instance for ``<out_bits| circuit |in_bits>``."""
    n = circuit.n_qubits
    r = circuit.modulus
    eta = r // 2
    y = _as_bits(in_bits, n, "input bits")
    z = _as_bits(out_bits, n, "output bits")
    depths = hadamard_depths(circuit)

    # Raw polynomial over segment keys (wire, seg).
    current = [0] * n
    const = 0
    unary: dict[tuple[int, int], int] = defaultdict(int)
    quad: dict[tuple[tuple[int, int], tuple[int, int]], int] = defaultdict(int)
    m_h = 0
    for g in circuit.gates:
        if g.kind == "h":
            q = g.qubits[0]
            s, s2 = (q, current[q]), (q, current[q] + 1)
            quad[(s, s2)] += 1
            current[q] += 1
            m_h += 1
        elif g.kind == "cz":
            a, b = g.qubits
            sa, sb = (a, current[a]), (b, current[b])
            quad[(min(sa, sb), max(sa, sb))] += 1
        else:
            q = g.qubits[0]
            const += g.p0
            unary[(q, current[q])] += g.p1 - g.p0

    pinned: dict[tuple[int, int], int] = {}
    status = CONSISTENT
    for a in range(n):
        pinned[(a, 0)] = y[a]
        last = (a, depths[a])
        if last in pinned and pinned[last] != z[a]:
            status = INCONSISTENT
        pinned[last] = z[a]

    free = [VarId(a, j) for a in range(n) for j in range(1, depths[a])]
    index = {(v.wire, v.segment): i for i, v in enumerate(free)}
    b = [0] * len(free)
    parity: dict[tuple[int, int], int] = defaultdict(int)

    for seg, coeff in unary.items():
        if seg in pinned:
            const += coeff * pinned[seg]
        else:
            b[index[seg]] += coeff
    for (s, t), mult in quad.items():
        ps, pt = s in pinned, t in pinned
        if ps and pt:
            const += eta * mult * pinned[s] * pinned[t]
        elif ps:
            b[index[t]] += eta * mult * pinned[s]
        elif pt:
            b[index[s]] += eta * mult * pinned[t]
        else:
            i, j = sorted((index[s], index[t]))
            parity[(i, j)] ^= mult & 1

    edges = frozenset(e for e, p in parity.items() if p)
    return SopInstance(
        r=r,
        vars=tuple(free),
        edges=edges,
        b=tuple(x % r for x in b),
        c=const % r,
        hadamard_count=m_h,
        status=status,
    )


def evaluate_f(s: SopInstance, x: Sequence[int]) -> int:
    """f(x) mod r, including the constant."""
    if len(x) != len(s.vars):
        raise ValidationError(f"assignment has {len(x)} entries, instance has {len(s.vars)} variables")
    total = s.c
    for bv, xv in zip(s.b, x):
        if xv:
            total += bv
    for u, v in s.edges:
        if x[u] and x[v]:
            total += s.eta
    return total % s.r


def sop_to_dot(s: SopInstance) -> str:
    names = s.var_names()
    lines = [f"graph G_C {{  // r={s.r} c={s.c} hadamards={s.hadamard_count}"]
    if not s.consistent:
        lines.append("  // INCONSISTENT: pinned boundary admits no path; amplitude is 0")
    for name, bv in zip(names, s.b):
        lines.append(f'  {name} [label="{name}\\nb={bv}"];')
    for u, v in s.sorted_edges():
        lines.append(f"  {names[u]} -- {names[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
