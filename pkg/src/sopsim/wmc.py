"""Weighted-model-counting encoding of a quadratic SOP with sign variables.

Variables 1..|V| are the SOP variables; |V|+1..|V|+|E| are sign variables,
one per edge, constrained by s <-> (x_u & x_v) and weighted -1 when true.
The weighted count is sum_x w^(sum_v b_v x_v) (-1)^(sum_E x_u x_v); the
constant phase and the Hadamard normalization stay outside the formula.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .dp import root_of_unity
from .errors import ParseError, ResourceCapError, ValidationError
from .sop import SopInstance

NAIVE_WMC_CAP = int(os.environ.get("SOPSIM_WMC_CAP", "24"))


@dataclass
class WmcFormula:
    num_vars: int
    clauses: list[list[int]]
    weights: dict[int, complex] = field(default_factory=dict)
    var_roles: dict[int, str] = field(default_factory=dict)
    r: int = 8
    c: int = 0
    hadamards: int = 0

    def weight(self, lit: int) -> complex:
        return self.weights.get(lit, 1.0)


def encode_wmc(s: SopInstance) -> WmcFormula:
    if not s.consistent:
        raise ValidationError("instance is inconsistent: nothing to encode, amplitude is 0")
    names = s.var_names()
    n = s.n_vars
    f = WmcFormula(n, [], r=s.r, c=s.c, hadamards=s.hadamard_count)
    for v in range(n):
        f.weights[v + 1] = root_of_unity(s.r, s.b[v])
        f.var_roles[v + 1] = f"x {names[v]}"
    for k, (u, v) in enumerate(s.sorted_edges()):
        sv, xu, xv = n + k + 1, u + 1, v + 1
        f.clauses += [[-sv, xu], [-sv, xv], [sv, -xu, -xv]]
        f.weights[sv] = -1.0
        f.var_roles[sv] = f"s {names[u]} {names[v]}"
    f.num_vars = n + len(s.edges)
    return f


def naive_weighted_count(f: WmcFormula, max_vars: int | None = None) -> complex:
    """Sum over satisfying assignments of the product of literal weights.

    Enumerates all 2^num_vars assignments as bit patterns in one numpy pass.
    """
    cap = NAIVE_WMC_CAP if max_vars is None else max_vars
    if f.num_vars > cap:
        raise ResourceCapError(f"naive counter capped at {cap} variables, formula has {f.num_vars}")
    assignments = np.arange(1 << f.num_vars, dtype=np.int64)
    bit = [None] + [(assignments >> (v - 1)) & 1 for v in range(1, f.num_vars + 1)]
    sat = np.ones(assignments.shape, dtype=bool)
    for clause in f.clauses:
        ok = np.zeros(assignments.shape, dtype=bool)
        for lit in clause:
            if lit == 0 or abs(lit) > f.num_vars:
                raise ValidationError(f"literal {lit} out of range")
            ok |= (bit[lit] == 1) if lit > 0 else (bit[-lit] == 0)
        sat &= ok
    w = np.ones(assignments.shape, dtype=complex)
    for lit, weight in f.weights.items():
        if weight == 1:
            continue
        w = np.where(bit[abs(lit)] == (1 if lit > 0 else 0), w * weight, w)
    return complex(np.sum(w[sat]))


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)


def serialize_qwmc(f: WmcFormula) -> str:
    lines = [
        "c qwmc v1",
        f"c prefactor: amplitude = w_{f.r}^{f.c} * 2^(-{f.hadamards}/2) * WMC",
        f"c r {f.r} c {f.c} hadamards {f.hadamards}",
    ]
    for var in sorted(f.var_roles):
        lines.append(f"c var {var} {f.var_roles[var]}")
    lines.append(f"p qwmc {f.num_vars} {len(f.clauses)} {f.r}")
    for lit in sorted(f.weights, key=lambda x: (abs(x), x < 0)):
        w = complex(f.weights[lit])
        lines.append(f"w {lit} {_fmt(w.real)} {_fmt(w.imag)}")
    for clause in f.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return "\n".join(lines) + "\n"


def parse_qwmc(text: str) -> WmcFormula:
    f = None
    meta = None
    roles: dict[int, str] = {}
    expected_clauses = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "c":
                if len(parts) == 7 and parts[1] == "r":
                    meta = (int(parts[2]), int(parts[4]), int(parts[6]))
                elif len(parts) >= 4 and parts[1] == "var":
                    roles[int(parts[2])] = " ".join(parts[3:])
                continue
            if parts[0] == "p":
                if len(parts) != 5 or parts[1] != "qwmc":
                    raise ParseError("expected 'p qwmc <vars> <clauses> <r>'", lineno)
                f = WmcFormula(int(parts[2]), [], r=int(parts[4]))
                expected_clauses = int(parts[3])
                continue
            if f is None:
                raise ParseError("content before 'p qwmc' header", lineno)
            if parts[0] == "w":
                if len(parts) != 4:
                    raise ParseError("expected 'w <lit> <re> <im>'", lineno)
                f.weights[int(parts[1])] = complex(float(parts[2]), float(parts[3]))
                continue
            lits = [int(x) for x in parts]
        except ValueError:
            raise ParseError(f"cannot parse {raw.strip()!r}", lineno) from None
        if lits[-1] != 0:
            raise ParseError("clause must end with 0", lineno)
        f.clauses.append(lits[:-1])
    if f is None:
        raise ParseError("missing 'p qwmc' header")
    if len(f.clauses) != expected_clauses:
        raise ParseError(f"header announces {expected_clauses} clauses, found {len(f.clauses)}")
    if meta is not None:
        f.r, f.c, f.hadamards = meta
    f.var_roles = roles
    return f


def real_weights_available(f: WmcFormula) -> bool:
    return all(abs(complex(w).imag) < 1e-12 for w in f.weights.values())


def serialize_weighted_dimacs(f: WmcFormula) -> str:
    """Real-weight export in the model-counting-competition style.

    Only defined when every weight is real, i.e. every b_v is 0 or r/2.
    """
    if not real_weights_available(f):
        raise ValidationError("complex literal weights: real-weight export needs every b_v in {0, r/2}")
    lines = [
        f"c prefactor: amplitude = w_{f.r}^{f.c} * 2^(-{f.hadamards}/2) * WMC",
        f"p cnf {f.num_vars} {len(f.clauses)}",
    ]
    for var in range(1, f.num_vars + 1):
        pos = complex(f.weight(var)).real
        neg = complex(f.weight(-var)).real
        lines.append(f"c p weight {var} {_fmt(pos)} 0")
        lines.append(f"c p weight {-var} {_fmt(neg)} 0")
    for clause in f.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return "\n".join(lines) + "\n"
