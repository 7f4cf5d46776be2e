"""One-call amplitude evaluation with method dispatch and decomposition policy."""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit
from .dp import (ResidueCounts, amplitude_from_counts, bucket_induced_width, sopcount_bucket,
                 sopcount_fourier, sopcount_rank_dp)
from .errors import UsageError
from .graph import treewidth_minfill_ub
from .oracles import sopcount_brute, statevector_amplitude
from .rankdecomp import (RankDecomposition, caterpillar_from_order, decompose_greedy_bisection,
                         decomposition_width, rankwidth_exact, root_decomposition)
from .sop import SopInstance, extract_sop

METHODS = ("rank-dp", "fourier", "bucket", "brute", "statevector")
DECOMPOSITION_METHODS = ("rank-dp", "fourier")
HEURISTICS = ("auto", "greedy", "caterpillar", "exact")
SCHEMA_VERSION = "1"


@dataclass
class SimulationResult:
    sop: SopInstance
    counts: ResidueCounts | None
    amplitude: complex
    method: str
    width_used: int | None = None
    decomposition: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "r": self.sop.r,
            "c": self.sop.c,
            "hadamards": self.sop.hadamard_count,
            "vars": self.sop.n_vars,
            "edges": len(self.sop.edges),
            "counts": list(self.counts.counts) if self.counts is not None else None,
            "amplitude": {"re": self.amplitude.real, "im": self.amplitude.imag},
            "status": self.sop.status,
            "method": self.method,
            "width_used": self.width_used,
            "decomposition": self.decomposition,
        }


def build_decomposition(s: SopInstance, heuristic: str = "auto") -> tuple[RankDecomposition, str]:
    """Return a decomposition of G_C and the name of the policy that produced it.

    ``auto`` runs greedy bisection and falls back to a caterpillar over the
    breadth-first order whenever that caterpillar is strictly narrower.
    """
    g = s.graph()
    if heuristic == "greedy":
        return decompose_greedy_bisection(g), "greedy-bisection"
    if heuristic == "caterpillar":
        return caterpillar_from_order(g, g.bfs_order()), "caterpillar-bfs"
    if heuristic == "exact":
        return rankwidth_exact(g)[1], "exact"
    if heuristic != "auto":
        raise UsageError(f"unknown decomposition heuristic {heuristic!r}")
    greedy = decompose_greedy_bisection(g)
    cat = caterpillar_from_order(g, g.bfs_order())
    if decomposition_width(g, cat) < decomposition_width(g, greedy):
        return cat, "caterpillar-bfs"
    return greedy, "greedy-bisection"


def simulate(circuit: Circuit, in_bits, out_bits, method: str = "rank-dp",
             decomposition: RankDecomposition | str | None = None) -> SimulationResult:
    """Amplitude <out|circuit|in> by the chosen method.

    ``decomposition`` is a ready :class:`RankDecomposition`, a heuristic name
    from :data:`HEURISTICS`, or None for ``auto``; it applies only to the
    decomposition-based methods.
    """
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if decomposition is not None and method not in DECOMPOSITION_METHODS:
        raise UsageError(f"method {method!r} does not take a decomposition")
    s = extract_sop(circuit, in_bits, out_bits)

    if method == "statevector":
        amp = statevector_amplitude(circuit, in_bits, out_bits)
        return SimulationResult(s, None, amp, method)
    if not s.consistent:
        return SimulationResult(s, None, 0j, method)

    width = None
    source = None
    if method == "brute":
        counts = sopcount_brute(s)
    elif method == "bucket":
        width, order = treewidth_minfill_ub(s.graph())
        counts = sopcount_bucket(s, order)
        width = bucket_induced_width(s, order)
        source = "min-fill"
    else:
        rooted = None
        if s.n_vars:
            if isinstance(decomposition, RankDecomposition):
                d, source = decomposition, "given"
            else:
                d, source = build_decomposition(s, decomposition or "auto")
            width = decomposition_width(s.graph(), d)
            rooted = root_decomposition(d)
        else:
            width = 0
        counts = (sopcount_rank_dp if method == "rank-dp" else sopcount_fourier)(s, rooted)
    amp = amplitude_from_counts(counts, s.hadamard_count, s.status)
    return SimulationResult(s, counts, amp.value, method, width, source)
