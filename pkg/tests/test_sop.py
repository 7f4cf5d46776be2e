import itertools

import pytest

from sopsim.circuit import Circuit, Gate, running_example
from sopsim.errors import ValidationError
from sopsim.sop import INCONSISTENT, VarId, evaluate_f, extract_sop, sop_to_dot

from conftest import random_pinned_circuit


@pytest.fixture
def fig4():
    return extract_sop(running_example(), "000", "000")


def test_running_example_instance(fig4):
    assert fig4.var_names() == ["q0s1", "q1s1", "q2s1"]
    assert fig4.sorted_edges() == [(0, 1), (1, 2)]
    assert fig4.b == (0, 1, 0)
    assert fig4.c == 0 and fig4.hadamard_count == 6 and fig4.consistent
    assert fig4.eta == 4


def test_mismatched_pins_are_inconsistent():
    s = extract_sop(Circuit(1), "0", "1")
    assert s.n_vars == 0 and s.status == INCONSISTENT


def test_hh_identity_instance():
    s = extract_sop(Circuit(1, (Gate.h(0), Gate.h(0))), "0", "0")
    assert s.vars == (VarId(0, 1),)
    assert not s.edges and s.b == (0,) and s.c == 0 and s.hadamard_count == 2


def test_pinned_one_moves_quadratic_terms_into_linear():
    # H on a wire pinned to 1 turns the x_in*x_1 term into a unary eta on x_1
    s = extract_sop(Circuit(1, (Gate.h(0), Gate.h(0))), "1", "0")
    assert s.b == (4,) and not s.edges


def test_cz_twice_cancels():
    c = Circuit(2, (Gate.h(0), Gate.h(1), Gate.cz(0, 1), Gate.cz(0, 1), Gate.h(0), Gate.h(1)))
    s = extract_sop(c, "00", "00")
    assert s.n_vars == 2 and not s.edges


def test_evaluate_f(fig4):
    assert evaluate_f(fig4, (0, 1, 0)) == 1
    assert evaluate_f(fig4, (1, 1, 0)) == 5
    assert evaluate_f(fig4, (0, 0, 0)) == fig4.c


def test_bad_pins():
    with pytest.raises(ValidationError):
        extract_sop(running_example(), "00", "000")
    with pytest.raises(ValidationError):
        extract_sop(running_example(), "0a0", "000")


def test_dot_rendering(fig4):
    dot = sop_to_dot(fig4)
    assert dot.count(" -- ") == 2
    assert 'q1s1 [label="q1s1\\nb=1"]' in dot
    edgeless = extract_sop(Circuit(1, (Gate.h(0), Gate.h(0))), "0", "0")
    assert " -- " not in sop_to_dot(edgeless)
    assert "INCONSISTENT" in sop_to_dot(extract_sop(Circuit(1), "0", "1"))


def _path_sum(circuit, y, z):
    """Sum over all segment assignments of the raw (unpinned-then-checked) path phase.

    Variables are every segment of every wire; assignments that disagree with
    the pins are skipped.  This uses only the gate semantics, not the package's
    folding rules.
    """
    n, r = circuit.n_qubits, circuit.modulus
    segs = [(a, j) for a in range(n) for j in range(sum(1 for g in circuit.gates
                                                        if g.kind == "h" and g.qubits[0] == a) + 1)]
    counts = [0] * r
    for vals in itertools.product((0, 1), repeat=len(segs)):
        x = dict(zip(segs, vals))
        last = {a: max(j for (b, j) in segs if b == a) for a in range(n)}
        if any(x[(a, 0)] != int(y[a]) or x[(a, last[a])] != int(z[a]) for a in range(n)):
            continue
        cur = [0] * n
        phase = 0
        for g in circuit.gates:
            if g.kind == "h":
                a = g.qubits[0]
                phase += (r // 2) * x[(a, cur[a])] * x[(a, cur[a] + 1)]
                cur[a] += 1
            elif g.kind == "cz":
                a, b = g.qubits
                phase += (r // 2) * x[(a, cur[a])] * x[(b, cur[b])]
            else:
                a = g.qubits[0]
                phase += g.p1 if x[(a, cur[a])] else g.p0
        counts[phase % r] += 1
    return counts


def test_extraction_matches_unfolded_path_sum(rng):
    for _ in range(60):
        c, y, z = random_pinned_circuit(rng, max_qubits=3, max_gates=8)
        s = extract_sop(c, y, z)
        expected = _path_sum(c, y, z)
        if not s.consistent:
            assert sum(expected) == 0
            continue
        got = [0] * s.r
        for x in itertools.product((0, 1), repeat=s.n_vars):
            got[evaluate_f(s, x)] += 1
        assert got == expected
