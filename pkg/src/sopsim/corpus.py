"""Golden-file corpus: circuits, decompositions, and oracle-stamped expectations.

Layout under the corpus directory::

    circuits/*.sqc          circuit files (running example, identities, random regressions)
    decompositions/*.rdec   decompositions referenced by golden cases
    families/*.sqc|.rdec    separating-family instances with witness decompositions
    golden.json             expected counts and amplitudes, regenerated from the oracles
    structural.json         hand-maintained structural facts; never rewritten here
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .circuit import Circuit, Gate, running_example, serialize_circuit
from .dp import amplitude_from_counts
from .families import random_bits, random_circuit, separating_family
from .oracles import sopcount_brute, statevector_amplitude
from .rankdecomp import caterpillar_from_order, decomposition_width, serialize_rdec
from .sop import extract_sop

RANDOM_SEEDS = tuple(range(8))


def _fmt(x: float) -> str:
    if abs(x) < 5e-16:
        x = 0.0
    return f"{x:.15f}"


def _cases() -> list[tuple[str, Circuit, str, str, str]]:
    """(name, circuit, in_bits, out_bits, provenance)"""
    fig1 = running_example()
    cases = [
        ("fig1", fig1, "000", "000", "running example"),
        ("fig1", fig1, "000", "001", "running example, other output"),
        ("fig1", fig1, "101", "011", "running example, mixed pins"),
        ("identity_empty", Circuit(2, (), 8), "10", "10", "identity"),
        ("identity_hh", Circuit(1, (Gate.h(0), Gate.h(0)), 8), "0", "0", "identity"),
        ("identity_hh", Circuit(1, (Gate.h(0), Gate.h(0)), 8), "1", "1", "identity"),
        ("identity_czcz", Circuit(2, (Gate.h(0), Gate.cz(0, 1), Gate.cz(0, 1), Gate.h(0)), 8),
         "11", "11", "identity"),
    ]
    for seed in RANDOM_SEEDS:
        rng = random.Random(1000 + seed)
        n = rng.randint(2, 4)
        c = random_circuit(n, rng.randint(6, 12), rng)
        cases.append((f"random_{seed:02d}", c, random_bits(n, rng), random_bits(n, rng), "random regression"))
    return cases


def _write(path: Path, text: str, written: list[Path]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if not path.exists() or path.read_text(encoding="utf-8") != text:
        path.write_text(text, encoding="utf-8")
    written.append(path)


def regenerate_corpus(root: Path) -> list[Path]:
    """Rewrite every oracle-derived file under ``root``; returns the paths touched."""
    root = Path(root)
    written: list[Path] = []
    golden = []
    seen = set()
    for name, c, y, z, provenance in _cases():
        rel = f"circuits/{name}.sqc"
        if name not in seen:
            _write(root / rel, serialize_circuit(c) + "\n", written)
            seen.add(name)
        s = extract_sop(c, y, z)
        if s.consistent:
            counts = sopcount_brute(s)
            amp = amplitude_from_counts(counts, s.hadamard_count).value
            counts_out = list(counts.counts)
        else:
            amp, counts_out = 0j, None
        sv = statevector_amplitude(c, y, z)
        if abs(sv - amp) > 1e-9:
            raise AssertionError(f"oracles disagree on {name} {y}->{z}: {amp} vs {sv}")
        golden.append({
            "name": name, "circuit": rel, "in": y, "out": z, "status": s.status,
            "counts": counts_out, "amplitude": {"re": _fmt(amp.real), "im": _fmt(amp.imag)},
            "provenance": provenance,
        })

    fig1_sop = extract_sop(running_example(), "000", "000")
    path_dec = caterpillar_from_order(fig1_sop.graph(), [0, 1, 2])
    _write(root / "decompositions/fig1_path.rdec", serialize_rdec(path_dec), written)

    fam = separating_family(2, 2)
    _write(root / "families/family_2_2.sqc", serialize_circuit(fam.circuit) + "\n", written)
    _write(root / "families/family_2_2.rdec", serialize_rdec(fam.witness), written)
    s = extract_sop(fam.circuit, "0" * fam.circuit.n_qubits, "0" * fam.circuit.n_qubits)
    counts = sopcount_brute(s)
    amp = amplitude_from_counts(counts, s.hadamard_count).value
    golden.append({
        "name": "family_2_2", "circuit": "families/family_2_2.sqc",
        "decomposition": "families/family_2_2.rdec",
        "in": "0" * fam.circuit.n_qubits, "out": "0" * fam.circuit.n_qubits, "status": s.status,
        "counts": list(counts.counts), "amplitude": {"re": _fmt(amp.real), "im": _fmt(amp.imag)},
        "witness_width": decomposition_width(fam.graph, fam.witness),
        "provenance": "separating family h=2 t=2",
    })
    _write(root / "golden.json", json.dumps({"schema": "1", "cases": golden}, indent=2) + "\n", written)
    return written
