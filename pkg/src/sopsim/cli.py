"""Command-line entry point: ``sopsim <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 parse, 3 validation, 4 resource cap.
Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .circuit import parse_circuit, serialize_circuit
from .errors import ParseError, SopsimError, UsageError
from .families import circuit_from_graph, separating_family
from .graph import (line_graph, parse_graph, tensor_network_graph, treewidth_exact,
                    treewidth_minfill_ub, TREEWIDTH_EXACT_CAP)
from .rankdecomp import decomposition_width, edge_widths, parse_rdec, serialize_rdec
from .simulate import HEURISTICS, METHODS, SCHEMA_VERSION, build_decomposition, simulate
from .sop import extract_sop, sop_to_dot
from .wmc import encode_wmc, serialize_qwmc, serialize_weighted_dimacs


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not valid UTF-8: {exc}") from None


def _load_circuit(path: str):
    return parse_circuit(_read(path), name=Path(path).stem)


def _pins(args, n: int) -> tuple[str, str]:
    return (args.input if args.input is not None else "0" * n,
            args.output if args.output is not None else "0" * n)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_simulate(args) -> int:
    c = _load_circuit(args.circuit)
    y, z = _pins(args, c.n_qubits)
    decomp = args.decomp
    if decomp is not None and args.method not in ("rank-dp", "fourier"):
        raise UsageError(f"--decomp only applies to rank-dp and fourier, not {args.method}")
    if decomp is not None and decomp not in HEURISTICS:
        decomp = parse_rdec(_read(decomp))
    res = simulate(c, y, z, args.method, decomp)
    if args.json:
        sys.stdout.write(_dump(res.to_dict()))
    else:
        amp = res.amplitude
        print(f"<{z}|{c.name or 'C'}|{y}> = {amp.real:.15g} {amp.imag:+.15g}i")
        print(f"method {res.method}  status {res.sop.status}  vars {res.sop.n_vars}  "
              f"edges {len(res.sop.edges)}  hadamards {res.sop.hadamard_count}")
        if res.counts is not None:
            print(f"counts (c={res.sop.c}): {' '.join(map(str, res.counts.counts))}")
        if res.width_used is not None:
            print(f"width used {res.width_used} ({res.decomposition})")
    return 0


def cmd_extract_sop(args) -> int:
    c = _load_circuit(args.circuit)
    y, z = _pins(args, c.n_qubits)
    s = extract_sop(c, y, z)
    if args.dot:
        _emit(sop_to_dot(s), args.o)
    else:
        _emit(_dump({"schema": SCHEMA_VERSION, **s.to_dict()}), args.o)
    return 0


def cmd_decompose(args) -> int:
    c = _load_circuit(args.circuit)
    y, z = _pins(args, c.n_qubits)
    s = extract_sop(c, y, z)
    if s.n_vars == 0:
        raise UsageError("instance has no free variables; nothing to decompose")
    d, source = build_decomposition(s, args.heuristic)
    width = decomposition_width(s.graph(), d)
    if args.o:
        Path(args.o).write_text(serialize_rdec(d), encoding="utf-8")
    if args.json:
        sys.stdout.write(_dump({"schema": SCHEMA_VERSION, "width": width, "heuristic": source,
                                "vars": s.n_vars, "edges": len(s.edges)}))
    else:
        if not args.o:
            sys.stdout.write(serialize_rdec(d))
        print(f"# width {width} ({source})", file=sys.stderr if not args.o else sys.stdout)
    return 0


def cmd_width(args) -> int:
    c = _load_circuit(args.circuit)
    y, z = _pins(args, c.n_qubits)
    s = extract_sop(c, y, z)
    d = parse_rdec(_read(args.decomp))
    g = s.graph()
    widths = edge_widths(g, d)
    width = max(widths, default=0)
    if args.json:
        sys.stdout.write(_dump({"schema": SCHEMA_VERSION, "width": width, "tree_edges": len(widths),
                                "vars": s.n_vars}))
    else:
        print(f"width {width}")
    return 0


def cmd_gen_family(args) -> int:
    fam = separating_family(args.h, args.t)
    header = f"# separating family h={args.h} t={args.t}\n"
    if args.o:
        Path(f"{args.o}.sqc").write_text(header + serialize_circuit(fam.circuit) + "\n", encoding="utf-8")
        Path(f"{args.o}.rdec").write_text(serialize_rdec(fam.witness), encoding="utf-8")
        width = decomposition_width(fam.graph, fam.witness)
        print(f"wrote {args.o}.sqc ({fam.circuit.n_qubits} qubits, {len(fam.circuit)} gates) "
              f"and {args.o}.rdec (width {width})")
    else:
        sys.stdout.write(header + serialize_circuit(fam.circuit) + "\n")
    return 0


def cmd_gen_graph_circuit(args) -> int:
    g = parse_graph(_read(args.graph))
    _emit(serialize_circuit(circuit_from_graph(g)) + "\n", args.o)
    return 0


def cmd_encode_wmc(args) -> int:
    c = _load_circuit(args.circuit)
    y, z = _pins(args, c.n_qubits)
    f = encode_wmc(extract_sop(c, y, z))
    _emit(serialize_weighted_dimacs(f) if args.dimacs else serialize_qwmc(f), args.o)
    return 0


def _tw_stats(g) -> dict:
    if g.n <= TREEWIDTH_EXACT_CAP:
        return {"treewidth": treewidth_exact(g)[0], "exact": True}
    return {"treewidth": treewidth_minfill_ub(g)[0], "exact": False}


def cmd_tn_stats(args) -> int:
    c = _load_circuit(args.circuit)
    y, z = _pins(args, c.n_qubits)
    tn = tensor_network_graph(c)
    lg = line_graph(tn)
    s = extract_sop(c, y, z)
    gc = s.graph()
    stats = {
        "schema": SCHEMA_VERSION,
        "convention": "line graph over internal bonds only; open boundary legs omitted",
        "tensor_network": {"vertices": tn.graph.n, "bonds": len(tn.bonds), **_tw_stats(tn.graph)},
        "line_graph": {"vertices": lg.graph.n, "edges": lg.graph.num_edges(), **_tw_stats(lg.graph)},
        "sop_graph": {"vertices": gc.n, "edges": gc.num_edges(), **_tw_stats(gc)},
    }
    if args.json:
        sys.stdout.write(_dump(stats))
    else:
        print(stats["convention"])
        for key in ("tensor_network", "line_graph", "sop_graph"):
            part = stats[key]
            size = part.get("bonds", part.get("edges"))
            kind = "tw" if part["exact"] else "tw<="
            print(f"{key:15s} {part['vertices']:5d} vertices {size:6d} edges  {kind} {part['treewidth']}")
    return 0


BENCH_FIELDS = ["h", "t", "qubits", "vars", "edges", "method", "width", "amplitude_re",
                "amplitude_im", "seconds"]


def bench_rows(h_max: int, t_max: int, methods: list[str], brute_limit: int = 16,
               statevector_limit: int = 16):
    for h in range(1, h_max + 1):
        for t in range(1, t_max + 1):
            fam = separating_family(h, t)
            n = fam.circuit.n_qubits
            zeros = "0" * n
            for method in methods:
                if method == "brute" and fam.graph.n > brute_limit:
                    continue
                if method == "statevector" and n > statevector_limit:
                    continue
                decomp = fam.witness if method in ("rank-dp", "fourier") else None
                start = time.perf_counter()
                res = simulate(fam.circuit, zeros, zeros, method, decomp)
                elapsed = time.perf_counter() - start
                yield {
                    "h": h, "t": t, "qubits": n, "vars": res.sop.n_vars, "edges": len(res.sop.edges),
                    "method": method,
                    "width": "" if res.width_used is None else res.width_used,
                    "amplitude_re": f"{res.amplitude.real:.12f}",
                    "amplitude_im": f"{res.amplitude.imag:.12f}",
                    "seconds": f"{elapsed:.6f}",
                }


def cmd_bench(args) -> int:
    methods = args.methods.split(",")
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
    out = open(args.o, "w", newline="", encoding="utf-8") if args.o else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in bench_rows(args.h_max, args.t_max, methods):
            writer.writerow(row)
    finally:
        if args.o:
            out.close()
    return 0


def cmd_regen_corpus(args) -> int:
    from .corpus import regenerate_corpus
    written = regenerate_corpus(Path(args.directory))
    print(f"regenerated {len(written)} files in {args.directory}")
    return 0


def _add_pins(p) -> None:
    p.add_argument("--in", dest="input", help="input bits, character i = qubit i (default all 0)")
    p.add_argument("--out", dest="output", help="output bits (default all 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sopsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="amplitude and residue counts")
    p.add_argument("circuit")
    _add_pins(p)
    p.add_argument("--method", choices=METHODS, default="rank-dp")
    p.add_argument("--decomp", help=f".rdec file or one of {', '.join(HEURISTICS)} (default auto)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract-sop", help="print the pinned SOP instance")
    p.add_argument("circuit")
    _add_pins(p)
    p.add_argument("--dot", action="store_true", help="graph description instead of JSON")
    p.add_argument("-o", help="output file")
    p.set_defaults(func=cmd_extract_sop)

    p = sub.add_parser("decompose", help="build a rank-decomposition of G_C")
    p.add_argument("circuit")
    _add_pins(p)
    p.add_argument("--heuristic", choices=HEURISTICS, default="auto")
    p.add_argument("-o", help="write .rdec here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("width", help="score a .rdec against a circuit's G_C")
    p.add_argument("circuit")
    _add_pins(p)
    p.add_argument("--decomp", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("gen-family", help="blown-up binary tree circuit plus witness decomposition")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-o", help="output prefix; writes PREFIX.sqc and PREFIX.rdec")
    p.set_defaults(func=cmd_gen_family)

    p = sub.add_parser("gen-graph-circuit", help="circuit whose SOP graph is the given .g graph")
    p.add_argument("graph")
    p.add_argument("-o")
    p.set_defaults(func=cmd_gen_graph_circuit)

    p = sub.add_parser("encode-wmc", help="weighted model counting encoding (.qwmc)")
    p.add_argument("circuit")
    _add_pins(p)
    p.add_argument("--dimacs", action="store_true", help="real-weight DIMACS export")
    p.add_argument("-o")
    p.set_defaults(func=cmd_encode_wmc)

    p = sub.add_parser("tn-stats", help="sizes and treewidths of N_C, L(N_C), G_C")
    p.add_argument("circuit")
    _add_pins(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tn_stats)

    p = sub.add_parser("bench", help="CSV of runtime and width over the separating family")
    p.add_argument("--h-max", type=int, default=2)
    p.add_argument("--t-max", type=int, default=2)
    p.add_argument("--methods", default="rank-dp,fourier,bucket,brute,statevector")
    p.add_argument("-o")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("regen-corpus", help="rewrite oracle-derived golden files")
    p.add_argument("directory")
    p.set_defaults(func=cmd_regen_corpus)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing subcommand")
        return args.func(args)
    except SopsimError as exc:
        print(f"sopsim: error: {exc}", file=sys.stderr)
        return exc.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
