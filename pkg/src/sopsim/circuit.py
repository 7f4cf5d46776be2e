"""Circuit IR over {H, T, CZ, Diag} and the line-oriented ``.sqc`` text format.

Format::

    # comment
    qubits 3
    modulus 8          # optional, defaults to 8
    h 0
    cz 0 1
    t 1
    diag 2 0 4         # diag <qubit> <p0> <p1>: |0> -> w^p0, |1> -> w^p1

Qubits are 0-indexed.  Directives must precede gate lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError, ValidationError

DEFAULT_MODULUS = 8

GATE_ARITY = {"h": 1, "t": 1, "cz": 2, "diag": 3}


@dataclass(frozen=True)
class Gate:
    """One gate.  ``kind`` is ``"h"``, ``"t"``, ``"cz"`` or ``"diag"``.

    T gates carry their diagonal exponents (0, r/8) so every diagonal gate
    goes through the same code path; only serialization tells them apart.
    """

    kind: str
    qubits: tuple[int, ...]
    p0: int = 0
    p1: int = 0

    @property
    def is_diagonal(self) -> bool:
        return self.kind in ("t", "diag")

    @classmethod
    def h(cls, q: int) -> Gate:
        return cls("h", (q,))

    @classmethod
    def t(cls, q: int, modulus: int = DEFAULT_MODULUS) -> Gate:
        if modulus % 8:
            raise ValidationError(f"T gate needs modulus divisible by 8, got {modulus}")
        return cls("t", (q,), 0, modulus // 8)

    @classmethod
    def cz(cls, a: int, b: int) -> Gate:
        return cls("cz", (a, b))

    @classmethod
    def diag(cls, q: int, p0: int, p1: int) -> Gate:
        return cls("diag", (q,), p0, p1)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()
    modulus: int = DEFAULT_MODULUS
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        validate_circuit(self)

    def __len__(self) -> int:
        return len(self.gates)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)


def _check_gate(g: Gate, n: int, r: int, lineno: int | None = None) -> None:
    if g.kind not in GATE_ARITY:
        raise ValidationError(f"unknown gate kind {g.kind!r}", lineno)
    want = 2 if g.kind == "cz" else 1
    if len(g.qubits) != want:
        raise ValidationError(f"{g.kind} takes {want} qubit(s)", lineno)
    for q in g.qubits:
        if not 0 <= q < n:
            raise ValidationError(f"qubit {q} out of range for {n} qubits", lineno)
    if g.kind == "cz" and g.qubits[0] == g.qubits[1]:
        raise ValidationError("cz endpoints must be distinct", lineno)
    if g.kind == "t":
        if r % 8:
            raise ValidationError(f"t gate requires modulus divisible by 8, got {r}", lineno)
        if (g.p0, g.p1) != (0, r // 8):
            raise ValidationError("t gate exponents must be (0, r/8)", lineno)
    if g.kind == "diag":
        for p in (g.p0, g.p1):
            if not 0 <= p < r:
                raise ValidationError(f"exponent {p} outside [0, {r})", lineno)


def validate_circuit(c: Circuit) -> None:
    if not isinstance(c.n_qubits, int) or c.n_qubits < 1:
        raise ValidationError(f"qubit count must be positive, got {c.n_qubits}")
    if c.modulus < 2 or c.modulus % 2:
        raise ValidationError(f"modulus must be an even integer >= 2, got {c.modulus}")
    for g in c.gates:
        _check_gate(g, c.n_qubits, c.modulus)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t, 10) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_circuit(text: str, name: str = "") -> Circuit:
    """Parse ``.sqc`` text into a validated :class:`Circuit`."""
    n_qubits = None
    modulus = None
    pending: list[tuple[int, str, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        head = head.lower()
        if head in ("qubits", "modulus"):
            if pending:
                raise ParseError(f"directive {head!r} after gate lines", lineno)
            if len(rest) != 1:
                raise ParseError(f"{head} takes exactly one argument", lineno)
            (value,) = _ints(rest, lineno)
            if head == "qubits":
                if n_qubits is not None:
                    raise ParseError("duplicate qubits directive", lineno)
                if value < 1:
                    raise ValidationError(f"qubit count must be positive, got {value}", lineno)
                n_qubits = value
            else:
                if modulus is not None:
                    raise ParseError("duplicate modulus directive", lineno)
                if value < 2 or value % 2:
                    raise ValidationError(f"modulus must be an even integer >= 2, got {value}", lineno)
                modulus = value
            continue
        if head not in GATE_ARITY:
            raise ParseError(f"unknown gate or directive {head!r}", lineno)
        if len(rest) != GATE_ARITY[head]:
            raise ParseError(f"{head} takes {GATE_ARITY[head]} argument(s), got {len(rest)}", lineno)
        if n_qubits is None:
            raise ParseError("gate before 'qubits' directive", lineno)
        pending.append((lineno, head, _ints(rest, lineno)))

    if n_qubits is None:
        raise ParseError("missing 'qubits' directive")
    r = DEFAULT_MODULUS if modulus is None else modulus
    gates = []
    for lineno, head, args in pending:
        if head == "h":
            g = Gate.h(args[0])
        elif head == "t":
            g = Gate("t", (args[0],), 0, r // 8)
        elif head == "cz":
            g = Gate.cz(args[0], args[1])
        else:
            g = Gate.diag(*args)
        _check_gate(g, n_qubits, r, lineno)
        gates.append(g)
    return Circuit(n_qubits, tuple(gates), r, name=name)


def serialize_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}", f"modulus {c.modulus}"]
    for g in c.gates:
        if g.kind == "diag":
            lines.append(f"diag {g.qubits[0]} {g.p0} {g.p1}")
        else:
            lines.append(" ".join([g.kind, *map(str, g.qubits)]))
    return "\n".join(lines)


def hadamard_depths(c: Circuit) -> list[int]:
    depths = [0] * c.n_qubits
    for g in c.gates:
        if g.kind == "h":
            depths[g.qubits[0]] += 1
    return depths


def parse_bits(bits: str, n: int, what: str = "bit string") -> tuple[int, ...]:
    """Character i of ``bits`` is the value of qubit i."""
    if len(bits) != n or any(ch not in "01" for ch in bits):
        raise ValidationError(f"{what} must be {n} characters of 0/1, got {bits!r}")
    return tuple(int(ch) for ch in bits)


def running_example() -> Circuit:
    """The three-qubit H/CZ/T/H circuit used throughout the docs and tests."""
    gates = [Gate.h(0), Gate.h(1), Gate.h(2), Gate.cz(0, 1), Gate.cz(1, 2),
             Gate.t(1), Gate.h(0), Gate.h(1), Gate.h(2)]
    return Circuit(3, tuple(gates), 8, name="fig1")
