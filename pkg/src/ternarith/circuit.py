"""Gate catalog, circuit container, register maps and the non-Clifford cost metric."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

# name -> arity (None for variadic)
ARITY: dict[str, int | None] = {
    "X": 1, "S01": 1, "S02": 1, "S12": 1, "H": 1, "Q": 1, "Z": 1, "P9": 1,
    "SUM": 2, "SWAP": 2, "CZ": 2, "CX": 2, "CPX": 2, "CS01": 2, "SWAP2": 2, "C2Z": 2,
    "CSUM": 3, "HORNER": 3, "CZ2": 3,
    "BARRIER": None,
}

SELF_INVERSE = frozenset({"S01", "S02", "S12", "SWAP", "CS01", "SWAP2", "BARRIER"})
CONTROLLED = frozenset({"CX", "CSUM", "CS01", "C2Z"})
CLIFFORD = frozenset({"X", "S01", "S02", "S12", "H", "Q", "Z", "SUM", "SWAP", "CZ", "BARRIER"})
# gates that act as permutations of the computational basis
CLASSICAL = frozenset({
    "X", "S01", "S02", "S12", "SUM", "SWAP", "CX", "CPX", "CSUM", "CS01", "HORNER", "SWAP2", "BARRIER",
})
DIAGONAL = frozenset({"Q", "Z", "P9", "CZ", "CZ2", "C2Z", "BARRIER"})


class CircuitError(ValueError):
    """Raised for malformed gates, circuits or wire assignments."""


@dataclass(frozen=True)
class Gate:
    """A gate kind: base name, inverse flag, hard-control value, and SWAP2 labels."""

    name: str
    inv: bool = False
    ctrl: int | None = None
    labels: tuple[tuple[int, int], tuple[int, int]] | None = None

    def __post_init__(self):
        if self.name not in ARITY:
            raise CircuitError(f"unknown gate {self.name!r}")
        if self.inv and self.name in SELF_INVERSE:
            object.__setattr__(self, "inv", False)
        if self.name in CONTROLLED:
            if self.ctrl not in (0, 1, 2):
                raise CircuitError(f"{self.name} needs a control value in {{0,1,2}}, got {self.ctrl!r}")
        elif self.ctrl is not None:
            raise CircuitError(f"{self.name} takes no control value")
        if self.name == "SWAP2":
            labels = self.labels if self.labels is not None else ((0, 0), (2, 2))
            s, t = (tuple(int(v) for v in lab) for lab in labels)
            if len(s) != 2 or len(t) != 2 or s == t or not all(v in (0, 1, 2) for v in s + t):
                raise CircuitError(f"SWAP2 needs two distinct 2-trit labels, got {labels!r}")
            object.__setattr__(self, "labels", (s, t))
        elif self.labels is not None:
            raise CircuitError(f"{self.name} takes no labels")

    @property
    def arity(self) -> int | None:
        return ARITY[self.name]

    @property
    def is_clifford(self) -> bool:
        return self.name in CLIFFORD

    @property
    def is_classical(self) -> bool:
        return self.name in CLASSICAL

    @property
    def is_diagonal(self) -> bool:
        return self.name in DIAGONAL

    def inverse(self) -> "Gate":
        if self.name in SELF_INVERSE:
            return self
        return Gate(self.name, not self.inv, self.ctrl, self.labels)

    @property
    def token(self) -> str:
        tok = self.name + ("INV" if self.inv else "")
        if self.ctrl is not None:
            tok += f"[{self.ctrl}]"
        return tok

    def __str__(self) -> str:
        if self.name == "SWAP2":
            (a, b), (c, d) = self.labels
            return f"SWAP2({a}{b},{c}{d})"
        return self.token


def is_clifford(kind: Gate) -> bool:
    return kind.is_clifford


# Ready-made kinds.
X, X_INV = Gate("X"), Gate("X", True)
S01, S02, S12 = Gate("S01"), Gate("S02"), Gate("S12")
H, H_INV = Gate("H"), Gate("H", True)
Q, Q_INV = Gate("Q"), Gate("Q", True)
Z, Z_INV = Gate("Z"), Gate("Z", True)
P9, P9_INV = Gate("P9"), Gate("P9", True)
SUM, SUM_INV = Gate("SUM"), Gate("SUM", True)
SWAP = Gate("SWAP")
CZ, CZ_INV = Gate("CZ"), Gate("CZ", True)
CPX, CPX_INV = Gate("CPX"), Gate("CPX", True)
HORNER, HORNER_INV = Gate("HORNER"), Gate("HORNER", True)
CZ2, CZ2_INV = Gate("CZ2"), Gate("CZ2", True)
BARRIER = Gate("BARRIER")


def cx(c: int, inv: bool = False) -> Gate:
    return Gate("CX", inv, c)


def csum(c: int, inv: bool = False) -> Gate:
    return Gate("CSUM", inv, c)


def cs01(c: int) -> Gate:
    return Gate("CS01", False, c)


def c2z(c: int, inv: bool = False) -> Gate:
    return Gate("C2Z", inv, c)


def swap2(s: str | Sequence[int] = "00", t: str | Sequence[int] = "22") -> Gate:
    return Gate("SWAP2", labels=(tuple(int(v) for v in s), tuple(int(v) for v in t)))


SWAP2 = swap2()


@dataclass(frozen=True)
class Op:
    """A gate applied to concrete wires (controls first, target last)."""

    gate: Gate
    wires: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.gate}{self.wires}"


@dataclass(frozen=True)
class RegisterMap:
    """Named roles over wires.

    ``init`` fixes the input value of a role (every trit set to that value);
    ``domains`` restricts a role's admissible input values (as integers);
    ``ancillas`` lists roles counted as ancilla qutrits; ``result`` lists roles,
    least significant first, whose concatenation holds the computed value.
    """

    roles: Mapping[str, tuple[int, ...]]
    init: Mapping[str, int] = field(default_factory=dict)
    ancillas: tuple[str, ...] = ()
    result: tuple[str, ...] = ()
    domains: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "roles", {k: tuple(v) for k, v in self.roles.items()})
        object.__setattr__(self, "init", dict(self.init))
        object.__setattr__(self, "domains", {k: tuple(v) for k, v in self.domains.items()})
        object.__setattr__(self, "ancillas", tuple(self.ancillas))
        object.__setattr__(self, "result", tuple(self.result))

    def __getitem__(self, role: str) -> tuple[int, ...]:
        return self.roles[role]

    def __contains__(self, role: str) -> bool:
        return role in self.roles

    def wires(self) -> list[int]:
        return [w for ws in self.roles.values() for w in ws]

    @property
    def ancilla_count(self) -> int:
        return sum(len(self.roles[r]) for r in self.ancillas if r in self.roles)

    def relabel(self, assignment: Sequence[int]) -> "RegisterMap":
        return RegisterMap(
            {r: tuple(assignment[w] for w in ws) for r, ws in self.roles.items()},
            self.init, self.ancillas, self.result, self.domains,
        )

    def problems(self, width: int) -> list[str]:
        out = []
        seen: dict[int, str] = {}
        for role, ws in self.roles.items():
            for w in ws:
                if not 0 <= w < width:
                    out.append(f"role {role} uses wire {w} outside width {width}")
                elif w in seen:
                    out.append(f"wire {w} belongs to both {seen[w]} and {role}")
                else:
                    seen[w] = role
        for role, v in self.init.items():
            if role not in self.roles:
                out.append(f"init given for unknown role {role}")
            elif v not in (0, 1, 2):
                out.append(f"init value {v} of role {role} is not a trit")
        for role in (*self.ancillas, *self.result):
            if role not in self.roles:
                out.append(f"unknown role {role}")
        for role, vals in self.domains.items():
            if role not in self.roles:
                out.append(f"domain given for unknown role {role}")
            elif not vals or any(not 0 <= v < 3 ** len(self.roles[role]) for v in vals):
                out.append(f"bad input domain {vals} for role {role}")
        for role in self.ancillas:
            if role not in self.init and role not in self.domains:
                out.append(f"ancilla role {role} declares no initial value")
        return out


@dataclass(frozen=True)
class Diagnostic:
    index: int | None  # gate index, or None for circuit-level problems
    message: str

    def __str__(self):
        where = "circuit" if self.index is None else f"gate {self.index}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class Circuit:
    width: int
    ops: tuple[Op, ...] = ()
    registers: RegisterMap | None = None

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def with_registers(self, registers: RegisterMap | None) -> "Circuit":
        return Circuit(self.width, self.ops, registers)

    def gates(self) -> Iterable[Gate]:
        return (op.gate for op in self.ops)

    def check(self) -> "Circuit":
        diags = validate(self)
        if diags:
            raise CircuitError("; ".join(str(d) for d in diags[:5]))
        return self


def validate(c: Circuit) -> list[Diagnostic]:
    """Structural problems of ``c``; an empty list means the circuit is valid."""
    diags = []
    if c.width < 1:
        diags.append(Diagnostic(None, f"width must be positive, got {c.width}"))
    for i, op in enumerate(c.ops):
        arity = op.gate.arity
        if arity is None:
            if not op.wires:
                diags.append(Diagnostic(i, f"{op.gate} needs at least one wire"))
        elif len(op.wires) != arity:
            diags.append(Diagnostic(i, f"{op.gate} takes {arity} wires, got {len(op.wires)}"))
        if len(set(op.wires)) != len(op.wires):
            diags.append(Diagnostic(i, f"duplicate wire in {op.wires}"))
        bad = [w for w in op.wires if not 0 <= w < c.width]
        if bad:
            diags.append(Diagnostic(i, f"wires {bad} outside width {c.width}"))
    if c.registers is not None:
        diags.extend(Diagnostic(None, msg) for msg in c.registers.problems(c.width))
    return diags


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.width, [Op(op.gate.inverse(), op.wires) for op in reversed(c.ops)], c.registers)


def compose(c1: Circuit, c2: Circuit) -> Circuit:
    """``c1`` followed by ``c2`` (left to right)."""
    if c1.width != c2.width:
        raise CircuitError(f"width mismatch: {c1.width} vs {c2.width}")
    regs = c1.registers if c1.registers is not None else c2.registers
    return Circuit(c1.width, c1.ops + c2.ops, regs)


def embed(c: Circuit, assignment: Sequence[int], width: int | None = None) -> Circuit:
    """Relabel wire ``w`` of ``c`` as ``assignment[w]`` inside a host circuit."""
    assignment = tuple(assignment)
    if len(assignment) != c.width:
        raise CircuitError(f"assignment covers {len(assignment)} wires, circuit has {c.width}")
    if len(set(assignment)) != len(assignment):
        raise CircuitError(f"assignment {assignment} is not injective")
    if any(w < 0 for w in assignment):
        raise CircuitError("negative wire in assignment")
    if width is None:
        width = max(assignment) + 1
    elif max(assignment) >= width:
        raise CircuitError(f"assignment exceeds host width {width}")
    ops = [Op(op.gate, tuple(assignment[w] for w in op.wires)) for op in c.ops]
    regs = c.registers.relabel(assignment) if c.registers is not None else None
    return Circuit(width, ops, regs)


def ops_on(gate: Gate, *wires: int) -> Op:
    return Op(gate, tuple(wires))


@dataclass(frozen=True)
class ResourceReport:
    width: int
    ancilla_count: int
    total_gates: int
    non_clifford_count: int
    non_clifford_depth: int
    counts_by_kind: dict[str, int]

    def count(self, name: str) -> int:
        """Total over every variant (inverse, control value) of a base gate name."""
        total = 0
        for tok, k in self.counts_by_kind.items():
            base = tok.split("[")[0]
            if base == name or base == name + "INV":
                total += k
        return total


def non_clifford_depth(c: Circuit) -> int:
    # Clifford gates (and barriers) synchronise their wires without adding a layer.
    layer = [0] * c.width
    for op in c.ops:
        top = max(layer[w] for w in op.wires)
        if not op.gate.is_clifford:
            top += 1
        for w in op.wires:
            layer[w] = top
    return max(layer, default=0)


def resource_report(c: Circuit) -> ResourceReport:
    c.check()
    counts = Counter(op.gate.token for op in c.ops if op.gate.name != "BARRIER")
    nc = sum(1 for op in c.ops if not op.gate.is_clifford)
    anc = c.registers.ancilla_count if c.registers is not None else 0
    return ResourceReport(
        width=c.width,
        ancilla_count=anc,
        total_gates=sum(counts.values()),
        non_clifford_count=nc,
        non_clifford_depth=non_clifford_depth(c),
        counts_by_kind=dict(sorted(counts.items())),
    )
