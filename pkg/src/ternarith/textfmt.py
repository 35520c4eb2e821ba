"""Line-oriented ``.t3`` circuit text format and the JSON resource report.

::

    # comment
    QUTRITS 4
    REG A 0 1
    REG X 3 init=0 anc
    REG CIN 2 in=0,1 anc
    RESULT B OVF
    SUM 0 1
    CX[2] 0 1
    SWAP2 0 1 00 22
"""

from __future__ import annotations

import json
import re

from .circuit import ARITY, SELF_INVERSE, Circuit, CircuitError, Gate, Op, RegisterMap, ResourceReport

_TOKEN = re.compile(r"([A-Z0-9]+)(?:\[(-?\d+)\])?")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


def _fields(text: str) -> list[tuple[int, str]]:
    # (1-based column, field) pairs
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", text)]


def parse_gate_token(tok: str) -> Gate:
    m = _TOKEN.fullmatch(tok)
    if not m:
        raise CircuitError(f"unknown gate token {tok!r}")
    base, ctrl = m.group(1), m.group(2)
    inv = False
    if base not in ARITY:
        if base.endswith("INV") and base[:-3] in ARITY and base[:-3] not in SELF_INVERSE:
            base, inv = base[:-3], True
        else:
            raise CircuitError(f"unknown gate token {tok!r}")
    return Gate(base, inv, None if ctrl is None else int(ctrl))


def _int(field: tuple[int, str], lineno: int, what: str) -> int:
    col, s = field
    if not re.fullmatch(r"\d+", s):
        raise ParseError(f"expected {what}, got {s!r}", lineno, col)
    return int(s)


def parse_text(s: str) -> Circuit:
    width = None
    ops: list[Op] = []
    roles: dict[str, tuple[int, ...]] = {}
    init: dict[str, int] = {}
    anc: list[str] = []
    domains: dict[str, tuple[int, ...]] = {}
    result: tuple[str, ...] = ()
    for lineno, raw in enumerate(s.splitlines(), 1):
        fields = _fields(raw)
        if not fields or fields[0][1].startswith("#"):
            continue
        col, head = fields[0]
        if width is None:
            if head != "QUTRITS" or len(fields) != 2:
                raise ParseError("expected header 'QUTRITS <width>'", lineno, col)
            width = _int(fields[1], lineno, "width")
            if width < 1:
                raise ParseError("width must be positive", lineno, fields[1][0])
            continue
        if head == "QUTRITS":
            raise ParseError("duplicate QUTRITS header", lineno, col)
        if head == "REG":
            if len(fields) < 2:
                raise ParseError("REG needs a role name", lineno, col)
            role = fields[1][1]
            if role in roles:
                raise ParseError(f"role {role} declared twice", lineno, fields[1][0])
            idx = []
            for f in fields[2:]:
                if f[1] == "anc":
                    anc.append(role)
                elif f[1].startswith("init="):
                    v = f[1][5:]
                    if v not in ("0", "1", "2"):
                        raise ParseError(f"bad init value {v!r}", lineno, f[0])
                    init[role] = int(v)
                elif f[1].startswith("in="):
                    vals = f[1][3:].split(",")
                    if not all(re.fullmatch(r"\d+", v) for v in vals):
                        raise ParseError(f"bad input domain {f[1]!r}", lineno, f[0])
                    domains[role] = tuple(int(v) for v in vals)
                else:
                    w = _int(f, lineno, "wire index")
                    if w >= width:
                        raise ParseError(f"wire {w} outside width {width}", lineno, f[0])
                    idx.append(w)
            roles[role] = tuple(idx)
            continue
        if head == "RESULT":
            result = tuple(f[1] for f in fields[1:])
            continue
        try:
            gate = parse_gate_token(head)
        except CircuitError as e:
            raise ParseError(str(e), lineno, col) from None
        args = fields[1:]
        if gate.name == "SWAP2":
            if len(args) != 4:
                raise ParseError("SWAP2 takes 'q1 q2 s1s2 t1t2'", lineno, col)
            labels = []
            for f in args[2:]:
                if not re.fullmatch(r"[012]{2}", f[1]):
                    raise ParseError(f"bad SWAP2 label {f[1]!r}", lineno, f[0])
                labels.append(f[1])
            try:
                gate = Gate("SWAP2", labels=tuple(tuple(int(ch) for ch in lab) for lab in labels))
            except CircuitError as e:
                raise ParseError(str(e), lineno, args[2][0]) from None
            args = args[:2]
        wires = tuple(_int(f, lineno, "wire index") for f in args)
        arity = gate.arity
        if (arity is None and not wires) or (arity is not None and len(wires) != arity):
            raise ParseError(f"{head} takes {arity or 'at least 1'} wires, got {len(wires)}", lineno, col)
        for f, w in zip(args, wires):
            if w >= width:
                raise ParseError(f"wire {w} outside width {width}", lineno, f[0])
        if len(set(wires)) != len(wires):
            raise ParseError(f"duplicate wire in {head}", lineno, col)
        ops.append(Op(gate, wires))
    if width is None:
        raise ParseError("missing QUTRITS header", 1)
    regs = None
    if roles:
        regs = RegisterMap(roles, init, tuple(anc), result, domains)
        problems = regs.problems(width)
        if problems:
            raise ParseError(problems[0], 1)
    return Circuit(width, ops, regs)


def emit_gate(op: Op) -> str:
    wires = " ".join(str(w) for w in op.wires)
    if op.gate.name == "SWAP2":
        (a, b), (c, d) = op.gate.labels
        return f"SWAP2 {wires} {a}{b} {c}{d}"
    return f"{op.gate.token} {wires}"


def emit_text(c: Circuit) -> str:
    lines = [f"QUTRITS {c.width}"]
    regs = c.registers
    if regs is not None:
        for role, ws in regs.roles.items():
            parts = ["REG", role, *map(str, ws)]
            if role in regs.init:
                parts.append(f"init={regs.init[role]}")
            if role in regs.domains:
                parts.append("in=" + ",".join(map(str, regs.domains[role])))
            if role in regs.ancillas:
                parts.append("anc")
            lines.append(" ".join(parts))
        if regs.result:
            lines.append("RESULT " + " ".join(regs.result))
    lines.extend(emit_gate(op) for op in c.ops)
    return "\n".join(lines) + "\n"


def report_dict(r: ResourceReport) -> dict:
    return {
        "width": r.width,
        "ancillas": r.ancilla_count,
        "gates_total": r.total_gates,
        "non_clifford_count": r.non_clifford_count,
        "non_clifford_depth": r.non_clifford_depth,
        "counts_by_gate": dict(sorted(r.counts_by_kind.items())),
    }


def emit_json_report(r: ResourceReport) -> str:
    return json.dumps(report_dict(r), indent=2) + "\n"
