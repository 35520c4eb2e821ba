"""Rewrite classical building blocks into Clifford gates plus CX.

Every template acts on local wires ``0..arity-1`` (plus borrowed wires after
them) and is checked by exhaustive permutation equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import (
    CPX, CPX_INV, HORNER, HORNER_INV, SUM, SUM_INV, SWAP, SWAP2, X, X_INV, Circuit, CircuitError, Gate, Op,
    cx,
)
from .permsim import AffineGate, decompose_affine, permutation_of

CX_BASIS = frozenset({"CX"})


class UnsupportedGateError(CircuitError):
    pass


@dataclass(frozen=True)
class LoweringTemplate:
    source: Gate
    replacement: Circuit
    extra_wires: int = 0
    borrowed: bool = False  # extra wires may hold any value and are returned unchanged

    @property
    def cx_count(self) -> int:
        return sum(1 for g in self.replacement.gates() if g.name == "CX")


@dataclass
class TemplateReport:
    source: Gate
    passed: bool
    cases: int
    counterexample: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None = None

    def __str__(self):
        if self.passed:
            return f"{self.source}: PASS ({self.cases} states)"
        inp, want, got = self.counterexample
        return f"{self.source}: FAIL at {inp}: expected {want}, got {got}"


def _xs(wire: int, k: int, inv: bool = False) -> list[Op]:
    return [Op(X_INV if inv else X, (wire,))] * (k % 3)


def _cpx_ops(ctl: int, tgt: int, inv: bool = False) -> list[Op]:
    # t + i^2 = t - [i = 0] + 1
    ops = [Op(cx(0, True), (ctl, tgt)), Op(X, (tgt,))]
    return [Op(o.gate.inverse(), o.wires) for o in reversed(ops)] if inv else ops


def _horner_ops(i: int, j: int, k: int) -> list[Op]:
    # k + ij = k - (i + j)^2 + i^2 + j^2
    return [Op(SUM, (i, j)), *_cpx_ops(j, k, inv=True), Op(SUM_INV, (i, j)), *_cpx_ops(i, k), *_cpx_ops(j, k)]


def _csum0_ops(i: int, j: int, k: int) -> list[Op]:
    # k + (j + i^2)^2 - i^2 - j^2 + j = k + (1 - i^2) j
    return [*_cpx_ops(i, j), *_cpx_ops(j, k), *_cpx_ops(i, j, inv=True), *_cpx_ops(i, k, inv=True),
            *_cpx_ops(j, k, inv=True), Op(SUM, (j, k))]


def _s0110_ops(a: int, b: int) -> list[Op]:
    """Exchange |01> and |10> with five CX[2] and a SWAP."""
    ops = []
    for k in range(5):
        c, t = (a, b) if k % 2 == 0 else (b, a)
        ops.append(Op(cx(2), (c, t)))
    return ops + [Op(SWAP, (a, b))]


def _swap2_canonical_ops(a: int, b: int) -> list[Op]:
    # (0,0) -> (1,0) under X on a then (0,1) under the swap then (2,2) once the SUM is undone
    return [Op(SUM, (a, b)), Op(X, (a,)), *_s0110_ops(a, b), Op(X_INV, (a,)), Op(SUM_INV, (a, b))]


def _cs01_ops(c: int, a: int, b: int) -> list[Op]:
    # move the pair {(c,0), (c,1)} onto {(0,0), (2,2)}
    pre = [Op(SUM, (b, a)), *_xs(a, 1 + c, True), *_xs(b, 1, True)]
    return pre + _swap2_canonical_ops(a, b) + [Op(o.gate.inverse(), o.wires) for o in reversed(pre)]


@lru_cache(maxsize=None)
def _label_map(s: tuple[int, int], t: tuple[int, int]) -> AffineGate:
    # affine map sending (0,0) -> s and (2,2) -> t
    d = [(s[k] - t[k]) % 3 for k in range(2)]
    for flat in itertools.product(range(3), repeat=4):
        A = np.array(flat, dtype=np.int64).reshape(2, 2)
        g = AffineGate(A, np.array(s, dtype=np.int64))
        if g.is_invertible() and [int(v) for v in A.sum(axis=1) % 3] == d:
            return g
    raise AssertionError("no affine map found")


def _swap2_ops(gate: Gate, a: int, b: int) -> list[Op]:
    s, t = gate.labels
    if {s, t} == {(0, 0), (2, 2)}:
        return _swap2_canonical_ops(a, b)
    g = decompose_affine(_label_map(s, t))
    conj = [Op(o.gate, tuple((a, b)[w] for w in o.wires)) for o in g.ops]
    undo = [Op(o.gate.inverse(), o.wires) for o in reversed(conj)]
    return undo + _swap2_canonical_ops(a, b) + conj


def _ctrl_shift(ctl: int, c: int, body: list[Op]) -> list[Op]:
    # a hard control on value c becomes a control on 0 after subtracting c
    return _xs(ctl, c, True) + body + _xs(ctl, c)


def _inverted(ops: list[Op]) -> list[Op]:
    return [Op(o.gate.inverse(), o.wires) for o in reversed(ops)]


def _canonical(op: Op) -> bool:
    return op.gate.is_clifford or (op.gate.name == "CX" and op.gate.ctrl == 0)


def lower_op(op: Op) -> list[Op]:
    """Replacement ops for one gate over Clifford gates and CX[0]; those two pass through."""
    if _canonical(op):
        return [op]
    return [o for r in _lower_once(op) for o in ([r] if _canonical(r) else lower_op(r))]


def _lower_once(op: Op) -> list[Op]:
    g, w = op.gate, op.wires
    if g.name == "CX":
        return _ctrl_shift(w[0], g.ctrl, [Op(cx(0, g.inv), w)])
    if g.name == "CPX":
        return _cpx_ops(*w, inv=g.inv)
    if g.name == "HORNER":
        ops = _horner_ops(*w)
    elif g.name == "CSUM":
        ops = _ctrl_shift(w[0], g.ctrl, _csum0_ops(*w))
    elif g.name == "SWAP2":
        return _swap2_ops(g, *w)
    elif g.name == "CS01":
        return _cs01_ops(g.ctrl, *w)
    else:
        raise UnsupportedGateError(
            f"{g} has no Clifford+CX template; diagonal and Hadamard gates belong to the Clifford+P9 lowering")
    return _inverted(ops) if g.inv else ops


def template(kind: Gate) -> LoweringTemplate:
    if kind.arity is None:
        raise UnsupportedGateError(f"{kind} is not a lowerable gate")
    ops = lower_op(Op(kind, tuple(range(kind.arity))))
    return LoweringTemplate(kind, Circuit(kind.arity, ops))


def cpx_from_horner_template() -> LoweringTemplate:
    """CPX on (i, k) from two Horner gates and one borrowed wire j."""
    i, k, j = 0, 1, 2
    ops = [Op(SUM, (i, j)), Op(HORNER, (i, j, k)), Op(SUM_INV, (i, j)), Op(HORNER_INV, (i, j, k))]
    return LoweringTemplate(CPX, Circuit(3, ops), extra_wires=1, borrowed=True)


TEMPLATED = (
    CPX, CPX_INV, HORNER, HORNER_INV,
    *(Gate("CSUM", inv, c) for c in range(3) for inv in (False, True)),
    *(Gate("CS01", ctrl=c) for c in range(3)),
    *(cx(c, inv) for c in range(3) for inv in (False, True)),
    SWAP2, Gate("SWAP2", labels=((0, 1), (1, 0))), Gate("SWAP2", labels=((1, 2), (2, 0))),
)


def verify_template(kind_or_template: Gate | LoweringTemplate) -> TemplateReport:
    """Exhaustive comparison of a template with its source gate, every borrowed value included."""
    from .permsim import all_states, simulate

    t = kind_or_template if isinstance(kind_or_template, LoweringTemplate) else template(kind_or_template)
    width = t.replacement.width
    src = Circuit(width, [Op(t.source, tuple(range(t.source.arity)))])
    states = all_states(width)
    want = simulate(src, states)
    got = simulate(t.replacement, states)
    bad = np.flatnonzero((want != got).any(axis=1))
    if len(bad):
        k = bad[0]
        ce = tuple(tuple(int(v) for v in a[k]) for a in (states, want, got))
        return TemplateReport(t.source, False, len(states), ce)
    return TemplateReport(t.source, True, len(states))


def verify_all_templates() -> list[TemplateReport]:
    return [verify_template(k) for k in TEMPLATED] + [verify_template(cpx_from_horner_template())]


def s0110_circuit() -> Circuit:
    return Circuit(2, _s0110_ops(0, 1))


def lower_to_cx(c: Circuit) -> Circuit:
    """Same permutation over Clifford gates and CX[0] only."""
    ops = []
    for op in c.ops:
        if not op.gate.is_classical:
            raise UnsupportedGateError(
                f"{op.gate} is not a permutation gate; the Clifford+CX lowering handles classical circuits only")
        ops += lower_op(op)
    return Circuit(c.width, ops, c.registers)


def basis_check(c: Circuit, extra=CX_BASIS) -> list[str]:
    """Names of gates outside Clifford + ``extra``; empty when the circuit is in the basis."""
    return sorted({str(g) for g in c.gates() if not (g.is_clifford or g.name in extra)})


def cx_budget(kind: Gate) -> int:
    return template(kind).cx_count


def same_permutation(a: Circuit, b: Circuit) -> bool:
    return permutation_of(a) == permutation_of(b)

