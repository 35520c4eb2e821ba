"""Ternary adders: the Carry block, ripple-carry addition and carry look-ahead addition.

Builders first produce a *program*: a list whose items are plain gate ops or
named blocks (Carry, AdjC, AdjC0, merge, each possibly inverted). Programs keep
the block structure visible for counting and are expanded into flat circuits.

Carry status indicators C[i, j] take the value 0 (carry into j is 0), 1 (it is
1) or 2 (it equals the carry into i).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .circuit import (
    BARRIER, S01, S02, SUM, SWAP, SWAP2, X, X_INV, Circuit, CircuitError, Op, RegisterMap, cs01, csum, cx,
)
from .trits import binary_weight, floor_log2, floor_log2_frac

# --- blocks ---------------------------------------------------------------


def carry_ops(cin: int, a: int, b: int) -> list[Op]:
    """Carry on wires (cin, a, b): the outgoing carry ends on ``b``."""
    return [
        Op(SWAP2, (a, b)),
        Op(SUM, (a, b)),
        Op(SUM.inverse(), (cin, b)),
        Op(cs01(0), (b, cin)),
        Op(SWAP, (a, cin)),
        Op(SWAP, (b, a)),
    ]


def adjc_ops(a: int, b: int) -> list[Op]:
    """C[i, i+1] from (a_i, b_i), written over ``b``."""
    return [Op(SWAP2, (a, b)), Op(SUM, (a, b)), Op(S01, (b,))]


def adjc0_ops(a: int, b: int, anc: int) -> list[Op]:
    """C[0, 1] from (a_0, b_0) with a zero ancilla, written over ``b``."""
    return [
        Op(SWAP2, (a, b)),
        Op(SUM, (a, b)),
        Op(cx(0), (b, anc)),
        Op(SWAP, (a, anc)),
        Op(SWAP, (b, a)),
    ]


def merge_ops(ik: int, kj: int, out: int) -> list[Op]:
    """out += C[i,k] (.) C[k,j]: C[k,j] unless it is 2, in which case C[i,k]."""
    return [
        Op(SUM, (kj, out)),
        Op(X, (ik,)),
        Op(csum(2), (kj, ik, out)),
        Op(X_INV, (ik,)),
    ]


BLOCKS = {"carry": carry_ops, "adjc": adjc_ops, "adjc0": adjc0_ops, "merge": merge_ops}
BLOCK_ARITY = {"carry": 3, "adjc": 2, "adjc0": 3, "merge": 3}


@dataclass(frozen=True)
class Block:
    name: str
    wires: tuple[int, ...]
    inv: bool = False

    def ops(self) -> list[Op]:
        ops = BLOCKS[self.name](*self.wires)
        if self.inv:
            ops = [Op(op.gate.inverse(), op.wires) for op in reversed(ops)]
        return ops

    def inverse(self) -> "Block":
        return Block(self.name, self.wires, not self.inv)


Item = Union[Op, Block]


def expand(items: Iterable[Item]) -> list[Op]:
    out: list[Op] = []
    for it in items:
        out.extend(it.ops() if isinstance(it, Block) else [it])
    return out


def invert(items: Sequence[Item]) -> list[Item]:
    return [it.inverse() if isinstance(it, Block) else Op(it.gate.inverse(), it.wires) for it in reversed(items)]


def block_counts(items: Iterable[Item]) -> Counter:
    """Counter keyed by block name with ``_inv`` suffix for inverted blocks; top-level gates by token."""
    c = Counter()
    for it in items:
        if isinstance(it, Block):
            c[it.name + ("_inv" if it.inv else "")] += 1
        elif it.gate.name != "BARRIER":
            c[it.gate.token] += 1
    return c


def barrier(wires: Iterable[int]) -> Op:
    return Op(BARRIER, tuple(sorted(set(wires))))


def merge_binary(ik: int, kj: int) -> int:
    """The merging rule on indicator values."""
    return ik if kj == 2 else kj


# --- register allocation ---------------------------------------------------


@dataclass
class Layout:
    """Sequential wire allocation by role."""

    roles: dict = field(default_factory=dict)
    init: dict = field(default_factory=dict)
    ancillas: list = field(default_factory=list)
    domains: dict = field(default_factory=dict)
    width: int = 0

    def add(self, role: str, count: int, init: int | None = None, anc: bool = False,
            domain: Sequence[int] | None = None) -> tuple[int, ...]:
        wires = tuple(range(self.width, self.width + count))
        self.width += count
        self.roles[role] = wires
        if init is not None:
            self.init[role] = init
        if anc:
            self.ancillas.append(role)
        if domain is not None:
            self.domains[role] = tuple(domain)
        return wires

    def registers(self, result: Sequence[str]) -> RegisterMap:
        return RegisterMap(self.roles, self.init, tuple(self.ancillas), tuple(result), self.domains)


@dataclass
class Program:
    width: int
    items: list
    registers: RegisterMap

    def circuit(self) -> Circuit:
        return Circuit(self.width, expand(self.items), self.registers).check()

    def counts(self) -> Counter:
        return block_counts(self.items)


def _need(n: int):
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"number of trits must be a positive integer, got {n!r}")


# --- ripple-carry ------------------------------------------------------------


def ripple_items(cin: int, a: Sequence[int], b: Sequence[int], ovf: int | None, carry_in: bool,
                 barriers: bool = True) -> list[Item]:
    """Ripple addition b += a (+ cin) with the high trit added into ``ovf``.

    With ``ovf=None`` the top carry is never computed and the sum is taken mod 3^n.
    With ``barriers`` each Carry block waits for all three of its wires, so blocks
    are scheduled as units.
    """
    n = len(a)
    prev = [cin] + list(b[:-1])  # wire holding the incoming carry of trit i
    top = n if ovf is not None else n - 1
    items: list[Item] = []
    def carry(i, inv=False):
        if barriers:
            items.append(barrier((prev[i], a[i], b[i])))
        items.append(Block("carry", (prev[i], a[i], b[i]), inv=inv))

    for i in range(top):
        carry(i)
    if ovf is not None:
        items.append(Op(SUM, (b[n - 1], ovf)))
    else:
        items.append(Op(SUM, (a[n - 1], b[n - 1])))
        if n > 1 or carry_in:
            items.append(Op(SUM, (prev[n - 1], b[n - 1])))
    for i in reversed(range(top)):
        carry(i, inv=True)
        items.append(Op(SUM, (a[i], b[i])))
        if i > 0 or carry_in:
            items.append(Op(SUM, (prev[i], b[i])))
    return items


def ripple_adder_program(n: int, carry_in: bool = True, barriers: bool = True) -> Program:
    _need(n)
    lay = Layout()
    cin = lay.add("CIN", 1, anc=True, **({"domain": (0, 1)} if carry_in else {"init": 0}))
    a = lay.add("A", n)
    b = lay.add("B", n)
    ovf = lay.add("OVF", 1, init=0)
    items = ripple_items(cin[0], a, b, ovf[0], carry_in, barriers)
    return Program(lay.width, items, lay.registers(("B", "OVF")))


def build_carry() -> Circuit:
    """The 3-qutrit Carry block on roles CIN, A, B; the carry-out lands on B."""
    regs = RegisterMap({"CIN": (0,), "A": (1,), "B": (2,)})
    return Circuit(3, carry_ops(0, 1, 2), regs)


def build_ripple_adder(n: int, carry_in: bool = True, barriers: bool = True) -> tuple[Circuit, RegisterMap]:
    """B := low trits of a + b + cin, OVF := high trit; A and CIN restored.

    ``carry_in=False`` drops the SUM that folds CIN into the lowest trit, so CIN must be 0.
    """
    p = ripple_adder_program(n, carry_in, barriers)
    return p.circuit(), p.registers


def build_adjc() -> Circuit:
    return Circuit(2, adjc_ops(0, 1), RegisterMap({"A": (0,), "B": (1,)}))


def build_adjc0() -> Circuit:
    return Circuit(3, adjc0_ops(0, 1, 2), RegisterMap({"A": (0,), "B": (1,), "Z": (2,)}, {"Z": 0}, ("Z",)))


def build_merge() -> Circuit:
    regs = RegisterMap({"IK": (0,), "KJ": (1,), "OUT": (2,)}, {"OUT": 0}, ("OUT",))
    return Circuit(3, merge_ops(0, 1, 2), regs)


# --- carry look-ahead schedule ---------------------------------------------------


@dataclass(frozen=True)
class Job:
    """One merge: out = C[i,k] (.) C[k,j] with inputs and output named by slot."""

    i: int
    k: int
    j: int
    ik: tuple
    kj: tuple
    out: tuple


@dataclass
class RoundPlan:
    n: int
    p_rounds: dict  # t -> [Job]
    c_rounds: dict  # t -> [Job], t descending
    pinv_rounds: dict  # t -> [Job], t descending
    ancillas: int

    def slices(self) -> list[list[tuple[Job, bool]]]:
        """Time slices of (job, inverted) pairs: P rounds, then C[t] alongside P^-1[t+2], then the rest."""
        out = [[(j, False) for j in self.p_rounds[t]] for t in sorted(self.p_rounds)]
        done = set()
        for t in sorted(self.c_rounds, reverse=True):
            s = [(j, False) for j in self.c_rounds[t]]
            if t + 2 in self.pinv_rounds:
                s += [(j, True) for j in self.pinv_rounds[t + 2]]
                done.add(t + 2)
            out.append(s)
        for t in sorted(self.pinv_rounds, reverse=True):
            if t not in done:
                out.append([(j, True) for j in self.pinv_rounds[t]])
        return [s for s in out if s]

    def counts(self) -> tuple[int, int, int]:
        return tuple(sum(len(v) for v in r.values()) for r in (self.p_rounds, self.c_rounds, self.pinv_rounds))


def cla_schedule(n: int) -> RoundPlan:
    """Merge jobs of the look-ahead network; slots are ("B", i), ("Z", j) or ("X", k)."""
    _need(n)
    L = floor_log2(n)
    slot: dict[tuple[int, int], tuple] = {}  # (t, m) -> slot holding C[2^t m, 2^t (m+1)]
    for i in range(n):
        slot[0, i] = ("B", i)
    xs = 0
    p_rounds = {}
    for t in range(1, L + 1):
        jobs = []
        for m in range(n >> t):
            if m == 0:
                out = ("Z", 1 << t)
            else:
                out = ("X", xs)
                xs += 1
            slot[t, m] = out
            lo, mid, hi = (m << t), (m << t) + (1 << (t - 1)), (m + 1) << t
            jobs.append(Job(lo, mid, hi, slot[t - 1, 2 * m], slot[t - 1, 2 * m + 1], out))
        p_rounds[t] = jobs
    c_rounds = {}
    T = floor_log2_frac(n, 3) if n >= 1 else -1
    for t in range(T, -1, -1):
        jobs = []
        # m = 1 .. floor(n / 2^(t+1) - 1/2)
        for m in range(1, (n - (1 << t)) // (1 << (t + 1)) + 1):
            lo, j = (1 << (t + 1)) * m, (1 << t) * (2 * m + 1)
            jobs.append(Job(0, lo, j, ("Z", lo), slot[t, 2 * m], ("Z", j)))
        c_rounds[t] = jobs
    pinv_rounds = {}
    for t in range(L - 1, 0, -1):
        pinv_rounds[t] = [job for job in p_rounds[t] if job.out[0] == "X"]
    return RoundPlan(n, p_rounds, c_rounds, pinv_rounds, xs)


def network_items(plan: RoundPlan, B: Sequence[int], Z: Sequence[int], X: Sequence[int],
                  barriers: bool = True) -> list[Item]:
    """The carry network on concrete wires; ``Z[j]`` receives C[0, j] (index 0 unused)."""
    regs = {"B": B, "Z": Z, "X": X}

    def w(s):
        return regs[s[0]][s[1]]

    items: list[Item] = []
    everything = [*B, *Z[1:], *X[: plan.ancillas]]
    for sl in plan.slices():
        if barriers and items:
            items.append(barrier(everything))
        for job, inv in sl:
            items.append(Block("merge", (w(job.ik), w(job.kj), w(job.out)), inv=inv))
    return items


def build_carry_network(n: int, barriers: bool = True) -> tuple[Circuit, RegisterMap]:
    """Network alone. Inputs: B[i] = C[i, i+1], Z[1] = C[0, 1]; afterwards Z[j] = C[0, j]."""
    plan = cla_schedule(n)
    lay = Layout()
    B = lay.add("B", n)
    Z = lay.add("Z", n)  # Z[0] here is wire for j = 1
    X = lay.add("X", plan.ancillas, init=0, anc=True)
    items = network_items(plan, B, (None, *Z), X, barriers)
    return Circuit(lay.width, expand(items), lay.registers(("Z",))).check(), lay.registers(("Z",))


def carry_pass_items(n: int, A: Sequence[int], B: Sequence[int], Z: Sequence[int], X: Sequence[int],
                     barriers: bool = True) -> list[Item]:
    """Steps producing Z[j] = c_j for j = 1..n with A, B and X restored (Z[0] is the AdjC0 ancilla)."""
    plan = cla_schedule(n)
    if len(X) < plan.ancillas:
        raise CircuitError(f"carry pass on {n} trits needs {plan.ancillas} ancillas, got {len(X)}")
    wires = [*A, *B, *Z[: n + 1], *X[: plan.ancillas]]
    layer: list[Item] = [Block("adjc0", (A[0], B[0], Z[0]))]
    layer += [Block("adjc", (A[i], B[i])) for i in range(1, n)]
    items = layer + [Op(SUM, (B[0], Z[1]))]
    net = network_items(plan, B, Z, X, barriers)
    if barriers:
        items.append(barrier(wires))
    items += net
    if barriers:
        items.append(barrier(wires))
    items += invert(layer)
    return items


def cla_out_of_place_program(n: int, barriers: bool = True) -> Program:
    _need(n)
    lay = Layout()
    A = lay.add("A", n)
    B = lay.add("B", n)
    Z = lay.add("Z", n + 1, init=0)
    X = lay.add("X", cla_schedule(n).ancillas, init=0, anc=True)
    items = carry_pass_items(n, A, B, Z, X, barriers)
    if barriers:
        items.append(barrier(lay_wires(lay)))
    for i in range(n):
        items += [Op(SUM, (A[i], Z[i])), Op(SUM, (B[i], Z[i]))]
    return Program(lay.width, items, lay.registers(("Z",)))


def lay_wires(lay: Layout) -> list[int]:
    return list(range(lay.width))


def build_cla_out_of_place(n: int, barriers: bool = True) -> tuple[Circuit, RegisterMap]:
    """Z := a + b (n + 1 trits); A, B restored, X ancillas back to 0."""
    p = cla_out_of_place_program(n, barriers)
    return p.circuit(), p.registers


def cla_in_place_program(n: int, barriers: bool = True) -> Program:
    _need(n)
    lay = Layout()
    A = lay.add("A", n)
    B = lay.add("B", n)
    Z = lay.add("Z", n, init=0, anc=True)
    ovf = lay.add("OVF", 1, init=0)
    X = lay.add("X", cla_schedule(n).ancillas, init=0, anc=True)
    Zfull = (*Z, ovf[0])
    items = _in_place_body(n, A, B, Zfull, X, barriers, lay_wires(lay), top=True)
    return Program(lay.width, items, lay.registers(("B", "OVF")))


def _in_place_body(n, A, B, Z, X, barriers, allw, top: bool) -> list[Item]:
    # top=True keeps c_n in Z[n]; top=False is the mod-3^n variant where Z[n-1] is the last carry
    m = n if top else n - 1
    items: list[Item] = []
    if m >= 1:
        items += carry_pass_items(m, A, B, Z, X, barriers)
        if barriers:
            items.append(barrier(allw))
    for i in range(n):
        items.append(Op(SUM, (A[i], B[i])))
        if i < len(Z):
            items.append(Op(SUM, (Z[i], B[i])))
    k = n - 1  # trits rerun on (a, s') to clear the low carries
    items += [Op(S02, (B[i],)) for i in range(k)]
    if k >= 1:
        if barriers:
            items.append(barrier(allw))
        items += invert(carry_pass_items(k, A[:k], B[:k], Z[: k + 1], X, barriers))
    items += [Op(S02, (B[i],)) for i in range(k)]
    return items


def build_cla_in_place(n: int, barriers: bool = True) -> tuple[Circuit, RegisterMap]:
    """B := low trits of a + b, OVF := high trit; A restored, Z and X ancillas back to 0."""
    p = cla_in_place_program(n, barriers)
    return p.circuit(), p.registers


# --- closed-form resource counts --------------------------------------------------


def network_count(n: int) -> int:
    return 3 * n - 2 * binary_weight(n) - 2 * floor_log2(n) - 1


def network_ancillas(n: int) -> int:
    return n - binary_weight(n) - floor_log2(n)


def network_depth_bound(n: int) -> int:
    return floor_log2(n) + floor_log2_frac(n, 3) + 2


def out_of_place_count(n: int) -> int:
    return 5 * n - 2 * binary_weight(n) - 2 * floor_log2(n) + 1


def out_of_place_depth_bound(n: int) -> int:
    return floor_log2(n) + floor_log2_frac(n, 3) + 6


def in_place_count(n: int) -> int:
    return 10 * n - 2 * binary_weight(n) - 2 * floor_log2(n) - 2 * binary_weight(n - 1) - 2 * floor_log2(n - 1) - 3


def in_place_depth_bound(n: int) -> int:
    return (floor_log2(n) + floor_log2_frac(n, 3) + floor_log2(n - 1) + floor_log2_frac(n - 1, 3) + 12)


def in_place_ancillas(n: int) -> int:
    return 2 * n - binary_weight(n) - floor_log2(n)
