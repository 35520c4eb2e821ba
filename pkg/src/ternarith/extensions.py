"""Arithmetic built on the adders: addition mod 3^n, subtraction and comparison."""

from __future__ import annotations

from .adders import (
    Block, Layout, Program, _in_place_body, _need, barrier, carry_pass_items, cla_in_place_program,
    cla_out_of_place_program, cla_schedule, invert, lay_wires, ripple_adder_program, ripple_items,
)
from .circuit import S02, SUM, X_INV, Circuit, Op, RegisterMap
from .trits import binary_weight, ceil_log2, floor_log2, floor_log2_frac

# --- addition mod 3^n ------------------------------------------------------------


def ripple_mod_program(n: int, barriers: bool = True) -> Program:
    _need(n)
    lay = Layout()
    cin = lay.add("CIN", 1, init=0, anc=True)
    a = lay.add("A", n)
    b = lay.add("B", n)
    items = ripple_items(cin[0], a, b, None, carry_in=False, barriers=barriers)
    return Program(lay.width, items, lay.registers(("B",)))


def build_ripple_mod_adder(n: int, barriers: bool = True) -> tuple[Circuit, RegisterMap]:
    """B := (a + b) mod 3^n without ever computing the top carry."""
    p = ripple_mod_program(n, barriers)
    return p.circuit(), p.registers


def cla_mod_program(n: int, variant: str = "out_of_place", barriers: bool = True) -> Program:
    _need(n)
    m = n - 1
    xs = cla_schedule(m).ancillas if m else 0
    lay = Layout()
    A = lay.add("A", n)
    B = lay.add("B", n)
    if variant == "out_of_place":
        Z = lay.add("Z", n, init=0)
        X = lay.add("X", xs, init=0, anc=True)
        items = carry_pass_items(m, A, B, Z, X, barriers) if m else []
        if m and barriers:
            items.append(barrier(lay_wires(lay)))
        for i in range(n):
            items += [Op(SUM, (A[i], Z[i])), Op(SUM, (B[i], Z[i]))]
        return Program(lay.width, items, lay.registers(("Z",)))
    if variant == "in_place":
        Z = lay.add("Z", n if m else 0, init=0, anc=True)
        X = lay.add("X", xs, init=0, anc=True)
        items = _in_place_body(n, A, B, Z, X, barriers, lay_wires(lay), top=False)
        return Program(lay.width, items, lay.registers(("B",)))
    raise ValueError(f"unknown variant {variant!r}")


def build_cla_mod_adder(n: int, variant: str = "out_of_place", barriers: bool = True):
    p = cla_mod_program(n, variant, barriers)
    return p.circuit(), p.registers


def cla_mod_out_of_place_count(n: int) -> int:
    m = n - 1
    return 5 * m - 2 * binary_weight(m) - 2 * floor_log2(m) + 1 if m else 0


def cla_mod_out_of_place_depth_bound(n: int) -> int:
    m = n - 1
    return floor_log2(m) + floor_log2_frac(m, 3) + 6 if m else 0


# --- subtraction ---------------------------------------------------------------------


def subtractor_program(n: int, method: str = "ripple", borrow: bool = False,
                       variant: str = "in_place", barriers: bool = True) -> Program:
    """Subtraction through complements: (a' + b)' = a - b (mod 3^n).

    The result lands in the adder's result register. With ``borrow`` the full adder is
    used and its high trit reads 1 exactly when a < b.
    """
    _need(n)
    if method == "ripple":
        inner = ripple_adder_program(n, carry_in=False, barriers=barriers) if borrow else ripple_mod_program(n, barriers)
    elif method == "cla":
        if borrow:
            inner = (cla_in_place_program(n, barriers) if variant == "in_place"
                     else cla_out_of_place_program(n, barriers))
        else:
            inner = cla_mod_program(n, variant, barriers)
    else:
        raise ValueError(f"unknown method {method!r}")
    regs = inner.registers
    A = regs["A"]
    low = [w for r in regs.result for w in regs[r]][:n]
    items = [Op(S02, (w,)) for w in A] + list(inner.items)
    items += [Op(S02, (w,)) for w in low] + [Op(S02, (w,)) for w in A]
    return Program(inner.width, items, regs)


def build_subtractor(n: int, method: str = "ripple", borrow: bool = False,
                     variant: str = "in_place", barriers: bool = True):
    p = subtractor_program(n, method, borrow, variant, barriers)
    return p.circuit(), p.registers


# --- comparison -------------------------------------------------------------------------


def ripple_comparator_program(n: int, barriers: bool = True) -> Program:
    """R := 1 iff a < b, from the top carry of a' + b; everything else restored."""
    _need(n)
    lay = Layout()
    cin = lay.add("CIN", 1, init=0, anc=True)
    A = lay.add("A", n)
    B = lay.add("B", n)
    R = lay.add("R", 1, init=0)
    prev = [cin[0], *B[:-1]]
    fwd = []
    for i in range(n):
        if barriers:
            fwd.append(barrier((prev[i], A[i], B[i])))
        fwd.append(Block("carry", (prev[i], A[i], B[i])))
    comp = [Op(S02, (w,)) for w in A]
    items = comp + fwd + [Op(SUM, (B[n - 1], R[0]))] + invert(fwd) + comp
    return Program(lay.width, items, lay.registers(("R",)))


def build_ripple_comparator(n: int, barriers: bool = True):
    p = ripple_comparator_program(n, barriers)
    return p.circuit(), p.registers


def cla_comparator_program(n: int, barriers: bool = True) -> Program:
    """Look-ahead comparison on inputs padded to 2^k trits.

    After complementing, every padded position has indicator value 2, so merges
    whose inputs are both padding are replaced by presetting their output to 2.
    """
    _need(n)
    k = ceil_log2(n)
    N = 1 << k
    lay = Layout()
    A = lay.add("A", n)
    B = lay.add("B", n)
    PA = lay.add("PA", N - n, init=0, anc=True)
    PB = lay.add("PB", N - n, init=0, anc=True)
    Z0 = lay.add("Z", 1, init=0, anc=True)
    X = lay.add("X", N - 1, init=0, anc=True)
    R = lay.add("R", 1, init=0)
    allw = lay_wires(lay)

    def sync():
        return [barrier(allw)] if barriers else []

    comp = [Op(S02, (w,)) for w in (*A, *PA)] + [Op(X_INV, (w,)) for w in PB]
    layer = [Block("adjc0", (A[0], B[0], Z0[0]))] + [Block("adjc", (A[i], B[i])) for i in range(1, n)]
    slot = {(0, i): (B[i] if i < n else PB[i - n]) for i in range(N)}
    pproc = []
    xs = iter(X)
    for t in range(1, k + 1):
        pproc += sync()
        for m in range(N >> t):
            out = next(xs)
            slot[t, m] = out
            if m << t >= n:
                pproc.append(Op(X_INV, (out,)))  # both halves are padding: the indicator is 2
            else:
                pproc.append(Block("merge", (slot[t - 1, 2 * m], slot[t - 1, 2 * m + 1], out)))
    fwd = comp + layer + pproc
    items = fwd + sync() + [Op(SUM, (slot[k, 0], R[0]))] + sync() + invert(fwd)
    return Program(lay.width, items, lay.registers(("R",)))


def build_cla_comparator(n: int, barriers: bool = True):
    p = cla_comparator_program(n, barriers)
    return p.circuit(), p.registers


def cla_comparator_merges(n: int) -> int:
    return cla_comparator_program(n).counts()["merge"]


def cla_comparator_count(n: int) -> int:
    k = ceil_log2(n)
    return 4 * n + 2 * binary_weight((1 << k) - n)


def cla_comparator_depth(n: int) -> int:
    return 2 * ceil_log2(n) + 4


def cla_comparator_ancillas(n: int) -> int:
    return 3 * (1 << ceil_log2(n)) - 2 * n
