"""Command-line front end: ``ternarith gen | lower | verify | run | matrix | report | selftest``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage,
parse or bound errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import adders, extensions
from .circuit import Circuit, CircuitError, resource_report
from .contracts import add_mod_oracle, add_oracle, cmp_oracle, sub_oracle
from .cxlower import UnsupportedGateError, basis_check, lower_to_cx
from .cyclo import circuit_matrix, monomial_action
from .permsim import (
    EXHAUSTIVE, NotClassicalError, Sampled, StateBoundError, all_states, check_against_oracle, encode, max_states,
    simulate,
)
from .superm import lower_to_superm
from .textfmt import ParseError, emit_json_report, emit_text, parse_text
from .trits import fmt_trits, to_trits


class UsageError(Exception):
    pass


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _read(path: str) -> Circuit:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_text(text)


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def summary(c: Circuit) -> str:
    r = resource_report(c)
    return (f"width={r.width} gates={r.total_gates} non_clifford={r.non_clifford_count} "
            f"ancillas={r.ancilla_count} depth={r.non_clifford_depth}")


def _emit(c: Circuit, out: str | None, line: str):
    # the summary goes to stderr when the circuit itself is written to stdout
    _write(emit_text(c), out)
    print(line, file=sys.stdout if out not in (None, "-") else sys.stderr)


# --- gen -----------------------------------------------------------------------


def build(args) -> Circuit:
    n, kind = args.n, args.kind
    variant = args.variant.replace("-", "_")
    if kind == "ripple-adder":
        c, _ = extensions.build_ripple_mod_adder(n) if args.mod else adders.build_ripple_adder(n, carry_in=args.carry_in)
    elif kind == "cla-adder":
        if args.mod:
            c, _ = extensions.build_cla_mod_adder(n, variant)
        elif variant == "in_place":
            c, _ = adders.build_cla_in_place(n)
        else:
            c, _ = adders.build_cla_out_of_place(n)
    elif kind == "subtractor":
        c, _ = extensions.build_subtractor(n, args.method, args.borrow, variant)
    elif kind == "comparator":
        c, _ = (extensions.build_ripple_comparator(n) if args.method == "ripple"
                else extensions.build_cla_comparator(n))
    else:
        c, _ = adders.build_carry_network(n)
    return c


def cmd_gen(args) -> int:
    if args.kind != "ripple-adder" and not args.carry_in:
        raise UsageError("--no-carry-in applies to ripple-adder only")
    if args.mod and args.kind not in ("ripple-adder", "cla-adder"):
        raise UsageError("--mod applies to ripple-adder and cla-adder")
    if args.borrow and args.kind != "subtractor":
        raise UsageError("--borrow applies to subtractor only")
    c = build(args)
    _emit(c, args.output, summary(c))
    return 0


# --- lower ----------------------------------------------------------------------


def cmd_lower(args) -> int:
    c = _read(args.input)
    if args.basis == "cx":
        low = lower_to_cx(c)
        name, extra = "CX", {"CX"}
    else:
        low = lower_to_superm(c)
        name, extra = "P9", {"P9"}
    bad = basis_check(low, extra)
    if bad:
        raise UsageError(f"lowering left gates outside the basis: {', '.join(bad)}")
    count = sum(1 for g in low.gates() if g.name == name)
    cliff = sum(1 for g in low.gates() if g.is_clifford and g.name != "BARRIER")
    _emit(low, args.output, f"basis={args.basis} {name}={count} clifford={cliff} width={low.width}")
    return 0


# --- verify ---------------------------------------------------------------------

ORACLES = {"add": add_oracle, "add-mod": add_mod_oracle, "sub": sub_oracle, "cmp": cmp_oracle}


def _monomial_simulator(c: Circuit):
    act = monomial_action(c)
    if act.global_phase() is None:
        return None
    table = all_states(c.width)[act.perm.mapping]
    return lambda states: table[encode(states)]


def cmd_verify(args) -> int:
    c = _read(args.input)
    regs = c.registers
    if regs is None:
        raise UsageError("verify needs REG lines naming the circuit's registers")
    if "A" not in regs:
        raise UsageError("verify needs an input register A")
    n = len(regs["A"])
    if args.n is not None and args.n != n:
        raise UsageError(f"--n {args.n} does not match register A of {n} trits")
    if args.max_width is not None and c.width > args.max_width:
        raise UsageError(f"circuit width {c.width} exceeds --max-width {args.max_width}")
    if args.spec == "sub":
        borrow = sum(len(regs[r]) for r in regs.result) > n
        oracle = sub_oracle(regs, n, borrow)
    else:
        oracle = ORACLES[args.spec](regs, n)
    mode = Sampled(args.samples, args.seed) if args.samples is not None else EXHAUSTIVE
    simulator = None
    if not all(g.is_classical for g in c.gates()):
        if 3**c.width > max_states():
            raise UsageError(f"non-permutation circuit of width {c.width} is beyond the state bound")
        simulator = _monomial_simulator(c)
        if simulator is None:
            print(f"verify spec={args.spec} n={n}: FAIL (not a permutation up to global phase)")
            return 1
    header = f"verify spec={args.spec} n={n} " + (
        "mode=exhaustive" if mode == EXHAUSTIVE else f"mode=sampled samples={mode.count} seed={mode.seed}")
    try:
        rep = check_against_oracle(c, regs, oracle, mode=mode, simulator=simulator)
    except StateBoundError as e:
        raise UsageError(f"{e}; rerun with --samples K --seed S") from None
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(header)
    print(rep.describe(regs))
    return 0 if rep.passed else 1


# --- run, matrix, report ---------------------------------------------------------


def _parse_input(c: Circuit, text: str) -> list[int]:
    regs = c.registers
    if "=" not in text:
        if len(text) != c.width or any(ch not in "012" for ch in text):
            raise UsageError(f"expected {c.width} trits (wire 0 first), got {text!r}")
        return [int(ch) for ch in text]
    if regs is None:
        raise UsageError("role assignments need REG lines")
    state = [0] * c.width
    given = {}
    for part in text.split(","):
        role, _, val = part.partition("=")
        role = role.strip()
        if role not in regs:
            raise UsageError(f"unknown register {role!r}")
        try:
            given[role] = int(val)
        except ValueError:
            raise UsageError(f"bad value for {role}: {val!r}") from None
    for role, ws in regs.roles.items():
        v = given.get(role)
        if v is None:
            trits = [regs.init.get(role, 0)] * len(ws)
        else:
            if not 0 <= v < 3 ** len(ws):
                raise UsageError(f"{role}={v} does not fit in {len(ws)} trits")
            trits = to_trits(v, len(ws))
        for w, t in zip(ws, trits):
            state[w] = t
    return state


def _format_state(c: Circuit, state: list[int]) -> str:
    regs = c.registers
    if regs is None:
        return "".join(map(str, state))
    parts = []
    for role, ws in regs.roles.items():
        trits = [state[w] for w in ws]
        val = sum(t * 3**k for k, t in enumerate(trits))
        parts.append(f"{role}={val} ({fmt_trits(trits)})" if ws else f"{role}=0")
    return " ".join(parts)


def cmd_run(args) -> int:
    c = _read(args.input)
    state = _parse_input(c, args.state)
    try:
        out = simulate(c, np.array([state]))[0]
    except NotClassicalError as e:
        raise UsageError(str(e)) from None
    print(_format_state(c, [int(v) for v in out]))
    return 0


def cmd_matrix(args) -> int:
    c = _read(args.input)
    if c.width <= args.dense_limit:
        print(circuit_matrix(c, max_width=args.dense_limit).format())
        return 0
    if 3**c.width > max_states():
        raise UsageError(f"width {c.width} is beyond the state bound {max_states()}")
    try:
        act = monomial_action(c)
    except ValueError as e:
        raise UsageError(f"width {c.width} needs the monomial path: {e}") from None
    w = c.width
    for x in range(3**w):
        y = int(act.perm.mapping[x])
        k = int(act.phase[x])
        src = "".join(map(str, to_trits(x, w)))
        dst = "".join(map(str, to_trits(y, w)))
        print(f"|{src}> -> z^{k} |{dst}>")
    return 0


def cmd_report(args) -> int:
    c = _read(args.input)
    r = resource_report(c)
    if args.json:
        sys.stdout.write(emit_json_report(r))
        return 0
    print(f"width              {r.width}")
    print(f"ancillas           {r.ancilla_count}")
    print(f"gates              {r.total_gates}")
    print(f"non-Clifford count {r.non_clifford_count}")
    print(f"non-Clifford depth {r.non_clifford_depth}")
    for name, k in sorted(r.counts_by_kind.items()):
        print(f"  {name:16} {k}")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_checks

    results = run_checks()
    for name, ok in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    failed = sum(1 for _, ok in results if not ok)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# --- entry point ------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ternarith", description="Ternary arithmetic circuits: build, lower, check.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an arithmetic circuit as .t3 text")
    g.add_argument("kind", choices=["ripple-adder", "cla-adder", "subtractor", "comparator", "carry-network"])
    g.add_argument("--n", type=_positive, required=True, help="number of trits")
    g.add_argument("--variant", choices=["out-of-place", "in-place"], default="in-place")
    g.add_argument("--mod", action="store_true", help="addition mod 3^n (no high trit)")
    g.add_argument("--method", choices=["ripple", "cla"], default="ripple")
    g.add_argument("--borrow", action="store_true", help="subtractor exposes a borrow trit")
    g.add_argument("--no-carry-in", dest="carry_in", action="store_false",
                   help="ripple adder with its carry-in wire fixed to 0")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    lo = sub.add_parser("lower", help="rewrite into Clifford+CX or Clifford+P9")
    lo.add_argument("--basis", choices=["cx", "superm"], required=True)
    lo.add_argument("-i", "--input", required=True)
    lo.add_argument("-o", "--output")
    lo.set_defaults(func=cmd_lower)

    v = sub.add_parser("verify", help="check a circuit against an arithmetic oracle")
    v.add_argument("--spec", choices=sorted(ORACLES), required=True, help="behaviour to check against")
    v.add_argument("--n", type=_positive)
    v.add_argument("-i", "--input", required=True)
    m = v.add_mutually_exclusive_group()
    m.add_argument("--exhaustive", action="store_true", help="every admissible input (default)")
    m.add_argument("--samples", type=_positive)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-width", type=_positive)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("run", help="apply a permutation circuit to one basis state")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("--input-state", "--state", dest="state", required=True,
                   help="trits with wire 0 first, or role assignments like A=5,B=7")
    r.set_defaults(func=cmd_run)

    mx = sub.add_parser("matrix", help="exact matrix over Q(zeta_36)")
    mx.add_argument("-i", "--input", required=True)
    mx.add_argument("--dense-limit", type=_positive, default=3)
    mx.set_defaults(func=cmd_matrix)

    rp = sub.add_parser("report", help="resource report")
    rp.add_argument("-i", "--input", required=True)
    rp.add_argument("--json", action="store_true")
    rp.set_defaults(func=cmd_report)

    st = sub.add_parser("selftest", help="check the built-in identities and templates")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, UnsupportedGateError, CircuitError, ValueError) as e:
        print(f"ternarith {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
