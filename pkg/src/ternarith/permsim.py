"""Classical simulation of reversible qutrit circuits.

States are little-endian by wire number: index ``x = sum(trit[w] * 3**w)``.
Gate-local tables use the opposite convention (the gate's first wire is the
most significant digit), which is how gate matrices are usually written.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .circuit import SUM, S12, X, Circuit, CircuitError, Gate, Op, RegisterMap
from .trits import fmt_trits, to_trits

DEFAULT_MAX_STATES = 3**12


def max_states() -> int:
    """Enumeration bound, overridable through ``TERNARY_MAX_STATES``."""
    raw = os.environ.get("TERNARY_MAX_STATES")
    return int(raw) if raw else DEFAULT_MAX_STATES


class NotClassicalError(CircuitError):
    def __init__(self, index: int, gate: Gate):
        super().__init__(f"not a permutation circuit: gate {index} is {gate}")
        self.index = index
        self.gate = gate


class StateBoundError(ValueError):
    pass


def _swap(v, a, b):
    return b if v == a else a if v == b else v


def classical_action(gate: Gate, vals: Sequence[int]) -> tuple[int, ...]:
    """Image of the local basis state ``vals`` (one trit per gate wire)."""
    s = -1 if gate.inv else 1
    n = gate.name
    if n == "X":
        return ((vals[0] + s) % 3,)
    if n in ("S01", "S02", "S12"):
        return (_swap(vals[0], int(n[1]), int(n[2])),)
    if n == "BARRIER":
        return tuple(vals)
    c, t = vals[0], vals[-1]
    if n == "SUM":
        return c, (t + s * c) % 3
    if n == "SWAP":
        return t, c
    if n == "CX":
        return c, (t + s * (c == gate.ctrl)) % 3
    if n == "CPX":
        return c, (t + s * c * c) % 3
    if n == "CS01":
        return c, _swap(t, 0, 1) if c == gate.ctrl else t
    if n == "SWAP2":
        s_lab, t_lab = gate.labels
        pair = tuple(vals)
        return t_lab if pair == s_lab else s_lab if pair == t_lab else pair
    j = vals[1]
    if n == "CSUM":
        return c, j, (t + s * j * (c == gate.ctrl)) % 3
    if n == "HORNER":
        return c, j, (t + s * c * j) % 3
    raise CircuitError(f"{gate} has no classical action")


@lru_cache(maxsize=None)
def local_table(gate: Gate, arity: int) -> np.ndarray:
    """Permutation of ``range(3**arity)`` realised by ``gate`` (first wire most significant)."""
    table = np.empty(3**arity, dtype=np.int64)
    for idx, vals in enumerate(itertools.product(range(3), repeat=arity)):
        out = classical_action(gate, vals)
        table[idx] = sum(v * 3 ** (arity - 1 - k) for k, v in enumerate(out))
    return table


def simulate(c: Circuit, states: np.ndarray) -> np.ndarray:
    """Apply ``c`` to a batch of trit rows of shape (N, width); returns a new array."""
    st = np.array(states, dtype=np.int8, copy=True)
    if st.ndim != 2 or st.shape[1] != c.width:
        raise ValueError(f"states must have shape (N, {c.width})")
    for i, op in enumerate(c.ops):
        g = op.gate
        if not g.is_classical:
            raise NotClassicalError(i, g)
        if g.name == "BARRIER":
            continue
        wires = list(op.wires)
        a = len(wires)
        if g.name == "SWAP":
            st[:, wires] = st[:, wires[::-1]]
            continue
        weights = 3 ** np.arange(a - 1, -1, -1, dtype=np.int64)
        local = st[:, wires].astype(np.int64) @ weights
        new = local_table(g, a)[local]
        for k, w in enumerate(wires):
            st[:, w] = (new // weights[k]) % 3
    return st


def apply_classical(c: Circuit, trits: Sequence[int]) -> list[int]:
    if len(trits) != c.width:
        raise ValueError(f"input has {len(trits)} trits, circuit width is {c.width}")
    return [int(v) for v in simulate(c, np.array([trits]))[0]]


def all_states(width: int) -> np.ndarray:
    idx = np.arange(3**width, dtype=np.int64)
    return ((idx[:, None] // 3 ** np.arange(width, dtype=np.int64)) % 3).astype(np.int8)


def encode(states: np.ndarray) -> np.ndarray:
    return states.astype(np.int64) @ (3 ** np.arange(states.shape[1], dtype=np.int64))


@dataclass(frozen=True, eq=False)
class Permutation:
    width: int
    mapping: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mapping, dtype=np.int64)
        if m.shape != (3**self.width,) or not np.array_equal(np.sort(m), np.arange(3**self.width)):
            raise ValueError("mapping is not a bijection on the state space")
        m.setflags(write=False)
        object.__setattr__(self, "mapping", m)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.width == other.width and np.array_equal(
            self.mapping, other.mapping)

    def __hash__(self):
        return hash((self.width, self.mapping.tobytes()))

    def __call__(self, x: int) -> int:
        return int(self.mapping[x])

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        return Permutation(self.width, other.mapping[self.mapping])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(len(self.mapping))
        return Permutation(self.width, inv)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.mapping, np.arange(len(self.mapping))))

    def moved(self) -> list[int]:
        return [int(x) for x in np.nonzero(self.mapping != np.arange(len(self.mapping)))[0]]

    @classmethod
    def identity(cls, width: int) -> "Permutation":
        return cls(width, np.arange(3**width))


def permutation_of(c: Circuit, bound: int | None = None) -> Permutation:
    bound = max_states() if bound is None else bound
    if 3**c.width > bound:
        raise StateBoundError(f"3^{c.width} states exceed the enumeration bound {bound}")
    return Permutation(c.width, encode(simulate(c, all_states(c.width))))


# --- oracle checks -------------------------------------------------------


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0


EXHAUSTIVE = "exhaustive"


@dataclass
class CheckReport:
    passed: bool
    cases: int
    counterexample: dict | None = None

    def describe(self, regs: RegisterMap | None = None) -> str:
        if self.passed:
            return f"PASS ({self.cases} cases)"
        ce = self.counterexample
        lines = [f"FAIL after {ce['case'] + 1} of {self.cases} cases"]
        for label in ("input", "expected", "got"):
            parts = []
            for role, val in ce[label].items():
                n = len(regs[role]) if regs is not None and role in regs else None
                parts.append(f"{role}={fmt_trits(to_trits(val, n)) if n else val}")
            lines.append(f"  {label:8} " + " ".join(parts))
        return "\n".join(lines)


def role_values(states: np.ndarray, regs: RegisterMap) -> dict[str, np.ndarray]:
    out = {}
    for role, ws in regs.roles.items():
        w = np.asarray(ws, dtype=np.int64)
        out[role] = states[:, w].astype(np.int64) @ (3 ** np.arange(len(ws), dtype=np.int64)) if ws \
            else np.zeros(len(states), dtype=np.int64)
    return out


def default_domain(regs: RegisterMap, overrides: Mapping[str, Iterable[int]] | None = None) -> dict:
    """Admissible input values per role: ancillas at their init value, the rest unrestricted."""
    dom = {}
    for role, ws in regs.roles.items():
        if role in regs.domains:
            dom[role] = list(regs.domains[role])
        elif role in regs.init:
            dom[role] = [sum(regs.init[role] * 3**k for k in range(len(ws)))]
        else:
            dom[role] = range(3 ** len(ws))
    for role, vals in (overrides or {}).items():
        dom[role] = vals
    return dom


Oracle = Callable[[dict[str, np.ndarray]], dict[str, np.ndarray]]


def check_against_oracle(
    c: Circuit,
    regs: RegisterMap | None,
    oracle: Oracle,
    domain: Mapping[str, Iterable[int]] | None = None,
    mode: str | Sampled = EXHAUSTIVE,
    unconstrained: Iterable[str] = (),
    chunk: int = 1 << 16,
    simulator: Callable[[np.ndarray], np.ndarray] | None = None,
) -> CheckReport:
    """Compare ``c`` against a vectorised ``oracle`` on role-level integers.

    ``oracle`` maps a dict of input arrays to a dict of expected output arrays; any
    role it does not mention (and not listed in ``unconstrained``) must come out unchanged.
    ``simulator`` replaces classical simulation of ``c`` (batch of trit rows in, images out).
    """
    regs = regs if regs is not None else c.registers
    if regs is None:
        raise ValueError("a register map is required")
    covered = set(regs.wires())
    if covered != set(range(c.width)):
        raise ValueError(f"register map leaves wires {sorted(set(range(c.width)) - covered)} unassigned")
    dom = default_domain(regs, domain)
    values = {r: np.asarray(list(v), dtype=np.int64) for r, v in dom.items()}
    for r, v in values.items():
        if len(v) == 0:
            raise ValueError(f"domain of role {r} is empty")
    roles = list(regs.roles)
    sizes = [len(values[r]) for r in roles]
    total = int(np.prod(sizes, dtype=object))
    if mode == EXHAUSTIVE:
        if total > max_states():
            raise StateBoundError(f"{total} inputs exceed the enumeration bound {max_states()}; use sampling")
        n_cases = total
    elif isinstance(mode, Sampled):
        n_cases = mode.count
        rng = np.random.default_rng(mode.seed)
        picks = {r: rng.integers(0, len(values[r]), size=n_cases) for r in roles}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    free = set(unconstrained)

    for start in range(0, n_cases, chunk):
        idx = np.arange(start, min(start + chunk, n_cases), dtype=np.int64)
        inputs = {}
        if mode == EXHAUSTIVE:
            rem = idx.copy()
            # first role varies slowest so the enumeration order is lexicographic by role declaration
            for r, size in reversed(list(zip(roles, sizes))):
                inputs[r] = values[r][rem % size]
                rem //= size
            inputs = {r: inputs[r] for r in roles}
        else:
            inputs = {r: values[r][picks[r][idx]] for r in roles}
        states = np.zeros((len(idx), c.width), dtype=np.int8)
        for r in roles:
            for k, w in enumerate(regs.roles[r]):
                states[:, w] = (inputs[r] // 3**k) % 3
        got = role_values(simulate(c, states) if simulator is None else simulator(states), regs)
        expected = dict(oracle(inputs))
        for r in roles:
            if r not in expected and r not in free:
                expected[r] = inputs[r]
        bad = np.zeros(len(idx), dtype=bool)
        for r, e in expected.items():
            bad |= got[r] != np.broadcast_to(np.asarray(e, dtype=np.int64), got[r].shape)
        if bad.any():
            k = int(np.argmax(bad))
            ce = {
                "case": start + k,
                "input": {r: int(inputs[r][k]) for r in roles},
                "expected": {r: int(np.broadcast_to(expected[r], bad.shape)[k]) for r in expected},
                "got": {r: int(got[r][k]) for r in expected},
            }
            return CheckReport(False, n_cases, ce)
    return CheckReport(True, n_cases)


# --- affine group --------------------------------------------------------


def _rank_f3(a: np.ndarray) -> int:
    m = a.copy() % 3
    rows, cols = m.shape
    r = 0
    for j in range(cols):
        piv = next((i for i in range(r, rows) if m[i, j]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * m[r, j]) % 3  # 1*1 = 2*2 = 1 mod 3
        for i in range(rows):
            if i != r and m[i, j]:
                m[i] = (m[i] - m[i, j] * m[r]) % 3
        r += 1
    return r


@dataclass(frozen=True, eq=False)
class AffineGate:
    """The map ``x -> A x + v`` over F3 with column vectors indexed by wire."""

    A: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.int64) % 3
        v = np.asarray(self.v, dtype=np.int64) % 3
        if A.ndim != 2 or A.shape[0] != A.shape[1] or v.shape != (A.shape[0],):
            raise ValueError("A must be square and v must match its size")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return len(self.v)

    def is_invertible(self) -> bool:
        return _rank_f3(self.A) == self.n

    def __eq__(self, other):
        return isinstance(other, AffineGate) and np.array_equal(self.A, other.A) and np.array_equal(
            self.v, other.v)

    def __call__(self, x: Sequence[int]) -> list[int]:
        return [int(t) for t in (self.A @ np.asarray(x) + self.v) % 3]

    def __repr__(self):
        return f"AffineGate(A={self.A.tolist()}, v={self.v.tolist()})"


def is_affine(p: Permutation) -> AffineGate | None:
    w = p.width
    v = np.array(to_trits(p(0), w))
    A = np.stack([(np.array(to_trits(p(3**j), w)) - v) % 3 for j in range(w)], axis=1)
    g = AffineGate(A, v)
    if not g.is_invertible():
        return None
    pts = all_states(w).astype(np.int64)
    images = encode((pts @ g.A.T + g.v) % 3)
    return g if np.array_equal(images, p.mapping) else None


def random_affine(n: int, rng: np.random.Generator) -> AffineGate:
    while True:
        A = rng.integers(0, 3, size=(n, n))
        if _rank_f3(A) == n:
            return AffineGate(A, rng.integers(0, 3, size=n))


def decompose_affine(g: AffineGate) -> Circuit:
    """A word over SUM, S12 and X realising ``g``, by row reduction of its matrix."""
    if not g.is_invertible():
        raise ValueError("matrix is singular over F3")
    n = g.n
    m = g.A.copy()
    steps: list[tuple] = []  # elementary row operations taking A to the identity

    def add(src, dst, k):
        m[dst] = (m[dst] + k * m[src]) % 3
        steps.append(("add", src, dst, k))

    def scale(i):
        m[i] = (2 * m[i]) % 3
        steps.append(("scale", i))

    for j in range(n):
        p = next(i for i in range(j, n) if m[i, j])
        if p != j:
            # swap rows j and p through three shears and a scaling
            add(p, j, 1)
            add(j, p, 2)
            add(p, j, 1)
            scale(p)
        if m[j, j] == 2:
            scale(j)
        for r in range(n):
            if r != j and m[r, j]:
                add(j, r, 3 - m[r, j])
    assert np.array_equal(m, np.eye(n, dtype=np.int64))

    ops: list[Op] = []
    # A is the product of the inverse steps, applied last-step first
    for step in reversed(steps):
        if step[0] == "add":
            _, src, dst, k = step
            ops.extend([Op(SUM, (src, dst))] * (3 - k))
        else:
            ops.append(Op(S12, (step[1],)))
    for w, t in enumerate(g.v):
        ops.extend([Op(X, (w,))] * int(t))
    return Circuit(n, ops)


def affine_group_order(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    order = 3**n
    for k in range(n):
        order *= 3**n - 3**k
    return order


def affine_generators(n: int) -> list[Permutation]:
    circs = [Circuit(n, [Op(S12, (w,))]) for w in range(n)]
    circs += [Circuit(n, [Op(X, (w,))]) for w in range(n)]
    circs += [Circuit(n, [Op(SUM, (a, b))]) for a in range(n) for b in range(n) if a != b]
    return [permutation_of(c) for c in circs]


def closure(generators: Sequence[Permutation], limit: int = 10**6) -> set[tuple[int, ...]]:
    """Brute-force group generated by ``generators`` (as mapping tuples)."""
    gens = [tuple(int(x) for x in g.mapping) for g in generators]
    if not gens:
        return set()
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > limit:
                        raise RuntimeError("closure exceeded limit")
        frontier = nxt
    return seen
