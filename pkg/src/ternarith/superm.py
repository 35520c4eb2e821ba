"""Exact synthesis of diagonal gates over Clifford + P9, and Clifford+P9 lowering.

A diagonal gate on n qutrits is described by its exponent table ``e`` with
``|x> -> zeta_9 ** e(x) |x>``. Reachable tables have the form

    e(x) = sum_f A_f * (f(x) mod 3) + 3 * Q(x) + const   (mod 9)

where f runs over affine forms over F3 and Q is a polynomial of degree at most
two. Each A_f = +-1 costs one P9 (conjugated by an affine Clifford); the rest is
Clifford.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .circuit import (
    CZ, CZ2, H, H_INV, P9, P9_INV, Q, Z, Circuit, Gate, Op, c2z, inverse,
)
from .cxlower import UnsupportedGateError, lower_op
from .cyclo import NotRepresentable, circuit_matrix, diagonal_exponents, equal_up_to_global_phase, \
    monomial_action
from .permsim import AffineGate, all_states, decompose_affine, permutation_of

MOD = 9
SUPERM_BASIS = frozenset({"P9"})


@dataclass(frozen=True, order=True)
class AffineFn:
    """f(x) = a . x + d over F3, evaluated to an integer in {0, 1, 2}."""

    coeffs: tuple[int, ...]
    const: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) % 3 for a in self.coeffs))
        object.__setattr__(self, "const", int(self.const) % 3)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def values(self) -> np.ndarray:
        pts = all_states(self.n).astype(np.int64)
        return (pts @ np.asarray(self.coeffs, dtype=np.int64) + self.const) % 3

    def __str__(self):
        parts = [str(self.const)] if self.const else []
        for w, a in enumerate(self.coeffs):
            if a:
                parts.append(f"{a if a > 1 else ''}x{w}")
        return "+".join(parts) or "0"


def _monomial_values(mono: tuple[int, ...], n: int) -> np.ndarray:
    pts = all_states(n).astype(np.int64)
    out = np.ones(len(pts), dtype=np.int64)
    for w in mono:
        out = out * pts[:, w]
    return out


@dataclass
class PhasePolynomial:
    """Exponent table as affine P9 terms plus a Clifford quadratic part.

    ``quadratic`` maps sorted wire tuples (``(p,)``, ``(p, q)``, ``(p, p)``) to F3
    coefficients of the polynomial Q.
    """

    n: int
    affine_terms: dict[AffineFn, int] = field(default_factory=dict)
    quadratic: dict[tuple[int, ...], int] = field(default_factory=dict)
    global_phase: int = 0

    def exponents(self) -> np.ndarray:
        e = np.full(3**self.n, self.global_phase, dtype=np.int64)
        for f, a in self.affine_terms.items():
            e += a * f.values()
        for mono, c in self.quadratic.items():
            e += 3 * c * _monomial_values(mono, self.n)
        return e % MOD

    @property
    def p9_terms(self) -> dict[AffineFn, int]:
        return {f: a for f, a in self.affine_terms.items() if a % MOD and not f.is_constant}

    @property
    def p9_count(self) -> int:
        return len(self.p9_terms)

    def __str__(self):
        terms = [f"{a}*[{f}]" for f, a in sorted(self.affine_terms.items()) if a % MOD]
        terms += [f"3*{c}*" + "".join(f"x{w}" for w in m) for m, c in sorted(self.quadratic.items()) if c % 3]
        if self.global_phase % MOD:
            terms.append(str(self.global_phase % MOD))
        return " + ".join(terms) or "0"


# --- solving over Z/9 ---------------------------------------------------------------


def _valuation(x: int) -> int:
    x %= MOD
    return 2 if x == 0 else (1 if x % 3 == 0 else 0)


def _solve_mod9(M: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some solution of M y = b (mod 9), or None.

    Gaussian elimination over the local ring Z/9 with full pivoting on the entry
    of least 3-adic valuation, so every pivot divides the rest of its submatrix.
    """
    M = M.astype(np.int64) % MOD
    b = b.astype(np.int64) % MOD
    rows, cols = M.shape
    order = list(range(cols))
    pivots = []
    r = 0
    while r < rows and r < cols:
        sub = M[r:, r:]
        if not sub.any():
            break
        vals = np.vectorize(_valuation)(sub)
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        i, j = i + r, j + r
        M[[r, i]] = M[[i, r]]
        b[[r, i]] = b[[i, r]]
        M[:, [r, j]] = M[:, [j, r]]
        order[r], order[j] = order[j], order[r]
        v = _valuation(M[r, r])
        unit = M[r, r] // 3**v
        uinv = pow(int(unit), -1, MOD)
        for k in range(r + 1, rows):
            if M[k, r]:
                factor = (M[k, r] // 3**v) * uinv % MOD
                M[k] = (M[k] - factor * M[r]) % MOD
                b[k] = (b[k] - factor * b[r]) % MOD
        pivots.append(v)
        r += 1
    if b[r:].any():
        return None
    y = np.zeros(cols, dtype=np.int64)
    for k in range(r - 1, -1, -1):
        rhs = int((b[k] - M[k, k + 1:] @ y[k + 1:]) % MOD)
        v = pivots[k]
        if rhs % 3**v:
            return None
        unit = int(M[k, k]) // 3**v
        y[k] = (rhs // 3**v) * pow(unit, -1, MOD) % (MOD // 3**v)
    out = np.zeros(cols, dtype=np.int64)
    out[order] = y
    return out


def all_affine_forms(n: int) -> list[AffineFn]:
    return [AffineFn(t[:n], t[n]) for t in itertools.product(range(3), repeat=n + 1)]


def quadratic_monomials(n: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(n), 2))


def solve_affine_decomposition(e) -> PhasePolynomial:
    """A phase polynomial with exponent table ``e`` (length 3^n, little-endian).

    Raises NotRepresentable when no assignment exists.
    """
    e = np.asarray(e, dtype=np.int64) % MOD
    n = round(np.log(len(e)) / np.log(3))
    if 3**n != len(e):
        raise ValueError("table length must be a power of 3")
    cp = clifford_part(e, n)
    if cp is not None:
        return PhasePolynomial(n, {}, *cp)  # pure Clifford: all A_f = 0
    forms = all_affine_forms(n)
    monos = quadratic_monomials(n)
    cols = [f.values() for f in forms] + [3 * _monomial_values(m, n) for m in monos]
    y = _solve_mod9(np.stack(cols, axis=1), e)
    if y is None:
        raise NotRepresentable("exponent table is outside the Clifford+P9 diagonal lattice")
    terms = {f: int(a) for f, a in zip(forms, y[: len(forms)]) if a}
    quad = {m: int(c) % 3 for m, c in zip(monos, y[len(forms):]) if c % 3}
    return PhasePolynomial(n, terms, quad, 0)


def normalize(p: PhasePolynomial) -> PhasePolynomial:
    """Reduce every A_f to 0 or +-1, pushing multiples of 3 into the Clifford part."""
    terms: dict[AffineFn, int] = {}
    quad = dict(p.quadratic)
    glob = p.global_phase
    for f, a in p.affine_terms.items():
        a %= MOD
        if f.is_constant:
            glob += a * f.const
            continue
        res = {0: 0, 1: 1, 2: MOD - 1}[a % 3]
        k = (a - res) % MOD // 3
        if res:
            terms[f] = res
        if k:
            # 3k (f mod 3) = 3k (a.x + d) modulo 9
            for w, c in enumerate(f.coeffs):
                if c:
                    quad[(w,)] = (quad.get((w,), 0) + k * c) % 3
            glob += 3 * k * f.const
    quad = {m: c for m, c in quad.items() if c % 3}
    return PhasePolynomial(p.n, terms, quad, glob % MOD)


# --- Clifford part and minimal P9 search ------------------------------------------------


@lru_cache(maxsize=None)
def _vandermonde_inv() -> np.ndarray:
    V = np.array([[1, 0, 0], [1, 1, 1], [1, 2, 1]])  # V[y, k] = y**k mod 3
    for flat in itertools.product(range(3), repeat=9):
        W = np.array(flat).reshape(3, 3)
        if np.array_equal(V @ W % 3, np.eye(3, dtype=np.int64)):
            return W
    raise AssertionError


def poly_coefficients(q: np.ndarray, n: int) -> np.ndarray:
    """Coefficients c[k_0, ..., k_{n-1}] of the F3 polynomial taking values ``q``."""
    t = np.asarray(q, dtype=np.int64).reshape((3,) * n).transpose(tuple(range(n - 1, -1, -1)))
    W = _vandermonde_inv()
    for ax in range(n):
        t = np.moveaxis(np.tensordot(W, t, axes=([1], [ax])), 0, ax) % 3
    return t


def clifford_part(r: np.ndarray, n: int) -> tuple[dict, int] | None:
    """(quadratic, global phase) when ``r`` is a Clifford exponent table, else None."""
    r = np.asarray(r, dtype=np.int64) % MOD
    d = (r - r[0]) % MOD
    if (d % 3).any():
        return None
    c = poly_coefficients(d // 3, n)
    quad = {}
    for k in zip(*np.nonzero(c)):
        if sum(k) > 2:
            return None
        mono = tuple(w for w, kw in enumerate(k) for _ in range(kw))
        quad[mono] = int(c[k])
    return quad, int(r[0])


def _directions(n: int) -> list[AffineFn]:
    # one linear form per line through the origin
    out = []
    for a in itertools.product(range(3), repeat=n):
        if any(a) and next(v for v in a if v) == 1:
            out.append(AffineFn(a, 0))
    return out


def minimal_phase_polynomial(e, max_terms: int | None = None) -> PhasePolynomial:
    """A phase polynomial for ``e`` with the fewest P9 terms.

    Up to Clifford diagonals a term depends only on the line spanned by its linear
    part and its sign, so candidates are signed subsets of lines, searched by size
    in lexicographic order.
    """
    e = np.asarray(e, dtype=np.int64) % MOD
    bound = normalize(solve_affine_decomposition(e))
    n = bound.n
    dirs = _directions(n)
    vals = [f.values() for f in dirs]
    limit = bound.p9_count if max_terms is None else min(max_terms, bound.p9_count)
    for k in range(limit + 1):
        for combo in itertools.combinations(range(len(dirs)), k):
            for signs in itertools.product((1, MOD - 1), repeat=k):
                r = e.copy()
                for i, s in zip(combo, signs):
                    r -= s * vals[i]
                cp = clifford_part(r, n)
                if cp is not None:
                    terms = {dirs[i]: s for i, s in zip(combo, signs)}
                    return PhasePolynomial(n, terms, cp[0], cp[1])
    return bound


# --- circuit emission -------------------------------------------------------------------


def _term_ops(f: AffineFn, sign: int) -> list[Op]:
    n = f.n
    w = next(i for i, a in enumerate(f.coeffs) if a)
    A = np.eye(n, dtype=np.int64)
    A[w] = f.coeffs
    v = np.zeros(n, dtype=np.int64)
    v[w] = f.const
    g = decompose_affine(AffineGate(A, v))
    return list(g.ops) + [Op(P9 if sign == 1 else P9_INV, (w,))] + list(inverse(g).ops)


def synthesize_diagonal(p: PhasePolynomial) -> Circuit:
    """Clifford + P9 circuit equal to diag(zeta_9 ** p.exponents()) up to global phase."""
    ops: list[Op] = []
    for f, a in sorted(p.p9_terms.items()):
        a %= MOD
        if a not in (1, MOD - 1):
            raise ValueError(f"coefficient {a} of [{f}] is not +-1; normalize first")
        ops += _term_ops(f, 1 if a == 1 else -1)
    single: dict[int, list[int]] = {}
    for mono, c in sorted(p.quadratic.items()):
        c %= 3
        if len(mono) == 2 and mono[0] != mono[1]:
            ops += [Op(CZ, mono)] * c
        elif len(mono) == 1:
            single.setdefault(mono[0], [0, 0])[0] += c
        elif len(mono) == 2:
            single.setdefault(mono[0], [0, 0])[1] += c
    for w, (c1, c2) in sorted(single.items()):
        # c1 x + c2 x^2 = (c1 + c2) x + 2 c2 [x = 2]  over F3
        ops += [Op(Z, (w,))] * ((c1 + c2) % 3) + [Op(Q, (w,))] * ((2 * c2) % 3)
    return Circuit(p.n, ops)


def target_exponents(kind: Gate) -> np.ndarray:
    m = circuit_matrix(Circuit(kind.arity, [Op(kind, tuple(range(kind.arity)))]))
    return diagonal_exponents(m)


@lru_cache(maxsize=None)
def synthesize_gate(kind: Gate) -> Circuit:
    """Minimal-P9 circuit for a diagonal gate such as CZ2 or C2Z[c]."""
    return synthesize_diagonal(minimal_phase_polynomial(target_exponents(kind)))


def p9_count(c: Circuit) -> int:
    return sum(1 for g in c.gates() if g.name == "P9")


# --- literal identities -----------------------------------------------------------------

# (coefficient, linear part over (i, j, k), constant)
EQ8_TERMS = (
    (1, (2, 1, 1), 1), (2, (2, 1, 2), 1), (6, (2, 1, 2), 2), (2, (2, 2, 1), 1),
    (6, (2, 2, 1), 2), (4, (2, 2, 2), 1), (6, (2, 2, 2), 2),
)


def eq8_exponent(i: int, j: int, k: int) -> int:
    """Evaluate the seven-term P9 solution for 3ijk: each form mod 3, then scaled and summed mod 9."""
    return sum(a * ((ci * i + cj * j + ck * k + d) % 3) for a, (ci, cj, ck), d in EQ8_TERMS) % MOD


def eq8_polynomial() -> PhasePolynomial:
    return PhasePolynomial(3, {AffineFn(lin, d): a for a, lin, d in EQ8_TERMS})


def square_identity() -> list[tuple[int, int, int]]:
    """Per trit: exponent of zeta_9^([2i] - [2-i]) and of zeta_9^-2 zeta_3^(i^2), both mod 9."""
    return [(i, ((2 * i) % 3 - (2 - i) % 3) % MOD, (-2 + 3 * i * i) % MOD) for i in range(3)]


# --- lowering -----------------------------------------------------------------------------


@dataclass(frozen=True)
class SupermTemplate:
    source: Gate
    replacement: Circuit

    @property
    def p9_count(self) -> int:
        return p9_count(self.replacement)


def superm_template(kind: Gate) -> SupermTemplate:
    n = kind.arity
    if kind.name in ("C2Z", "CZ2"):
        base = synthesize_gate(Gate(kind.name, False, kind.ctrl))
        rep = inverse(base) if kind.inv else base
    elif kind.name in ("CX", "HORNER"):
        # the Fourier transform on the target turns the increment into a phase
        diag = c2z(kind.ctrl) if kind.name == "CX" else CZ2
        t = n - 1
        body = [Op(H, (t,)), *synthesize_gate(diag).ops, Op(H_INV, (t,))]
        rep = Circuit(n, body)
        rep = inverse(rep) if kind.inv else rep
    elif kind.name == "P9" or kind.is_clifford:
        rep = Circuit(n, [Op(kind, tuple(range(n)))])
    else:
        raise UnsupportedGateError(f"{kind} has no Clifford+P9 template")
    return SupermTemplate(kind, rep)


def verify_superm_template(kind: Gate):
    """(equal up to global phase, phase factor) by exact matrix comparison."""
    t = superm_template(kind)
    src = circuit_matrix(Circuit(kind.arity, [Op(kind, tuple(range(kind.arity)))]))
    return equal_up_to_global_phase(circuit_matrix(t.replacement), src)


def lower_to_superm(c: Circuit) -> Circuit:
    """Same operator up to global phase over Clifford gates and P9 only."""
    ops: list[Op] = []

    def emit(op: Op):
        g = op.gate
        if g.is_clifford or g.name == "P9":
            ops.append(op)
        elif g.name in ("CX", "HORNER", "C2Z", "CZ2"):
            for o in superm_template(g).replacement.ops:
                ops.append(Op(o.gate, tuple(op.wires[w] for w in o.wires)))
        elif g.is_classical:
            for o in lower_op(op):
                emit(o)
        else:
            raise UnsupportedGateError(f"{g} has no Clifford+P9 template")

    for op in c.ops:
        emit(op)
    return Circuit(c.width, ops, c.registers)


def same_permutation_up_to_phase(classical: Circuit, lowered: Circuit) -> bool:
    act = monomial_action(lowered)
    return act.global_phase() is not None and act.perm == permutation_of(classical)


def random_phase_polynomial(n: int, rng: np.random.Generator, terms: int = 4) -> PhasePolynomial:
    forms = all_affine_forms(n)
    picks = rng.choice(len(forms), size=terms, replace=False)
    aff = {forms[int(i)]: int(rng.integers(1, MOD)) for i in picks}
    quad = {m: int(rng.integers(0, 3)) for m in quadratic_monomials(n)}
    return PhasePolynomial(n, aff, {m: c for m, c in quad.items() if c}, int(rng.integers(0, MOD)))


def solve_diagonal(m) -> PhasePolynomial:
    """Phase polynomial of a diagonal UnitaryMatrix; NotRepresentable outside the lattice."""
    return solve_affine_decomposition(diagonal_exponents(m))
