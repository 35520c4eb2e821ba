"""Exact arithmetic in Q(zeta_36) and exact matrices of qutrit circuits.

Every constant that appears in qutrit Clifford+P9 circuits (zeta_3, zeta_9, i,
sqrt(3)) lives in Q(zeta_36). Elements are coefficient vectors over the basis
1, z, ..., z^11 with z = zeta_36, reduced modulo z^12 - z^6 + 1.

Matrices store integer coefficient arrays of shape (rows, cols, 12) over a
common positive integer denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuit import Circuit, CircuitError, Gate, Op
from .permsim import Permutation, all_states, local_table, simulate

DEG = 12
ORDER = 36


class NotRepresentable(ValueError):
    """A phase that is not a power of zeta_9 (after removing a global phase)."""


def _reduce_poly(coeffs: list) -> list:
    c = list(coeffs)
    for d in range(len(c) - 1, DEG - 1, -1):
        # z^d = z^(d-6) - z^(d-12)
        v = c[d]
        if v:
            c[d] = 0
            c[d - 6] += v
            c[d - 12] -= v
    return c[:DEG] + [0] * (DEG - len(c[:DEG]))


def _build_tables():
    zpow = np.zeros((ORDER, DEG), dtype=np.int64)
    for k in range(ORDER):
        e = [0] * (k + 1)
        e[k] = 1
        zpow[k] = _reduce_poly(e)
    mul = np.zeros((DEG, DEG, DEG), dtype=np.int64)
    for p in range(DEG):
        for q in range(DEG):
            mul[p, q] = zpow[p + q]
    # zmul[k] is the matrix of multiplication by z^k; column q holds z^(k+q)
    zmul = np.zeros((ORDER, DEG, DEG), dtype=np.int64)
    for k in range(ORDER):
        for q in range(DEG):
            zmul[k, :, q] = zpow[(k + q) % ORDER]
    # conjugation sends z^q to z^(36-q)
    conj = np.zeros((DEG, DEG), dtype=np.int64)
    for q in range(DEG):
        conj[:, q] = zpow[(-q) % ORDER]
    return zpow, mul, zmul, conj


ZPOW, MUL, ZMUL, CONJ = _build_tables()
for _t in (ZPOW, MUL, ZMUL, CONJ):
    _t.setflags(write=False)


class CycloNumber:
    """An element of Q(zeta_36) with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        if len(c) > DEG:
            c = _reduce_poly(c)
        self.coeffs = tuple(c + [Fraction(0)] * (DEG - len(c)))

    @classmethod
    def _wrap(cls, x) -> "CycloNumber":
        if isinstance(x, CycloNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls([x])
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return CycloNumber([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber([-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        out = [Fraction(0)] * (2 * DEG - 1)
        for p, a in enumerate(self.coeffs):
            if a:
                for q, b in enumerate(other.coeffs):
                    if b:
                        out[p + q] += a * b
        return CycloNumber(_reduce_poly(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = CycloNumber([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycloNumber":
        out = [Fraction(0)] * DEG
        for q, a in enumerate(self.coeffs):
            if a:
                for s in range(DEG):
                    out[s] += a * int(CONJ[s, q])
        return CycloNumber(out)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_36)")
        # solve (multiplication-by-self) @ b = 1 by Gauss-Jordan over Q
        M = [[Fraction(0)] * DEG for _ in range(DEG)]
        for q in range(DEG):
            col = (self * zeta(q)).coeffs
            for s in range(DEG):
                M[s][q] = col[s]
        rhs = [Fraction(1)] + [Fraction(0)] * (DEG - 1)
        for j in range(DEG):
            p = next(i for i in range(j, DEG) if M[i][j])
            M[j], M[p] = M[p], M[j]
            rhs[j], rhs[p] = rhs[p], rhs[j]
            piv = M[j][j]
            M[j] = [x / piv for x in M[j]]
            rhs[j] /= piv
            for i in range(DEG):
                if i != j and M[i][j]:
                    f = M[i][j]
                    M[i] = [x - f * y for x, y in zip(M[i], M[j])]
                    rhs[i] -= f * rhs[j]
        return CycloNumber(rhs)

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def zeta_exponent(self) -> int | None:
        """``k`` with ``self == zeta_36**k``, or None."""
        for k in range(ORDER):
            if all(a == int(b) for a, b in zip(self.coeffs, ZPOW[k])):
                return k
        return None

    def __repr__(self):
        return f"CycloNumber({format_poly(self.coeffs)})"


def zeta(k: int) -> CycloNumber:
    """zeta_36 ** k."""
    return CycloNumber([int(x) for x in ZPOW[k % ORDER]])


def zeta9(k: int) -> CycloNumber:
    return zeta(4 * k)


def zeta3(k: int) -> CycloNumber:
    return zeta(12 * k)


def sqrt3() -> CycloNumber:
    # sqrt(3) = -i (zeta_3 - zeta_3^2)
    return -zeta(9) * (zeta3(1) - zeta3(2))


def inv_sqrt3() -> CycloNumber:
    return sqrt3() * Fraction(1, 3)


def format_poly(coeffs: Sequence) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else "z" if k == 1 else f"z^{k}"
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(("+ " if c > 0 else "- ") + body)
    return " ".join(terms) if terms else "0"


# --- matrices ------------------------------------------------------------

_LIMIT = 1 << 62


def _matvec_mul(a: np.ndarray, b: np.ndarray, contract_a: int, contract_b: int) -> np.ndarray:
    """Multiply cyclotomic tensors, contracting axis ``contract_a`` of a with ``contract_b`` of b.

    The coefficient axis is last in both inputs and in the output.
    """
    bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * DEG * a.shape[contract_a]
    if bound * DEG >= _LIMIT:
        raise OverflowError("coefficient growth exceeds int64 range")
    t = np.tensordot(a, MUL, axes=([a.ndim - 1], [0]))  # (..., q, s)
    # contract the chosen axis of a and b's coefficient axis against q
    t = np.moveaxis(t, contract_a, -3)  # (..., k, q, s)
    out = np.tensordot(t, b, axes=([t.ndim - 3, t.ndim - 2], [contract_b, b.ndim - 1]))
    # out axes: (a-rest..., s, b-rest...)
    s_axis = a.ndim - 2
    return np.moveaxis(out, s_axis, -1)


class UnitaryMatrix:
    """Dense exact matrix over Q(zeta_36): value = data / den."""

    __slots__ = ("data", "den")

    def __init__(self, data: np.ndarray, den: int = 1):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim != 3 or data.shape[2] != DEG:
            raise ValueError("data must have shape (rows, cols, 12)")
        if den < 1:
            raise ValueError("denominator must be positive")
        g = math.gcd(int(np.gcd.reduce(data.ravel())) if data.size else 0, den)
        if g > 1:
            data = data // g
            den //= g
        self.data = data
        self.den = int(den)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "UnitaryMatrix":
        d = np.zeros((dim, dim, DEG), dtype=np.int64)
        d[np.arange(dim), np.arange(dim), 0] = 1
        return cls(d)

    @classmethod
    def from_permutation(cls, table: Sequence[int]) -> "UnitaryMatrix":
        """Column x has a single 1 in row table[x]."""
        dim = len(table)
        d = np.zeros((dim, dim, DEG), dtype=np.int64)
        d[np.asarray(table), np.arange(dim), 0] = 1
        return cls(d)

    @classmethod
    def diagonal(cls, exps: Sequence[int]) -> "UnitaryMatrix":
        """diag(zeta_36 ** e) for each exponent."""
        dim = len(exps)
        d = np.zeros((dim, dim, DEG), dtype=np.int64)
        d[np.arange(dim), np.arange(dim)] = ZPOW[np.asarray(exps) % ORDER]
        return cls(d)

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[CycloNumber]]) -> "UnitaryMatrix":
        den = 1
        for row in rows:
            for x in row:
                for c in CycloNumber._wrap(x).coeffs:
                    den = den * c.denominator // math.gcd(den, c.denominator)
        d = np.array([[[int(c * den) for c in CycloNumber._wrap(x).coeffs] for x in row] for row in rows],
                     dtype=np.int64)
        return cls(d, den)

    def entry(self, i: int, j: int) -> CycloNumber:
        return CycloNumber([Fraction(int(v), self.den) for v in self.data[i, j]])

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("dimension mismatch")
        return UnitaryMatrix(_matvec_mul(self.data, other.data, 1, 0), self.den * other.den)

    def scale(self, lam: CycloNumber) -> "UnitaryMatrix":
        lm = UnitaryMatrix.from_entries([[lam]])
        vec = lm.data[0, 0]
        L = np.einsum("p,pqs->sq", vec, MUL)
        return UnitaryMatrix(np.einsum("sq,ijq->ijs", L, self.data), self.den * lm.den)

    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(np.einsum("sq,jiq->ijs", CONJ, self.data), self.den)

    def __eq__(self, other):
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data * other.den, other.data * self.den)

    __hash__ = None

    def is_identity(self) -> bool:
        return self == UnitaryMatrix.identity(self.dim)

    def is_unitary(self) -> bool:
        return (self @ self.dagger()).is_identity()

    def is_diagonal(self) -> bool:
        off = self.data.copy()
        off[np.arange(self.dim), np.arange(self.dim)] = 0
        return not off.any()

    def monomial(self) -> tuple[np.ndarray, np.ndarray] | None:
        """``(perm, k)`` when column x equals zeta_36**k[x] times e_perm[x], else None."""
        nz = self.data.any(axis=2)
        if not (nz.sum(axis=0) == 1).all():
            return None
        perm = nz.argmax(axis=0)
        vals = self.data[perm, np.arange(self.shape[1])]  # (cols, 12)
        match = (vals[:, None, :] == self.den * ZPOW[None, :, :]).all(axis=2)
        if not match.any(axis=1).all():
            return None
        return perm, match.argmax(axis=1)

    def format(self) -> str:
        k = 0
        while 3 ** (k + 1) <= self.den and self.den % 3 ** (k + 1) == 0:
            k += 1
        suffix = "" if self.den == 1 else f"/3^{k}" if 3**k == self.den else f"/{self.den}"
        lines = []
        for i in range(self.shape[0]):
            cells = []
            for j in range(self.shape[1]):
                v = self.data[i, j]
                cells.append("0" if not v.any() else f"({format_poly(v.tolist())}){suffix}")
            lines.append(" | ".join(cells))
        return "\n".join(lines)


# --- gate matrices -------------------------------------------------------


def _local_index(vals) -> int:
    return sum(v * 3 ** (len(vals) - 1 - k) for k, v in enumerate(vals))


@lru_cache(maxsize=None)
def diagonal_phases(gate: Gate, arity: int) -> np.ndarray:
    """zeta_36 exponents of a diagonal gate, indexed with the first wire most significant."""
    import itertools

    s = -1 if gate.inv else 1
    out = np.zeros(3**arity, dtype=np.int64)
    for vals in itertools.product(range(3), repeat=arity):
        n = gate.name
        if n == "Q":
            e = 12 * (vals[0] == 2)
        elif n == "Z":
            e = 12 * vals[0]
        elif n == "P9":
            e = 4 * (vals[0] - 1)
        elif n == "CZ":
            e = 12 * vals[0] * vals[1]
        elif n == "CZ2":
            e = 12 * vals[0] * vals[1] * vals[2]
        elif n == "C2Z":
            e = 12 * vals[1] * (vals[0] == gate.ctrl)
        elif n == "BARRIER":
            e = 0
        else:
            raise CircuitError(f"{gate} is not diagonal")
        out[_local_index(vals)] = (s * e) % ORDER
    out.setflags(write=False)
    return out


def _hadamard(inv: bool) -> UnitaryMatrix:
    r3 = sqrt3()
    rows = [[r3 * zeta3(j * k) * Fraction(1, 3) for k in range(3)] for j in range(3)]
    h = UnitaryMatrix.from_entries(rows)
    return h.dagger() if inv else h


def gate_matrix(kind: Gate, arity: int | None = None) -> UnitaryMatrix:
    """Exact matrix of a gate; rows and columns are indexed with the first wire most significant."""
    a = kind.arity if kind.arity is not None else (arity or 1)
    if kind.name == "H":
        return _hadamard(kind.inv)
    if kind.is_classical:
        return UnitaryMatrix.from_permutation(local_table(kind, a))
    return UnitaryMatrix.diagonal(diagonal_phases(kind, a))


DENSE_WIDTH_LIMIT = 4


def _apply_local(m: UnitaryMatrix, op: Op, width: int) -> UnitaryMatrix:
    """Left-multiply ``m`` (rows little-endian by wire) by the embedded gate."""
    g = op.gate
    a = len(op.wires)
    if g.name == "BARRIER":
        return m
    if g.is_classical:
        perm = _global_perm(op, width)
        data = np.empty_like(m.data)
        data[perm] = m.data
        return UnitaryMatrix(data, m.den)
    if g.is_diagonal:
        ph = diagonal_phases(g, a)
        st = all_states(width)[:, list(op.wires)].astype(np.int64)
        e = ph[st @ (3 ** np.arange(a - 1, -1, -1))]
        return UnitaryMatrix(np.einsum("xsq,xcq->xcs", ZMUL[e], m.data), m.den)
    gm = gate_matrix(g, a)
    cols = m.shape[1]
    t = m.data.reshape((3,) * width + (cols, DEG))
    axes = [width - 1 - w for w in op.wires]
    t = np.moveaxis(t, axes, list(range(a)))
    rest = t.shape[a:-1]
    t = t.reshape((3**a, -1, DEG))
    out = _matvec_mul(gm.data, t, 1, 0)  # (3^a, R, 12)
    out = out.reshape((3,) * a + rest + (DEG,))
    out = np.moveaxis(out, list(range(a)), axes)
    return UnitaryMatrix(out.reshape(3**width, cols, DEG), m.den * gm.den)


def _global_perm(op: Op, width: int) -> np.ndarray:
    st = all_states(width)
    out = simulate(Circuit(width, [op]), st)
    return out.astype(np.int64) @ (3 ** np.arange(width, dtype=np.int64))


def circuit_matrix(c: Circuit, max_width: int = DENSE_WIDTH_LIMIT) -> UnitaryMatrix:
    """Exact unitary of ``c``; basis states indexed little-endian by wire, as in the simulator."""
    if c.width > max_width:
        raise ValueError(f"width {c.width} exceeds the dense limit {max_width}")
    m = UnitaryMatrix.identity(3**c.width)
    for op in c.ops:
        m = _apply_local(m, op, c.width)
    return m


def to_big_endian(m: UnitaryMatrix, width: int) -> UnitaryMatrix:
    """Reorder a little-endian circuit matrix so wire 0 is the most significant digit."""
    idx = np.arange(3**width).reshape((3,) * width).transpose(tuple(range(width - 1, -1, -1))).ravel()
    return UnitaryMatrix(m.data[np.ix_(idx, idx)], m.den)


def equal_up_to_global_phase(m1: UnitaryMatrix, m2: UnitaryMatrix) -> tuple[bool, CycloNumber | None]:
    if m1.shape != m2.shape:
        return False, None
    nz1, nz2 = m1.data.any(axis=2), m2.data.any(axis=2)
    if not np.array_equal(nz1, nz2):
        return False, None
    if not nz2.any():
        return True, CycloNumber([1])
    p = np.unravel_index(int(np.argmax(nz2)), nz2.shape)
    a, b = m1.data[p], m2.data[p]
    # m1 = lam * m2 with lam = a/b  <=>  m1 * b == m2 * a entrywise
    lb = np.einsum("p,pqs->sq", b, MUL)
    la = np.einsum("p,pqs->sq", a, MUL)
    if not np.array_equal(np.einsum("sq,ijq->ijs", lb, m1.data), np.einsum("sq,ijq->ijs", la, m2.data)):
        return False, None
    return True, m1.entry(*p) / m2.entry(*p)


def diagonal_exponents(m: UnitaryMatrix) -> np.ndarray:
    """Exponents ``e`` (mod 9) with ``m = lam * diag(zeta_9 ** e)`` and ``e[0] = 0``.

    Raises NotRepresentable if some ratio of diagonal entries is not a power of zeta_9.
    """
    if m.shape[0] != m.shape[1] or not m.is_diagonal():
        raise ValueError("matrix is not diagonal")
    d = m.data[np.arange(m.dim), np.arange(m.dim)]  # (dim, 12)
    if not d[0].any():
        raise NotRepresentable("zero diagonal entry")
    # candidates: d0 * zeta_9^e for e = 0..8
    cand = np.einsum("esq,q->es", ZMUL[4 * np.arange(9)], d[0])
    match = (d[:, None, :] == cand[None, :, :]).all(axis=2)
    bad = np.nonzero(~match.any(axis=1))[0]
    if len(bad):
        raise NotRepresentable(f"entry {int(bad[0])} is not a zeta_9 multiple of the first entry")
    return match.argmax(axis=1).astype(np.int64)


# --- monomial simulation --------------------------------------------------


@dataclass
class MonomialAction:
    """Basis state x goes to zeta_36**phase[x] |perm(x)>."""

    perm: Permutation
    phase: np.ndarray

    def global_phase(self) -> int | None:
        """The common zeta_36 exponent when the action is a pure permutation up to phase."""
        ph = self.phase % ORDER
        return int(ph[0]) if (ph == ph[0]).all() else None


def monomial_action(c: Circuit, window_limit: int = 5) -> MonomialAction:
    """Simulate a circuit whose overall action maps basis states to phased basis states.

    Classical and diagonal gates are tracked directly. A non-monomial gate opens a
    dense window over the wires it touches; the window grows until its product is
    monomial again, then it is folded back in.
    """
    w = c.width
    st = all_states(w)
    phase = np.zeros(len(st), dtype=np.int64)
    window: list[Op] = []
    wwires: list[int] = []
    dense: UnitaryMatrix | None = None

    def local_op(op):
        return Op(op.gate, tuple(wwires.index(q) for q in op.wires))

    def flush():
        nonlocal st, phase, window, wwires, dense
        perm, ks = dense.monomial()
        k = len(wwires)
        loc = st[:, wwires].astype(np.int64) @ (3 ** np.arange(k, dtype=np.int64))
        img = perm[loc]
        phase = phase + ks[loc]
        for j, q in enumerate(wwires):
            st[:, q] = (img // 3**j) % 3
        window, wwires, dense = [], [], None

    for op in c.ops:
        g = op.gate
        if dense is None:
            if g.is_classical:
                st = simulate(Circuit(w, [op]), st)
                continue
            if g.is_diagonal:
                a = len(op.wires)
                loc = st[:, list(op.wires)].astype(np.int64) @ (3 ** np.arange(a - 1, -1, -1))
                phase = phase + diagonal_phases(g, a)[loc]
                continue
        new = [q for q in op.wires if q not in wwires]
        window.append(op)
        if new:
            wwires = wwires + new
            if len(wwires) > window_limit:
                raise ValueError(f"dense window would exceed {window_limit} wires")
            dense = circuit_matrix(Circuit(len(wwires), [local_op(o) for o in window]), window_limit)
        else:
            dense = _apply_local(dense, local_op(op), len(wwires))
        if dense.monomial() is not None:
            flush()
    if dense is not None:
        raise ValueError("circuit does not act monomially on the basis")
    return MonomialAction(Permutation(w, st.astype(np.int64) @ (3 ** np.arange(w, dtype=np.int64))),
                          phase % ORDER)
