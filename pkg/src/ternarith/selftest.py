"""Built-in identity and template checks, shared by ``ternarith selftest`` and the tests."""

from __future__ import annotations

import itertools

import numpy as np

from . import adders
from .circuit import CZ2, HORNER, Circuit, Op, c2z, cx, resource_report
from .cxlower import s0110_circuit, verify_all_templates
from .cyclo import NotRepresentable, UnitaryMatrix, circuit_matrix, diagonal_exponents, equal_up_to_global_phase
from .permsim import affine_generators, affine_group_order, closure, permutation_of, simulate
from .superm import eq8_exponent, p9_count, square_identity, synthesize_gate, verify_superm_template
from .trits import carry_polynomial, carry_threshold, identity_eq2, identity_eq3


def carry_semantics() -> bool:
    """Threshold table, polynomial and the Carry block agree on all 18 inputs with cin in {0, 1}."""
    c = adders.build_carry()
    r = resource_report(c)
    if r.non_clifford_count != 2 or r.non_clifford_depth != 2:
        return False
    for cin, a, b in itertools.product(range(2), range(3), range(3)):
        out = simulate(c, np.array([[cin, a, b]]))[0]
        want = carry_threshold(a, b, cin)
        if carry_polynomial(a, b, cin) != want or out[2] != want:
            return False
    return len(set(permutation_of(c).mapping.tolist())) == 27


def summation_identities() -> bool:
    return all(identity_eq2(n)[0] == identity_eq2(n)[1] and identity_eq3(n)[0] == identity_eq3(n)[1]
               for n in range(1, 65))


def seven_term_solution() -> bool:
    return all(eq8_exponent(i, j, k) == 3 * i * j * k % 9 for i, j, k in itertools.product(range(3), repeat=3))


def square_term_identity() -> bool:
    return all(lhs == rhs for _, lhs, rhs in square_identity())


def two_way_swap() -> bool:
    return permutation_of(s0110_circuit()).moved() == [1, 3]


def templates() -> bool:
    return all(r.passed for r in verify_all_templates())


def _matches(kind) -> bool:
    target = circuit_matrix(Circuit(kind.arity, [Op(kind, tuple(range(kind.arity)))]))
    return equal_up_to_global_phase(circuit_matrix(synthesize_gate(kind)), target)[0]


def diagonal_synthesis() -> bool:
    return (p9_count(synthesize_gate(CZ2)) == 4 and _matches(CZ2)
            and all(p9_count(synthesize_gate(c2z(c))) == 3 and _matches(c2z(c)) for c in range(3)))


def fourier_conjugation() -> bool:
    return all(verify_superm_template(k)[0] for k in (cx(0), cx(1), cx(2), HORNER))


def affine_closure() -> bool:
    return all(len(closure(affine_generators(n))) == affine_group_order(n) for n in (1, 2))


def lattice_guard() -> bool:
    try:
        diagonal_exponents(UnitaryMatrix.diagonal([0, 0, 18]))
    except NotRepresentable:
        return True
    return False


def network_counts() -> bool:
    for n in range(1, 33):
        c, regs = adders.build_carry_network(n)
        r = resource_report(c)
        if (r.non_clifford_count != adders.network_count(n) or r.ancilla_count != adders.network_ancillas(n)
                or r.non_clifford_depth > adders.network_depth_bound(n)):
            return False
    return True


CHECKS = (
    ("carry table, polynomial and Carry block agree", carry_semantics),
    ("floor-sum identities for n = 1..64", summation_identities),
    ("seven-term P9 solution equals 3ijk mod 9", seven_term_solution),
    ("square term identity with phase zeta_9^-2", square_term_identity),
    ("CX[2] circuit swaps |01> and |10> only", two_way_swap),
    ("Clifford+CX templates", templates),
    ("CZ2 with 4 P9 and C2Z with 3 P9", diagonal_synthesis),
    ("H-conjugated CX and Horner", fourier_conjugation),
    ("affine closure orders 6 and 432", affine_closure),
    ("diag(1,1,-1) is outside the lattice", lattice_guard),
    ("carry network counts for n = 1..32", network_counts),
)


def run_checks() -> list[tuple[str, bool]]:
    return [(name, bool(fn())) for name, fn in CHECKS]

