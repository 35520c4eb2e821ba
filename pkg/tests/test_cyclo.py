from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ternarith.circuit import CZ, H, H_INV, P9, SUM, SUM_INV, Circuit, Op, cx
from ternarith.cyclo import (
    CycloNumber, NotRepresentable, UnitaryMatrix, circuit_matrix, diagonal_exponents, equal_up_to_global_phase,
    gate_matrix, inv_sqrt3, monomial_action, sqrt3, to_big_endian, zeta, zeta3, zeta9,
)
from ternarith.permsim import permutation_of

coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=12, max_size=12)


def test_roots_of_unity():
    assert zeta(36) == CycloNumber([1])
    assert zeta9(9) == CycloNumber([1])
    assert zeta3(1) ** 3 == CycloNumber([1])
    assert zeta(9) * zeta(9) == CycloNumber([-1])  # i^2
    assert sqrt3() * sqrt3() == CycloNumber([3])
    assert inv_sqrt3() * sqrt3() == CycloNumber([1])


@given(coeffs, coeffs, coeffs)
def test_field_laws(a, b, c):
    x, y, z = CycloNumber(a), CycloNumber(b), CycloNumber(c)
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    if not x.is_zero():
        assert x * x.inverse() == CycloNumber([1])


def test_zeta_exponent():
    assert zeta9(-2).zeta_exponent() == (-8) % 36
    assert CycloNumber([Fraction(1, 2)]).zeta_exponent() is None


def test_gate_matrices():
    m = gate_matrix(cx(2))
    for row in range(9):
        i, j = divmod(row, 3)
        for col in range(9):
            ci, cj = divmod(col, 3)
            want = int(ci == i and (cj + (ci == 2)) % 3 == j)
            assert m.entry(row, col) == CycloNumber([want])
    p9 = gate_matrix(P9)
    assert [p9.entry(k, k) for k in range(3)] == [zeta9(-1), CycloNumber([1]), zeta9(1)]


def test_hadamard_is_unitary_and_invertible():
    assert circuit_matrix(Circuit(1, [Op(H, (0,)), Op(H_INV, (0,))])).is_identity()
    assert gate_matrix(H).is_unitary()


def test_sum_conjugated_by_fourier_is_cz():
    c = Circuit(2, [Op(H_INV, (1,)), Op(SUM, (0, 1)), Op(H, (1,))])
    ok, lam = equal_up_to_global_phase(circuit_matrix(c), circuit_matrix(Circuit(2, [Op(CZ, (0, 1))])))
    assert ok and lam == CycloNumber([1])


def test_equal_up_to_global_phase():
    m = circuit_matrix(Circuit(2, [Op(SUM, (0, 1)), Op(H, (0,))]))
    assert equal_up_to_global_phase(m, m) == (True, CycloNumber([1]))
    ok, lam = equal_up_to_global_phase(m.scale(zeta9(-2)), m)
    assert ok and lam == zeta9(-2)
    cz = circuit_matrix(Circuit(2, [Op(CZ, (0, 1))]))
    assert equal_up_to_global_phase(cz, UnitaryMatrix.identity(9)) == (False, None)


def test_diagonal_exponents():
    cz = circuit_matrix(Circuit(2, [Op(CZ, (0, 1))]))
    e = diagonal_exponents(cz)
    for x in range(9):
        i, j = x % 3, x // 3
        assert e[x] == 3 * i * j % 9
    assert not diagonal_exponents(UnitaryMatrix.identity(3)).any()
    with pytest.raises(NotRepresentable):
        diagonal_exponents(UnitaryMatrix.diagonal([0, 0, 18]))


def test_big_endian_reorder_matches_gate_matrix():
    c = Circuit(2, [Op(cx(2), (0, 1))])
    assert to_big_endian(circuit_matrix(c), 2) == gate_matrix(cx(2))


def test_permutation_matrix_and_monomial():
    c = Circuit(3, [Op(SUM, (0, 1)), Op(SUM_INV, (2, 0)), Op(CZ, (1, 2))])
    m = circuit_matrix(c)
    perm, _ = m.monomial()
    assert np.array_equal(perm, permutation_of(Circuit(3, c.ops[:2])).mapping)
    act = monomial_action(c)
    assert act.perm.mapping.tolist() == perm.tolist()


def test_monomial_action_closes_windows():
    c = Circuit(2, [Op(H, (1,)), Op(cx(0), (0, 1)), Op(H_INV, (1,))])
    # a phase gate in disguise: conjugating an increment gives a diagonal
    act = monomial_action(c)
    assert act.perm.is_identity()
    with pytest.raises(ValueError):
        monomial_action(Circuit(1, [Op(H, (0,))]))
