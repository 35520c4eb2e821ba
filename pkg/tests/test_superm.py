import itertools

import numpy as np
import pytest

from ternarith import adders
from ternarith.circuit import CZ, CZ2, HORNER, P9, Circuit, Gate, Op, c2z, cx
from ternarith.cxlower import lower_to_cx
from ternarith.cyclo import NotRepresentable, circuit_matrix, diagonal_exponents, equal_up_to_global_phase
from ternarith.superm import (
    EQ8_TERMS, AffineFn, PhasePolynomial, clifford_part, eq8_exponent, eq8_polynomial, lower_to_superm,
    minimal_phase_polynomial, normalize, p9_count, random_phase_polynomial, same_permutation_up_to_phase,
    solve_affine_decomposition, solve_diagonal, square_identity, superm_template, synthesize_diagonal,
    synthesize_gate, target_exponents, verify_superm_template,
)


def test_affine_fn_values():
    f = AffineFn((1, 2), 1)
    assert f.values().tolist() == [(x0 + 2 * x1 + 1) % 3 for x1 in range(3) for x0 in range(3)]
    assert AffineFn((0, 0), 2).is_constant and str(AffineFn((1, 2), 1)) == "1+x0+2x1"


def test_solver_is_sound_on_random_tables():
    rng = np.random.default_rng(2024)
    for trial in range(120):
        n = 1 + trial % 3
        p = random_phase_polynomial(n, rng)
        e = p.exponents()
        sol = solve_affine_decomposition(e)
        assert np.array_equal(sol.exponents(), e)
        assert np.array_equal(normalize(sol).exponents(), e)


def test_normalize_leaves_unit_residues():
    p = normalize(solve_affine_decomposition(eq8_polynomial().exponents()))
    assert set(p.affine_terms.values()) <= {1, 8}
    raw = normalize(eq8_polynomial())
    assert [raw.affine_terms.get(AffineFn(lin, d), 0) for _, lin, d in EQ8_TERMS] == [1, 8, 0, 8, 0, 1, 0]


def test_cz_needs_no_p9():
    e = target_exponents(CZ)
    p = solve_affine_decomposition(e)
    assert all(a % 3 == 0 for a in p.affine_terms.values())
    assert normalize(p).p9_count == 0
    assert clifford_part(e, 2) == ({(0, 1): 1}, 0)


def test_identity_is_empty():
    p = minimal_phase_polynomial(np.zeros(9, dtype=np.int64))
    assert p.p9_count == 0 and not synthesize_diagonal(p).ops


def test_out_of_lattice():
    with pytest.raises(NotRepresentable):
        solve_affine_decomposition(np.array([0, 1, 0]))  # a ninth root on a single basis state
    with pytest.raises(ValueError):
        solve_affine_decomposition(np.zeros(4))


def test_eq8_and_square_identities():
    for i, j, k in itertools.product(range(3), repeat=3):
        assert eq8_exponent(i, j, k) == 3 * i * j * k % 9
    assert all(lhs == rhs for _, lhs, rhs in square_identity())


@pytest.mark.parametrize("kind,count", [(CZ2, 4), (c2z(0), 3), (c2z(1), 3), (c2z(2), 3)], ids=str)
def test_synthesized_diagonals(kind, count):
    c = synthesize_gate(kind)
    assert p9_count(c) == count
    target = circuit_matrix(Circuit(kind.arity, [Op(kind, tuple(range(kind.arity)))]))
    ok, _ = equal_up_to_global_phase(circuit_matrix(c), target)
    assert ok


def test_cz2_solver_bound_is_looser():
    assert normalize(solve_affine_decomposition(target_exponents(CZ2))).p9_count == 8


def test_synthesis_of_random_polynomials():
    rng = np.random.default_rng(7)
    for _ in range(20):
        p = random_phase_polynomial(2, rng)
        c = synthesize_diagonal(normalize(p))
        d = diagonal_exponents(circuit_matrix(c))
        assert np.array_equal((d - d[0]) % 9, (p.exponents() - p.exponents()[0]) % 9)


@pytest.mark.parametrize("kind", [cx(0), cx(1), cx(2), HORNER, Gate("HORNER", True), cx(1, True)], ids=str)
def test_fourier_templates(kind):
    ok, lam = verify_superm_template(kind)
    assert ok
    if kind.name == "HORNER":
        assert lam is not None


def test_lowered_ripple_through_both_bases():
    c, _ = adders.build_ripple_adder(2)
    low = lower_to_superm(lower_to_cx(c))
    assert {g.name for g in low.gates() if not g.is_clifford} == {"P9"}
    assert same_permutation_up_to_phase(c, low)


def test_solve_diagonal_of_matrix():
    m = circuit_matrix(Circuit(2, [Op(CZ, (0, 1)), Op(P9, (1,))]))
    p = solve_diagonal(m)
    d = diagonal_exponents(m)
    assert np.array_equal(p.exponents(), d)
