import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ternarith import adders
from ternarith.circuit import CPX, H, HORNER, SUM, SWAP2, X, Circuit, Op, RegisterMap, S12
from ternarith.contracts import add_oracle
from ternarith.permsim import (
    EXHAUSTIVE, AffineGate, NotClassicalError, Permutation, Sampled, StateBoundError, affine_generators,
    affine_group_order, apply_classical, check_against_oracle, closure, decompose_affine, is_affine,
    permutation_of, random_affine,
)


def test_apply_classical_examples():
    assert apply_classical(Circuit(3, [Op(HORNER, (0, 1, 2))]), [1, 2, 0]) == [1, 2, 2]
    assert apply_classical(Circuit(2, [Op(CPX, (0, 1))]), [2, 0]) == [2, 1]
    assert apply_classical(Circuit(1, [Op(X, (0,))]), [2]) == [0]


def test_non_classical_gate_reported_with_index():
    c = Circuit(1, [Op(X, (0,)), Op(H, (0,))])
    with pytest.raises(NotClassicalError) as err:
        apply_classical(c, [0])
    assert err.value.index == 1
    assert "not a permutation circuit" in str(err.value)


def test_permutation_examples():
    assert permutation_of(Circuit(2, [])).is_identity()
    assert permutation_of(Circuit(2, [Op(SWAP2, (0, 1))])).moved() == [0, 8]


def test_permutation_algebra():
    p = permutation_of(Circuit(2, [Op(SUM, (0, 1)), Op(X, (0,))]))
    assert p.then(p.inverse()).is_identity()
    assert p.inverse().inverse() == p
    assert Permutation.identity(2).then(p) == p


def test_state_bound(monkeypatch):
    monkeypatch.setenv("TERNARY_MAX_STATES", "100")
    with pytest.raises(StateBoundError):
        permutation_of(Circuit(5, []))


def test_ripple_n2_exhaustive():
    c, regs = adders.build_ripple_adder(2)
    rep = check_against_oracle(c, regs, add_oracle(regs, 2))
    assert rep.passed and rep.cases == 81 * 2


def test_mutation_is_caught_with_a_counterexample():
    c, regs = adders.build_ripple_adder(2)
    drop = next(i for i, op in enumerate(c.ops) if op.gate == SUM)
    broken = Circuit(c.width, c.ops[:drop] + c.ops[drop + 1:], regs)
    rep = check_against_oracle(broken, regs, add_oracle(regs, 2))
    assert not rep.passed
    ce = rep.counterexample
    assert ce["expected"] != ce["got"]
    assert "FAIL" in rep.describe(regs) and "input" in rep.describe(regs)


def test_ancilla_must_return_to_its_value():
    # X on an ancilla: wrong even though the oracle ignores nothing else
    regs = RegisterMap({"A": (0,), "T": (1,)}, init={"T": 0}, ancillas=("T",), result=("A",))
    c = Circuit(2, [Op(X, (1,))], regs)
    assert not check_against_oracle(c, regs, lambda v: {"A": v["A"]}).passed
    assert check_against_oracle(c, regs, lambda v: {"A": v["A"]}, unconstrained=("T",)).passed


def test_empty_domain_rejected():
    regs = RegisterMap({"A": (0,)})
    with pytest.raises(ValueError):
        check_against_oracle(Circuit(1, []), regs, lambda v: {}, domain={"A": []})


def test_sampled_mode_is_seeded():
    c, regs = adders.build_ripple_adder(4)
    a = check_against_oracle(c, regs, add_oracle(regs, 4), mode=Sampled(300, seed=11))
    assert a.passed and a.cases == 300
    with pytest.raises(StateBoundError):
        big, bregs = adders.build_cla_in_place(8)
        check_against_oracle(big, bregs, add_oracle(bregs, 8), mode=EXHAUSTIVE)


def test_affine_recognition_column_convention():
    g = is_affine(permutation_of(Circuit(2, [Op(SUM, (0, 1))])))
    assert g.A.tolist() == [[1, 0], [1, 1]] and g.v.tolist() == [0, 0]
    gx = is_affine(permutation_of(Circuit(2, [Op(X, (0,))])))
    assert gx.A.tolist() == [[1, 0], [0, 1]] and gx.v.tolist() == [1, 0]
    assert is_affine(permutation_of(Circuit(3, [Op(HORNER, (0, 1, 2))]))) is None


def test_decompose_small_cases():
    assert [op.gate for op in decompose_affine(AffineGate(np.array([[2]]), np.array([0]))).ops] == [S12]
    c = decompose_affine(AffineGate(np.eye(2, dtype=int), np.array([1, 0])))
    assert c.ops == (Op(X, (0,)),)
    with pytest.raises(ValueError):
        decompose_affine(AffineGate(np.array([[1, 1], [2, 2]]), np.zeros(2, dtype=int)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_decompose_round_trip(n, seed):
    g = random_affine(n, np.random.default_rng(seed))
    assert is_affine(permutation_of(decompose_affine(g))) == g


def test_group_orders():
    assert affine_group_order(1) == 6
    assert affine_group_order(2) == 432
    assert len(closure(affine_generators(1))) == 6
