import numpy as np
import pytest

from ternarith import extensions as ext
from ternarith.circuit import resource_report
from ternarith.contracts import add_mod_oracle, cmp_oracle, sub_oracle
from ternarith.permsim import Sampled, check_against_oracle, simulate
from ternarith.trits import from_trits, to_trits


def evaluate(c, regs, **vals):
    row = [0] * c.width
    for role, v in vals.items():
        for w, t in zip(regs[role], to_trits(v, len(regs[role]))):
            row[w] = t
    out = simulate(c, np.array([row]))[0]
    return {r: from_trits([int(out[w]) for w in regs[r]]) for r in regs.result}


def test_mod_examples():
    c, regs = ext.build_ripple_mod_adder(2)
    assert evaluate(c, regs, A=8, B=1) == {"B": 0}
    c, regs = ext.build_cla_mod_adder(3)
    assert evaluate(c, regs, A=20, B=10) == {"Z": 3}


@pytest.mark.parametrize("variant", ["out_of_place", "in_place"])
def test_cla_mod_exhaustive(variant):
    for n in (1, 2, 3):
        c, regs = ext.build_cla_mod_adder(n, variant)
        assert check_against_oracle(c, regs, add_mod_oracle(regs, n)).passed


def test_mod_resources():
    for n in (2, 3, 5, 10, 11):
        r = resource_report(ext.build_cla_mod_adder(n)[0])
        assert r.non_clifford_count == ext.cla_mod_out_of_place_count(n)
        assert r.non_clifford_depth <= ext.cla_mod_out_of_place_depth_bound(n)
    assert resource_report(ext.build_cla_mod_adder(10)[0]).non_clifford_count == 36
    assert resource_report(ext.build_cla_mod_adder(10, "in_place")[0]).non_clifford_depth == 20
    assert resource_report(ext.build_ripple_mod_adder(4)[0]).non_clifford_count == 4 * 3


def test_subtractor_examples():
    c, regs = ext.build_subtractor(3)
    assert evaluate(c, regs, A=5, B=7) == {"B": 27 - 2}
    c, regs = ext.build_subtractor(3, borrow=True)
    assert evaluate(c, regs, A=5, B=7) == {"B": 25, "OVF": 1}
    assert evaluate(c, regs, A=7, B=5) == {"B": 2, "OVF": 0}


@pytest.mark.parametrize("method,variant", [("ripple", "in_place"), ("cla", "in_place"), ("cla", "out_of_place")])
@pytest.mark.parametrize("borrow", [False, True])
def test_subtractor_exhaustive(method, variant, borrow):
    for n in (1, 2, 3):
        c, regs = ext.build_subtractor(n, method, borrow, variant)
        assert check_against_oracle(c, regs, sub_oracle(regs, n, borrow)).passed, (n, method, variant, borrow)


def test_subtractor_costs_what_the_adder_costs():
    from ternarith import adders
    for n in (2, 4, 6):
        sub = resource_report(ext.build_subtractor(n, "cla", True)[0]).non_clifford_count
        assert sub == adders.in_place_count(n)


def test_unknown_method():
    with pytest.raises(ValueError):
        ext.build_subtractor(2, method="bogus")
    with pytest.raises(ValueError):
        ext.build_cla_mod_adder(2, variant="bogus")


@pytest.mark.parametrize("build", [ext.build_ripple_comparator, ext.build_cla_comparator])
def test_comparator_exhaustive(build):
    for n in (1, 2, 3):
        c, regs = build(n)
        assert check_against_oracle(c, regs, cmp_oracle(regs, n)).passed


def test_comparators_agree_when_sampled():
    for build in (ext.build_ripple_comparator, ext.build_cla_comparator):
        c, regs = build(6)
        assert check_against_oracle(c, regs, cmp_oracle(regs, 6), mode=Sampled(300, seed=5)).passed


def test_comparator_examples():
    for build in (ext.build_ripple_comparator, ext.build_cla_comparator):
        c, regs = build(3)
        assert evaluate(c, regs, A=4, B=9) == {"R": 1}
        assert evaluate(c, regs, A=9, B=9) == {"R": 0}
        assert evaluate(c, regs, A=26, B=0) == {"R": 0}


def test_cla_comparator_resources():
    r = resource_report(ext.build_cla_comparator(10)[0])
    assert (r.non_clifford_count, r.non_clifford_depth, r.ancilla_count) == (44, 12, 28)
    for n in range(1, 20):
        r = resource_report(ext.build_cla_comparator(n)[0])
        assert r.non_clifford_count == ext.cla_comparator_count(n)
        assert r.non_clifford_depth <= ext.cla_comparator_depth(n)
        assert r.ancilla_count == ext.cla_comparator_ancillas(n)


def test_ripple_comparator_resources():
    r = resource_report(ext.build_ripple_comparator(5)[0])
    assert r.non_clifford_count == 4 * 5 and r.ancilla_count == 1


@pytest.mark.parametrize("a,b,diff,borrow", [(7, 5, 2, 0), (3, 5, 7, 1)])
def test_subtractor_small(a, b, diff, borrow):
    for method in ("ripple", "cla"):
        c, regs = ext.build_subtractor(2, method, borrow=True)
        assert evaluate(c, regs, A=a, B=b) == {"B": diff, "OVF": borrow}


def test_subtract_then_add_returns_a():
    for n in (1, 2, 3):
        sub = ext.subtractor_program(n)
        add = ext.ripple_mod_program(n)
        assert sub.registers.roles == add.registers.roles
        # feed a - b back into the adder's A register alongside b
        for a in range(3**n):
            for b in range(3**n):
                d = evaluate(sub.circuit(), sub.registers, A=a, B=b)["B"]
                assert evaluate(add.circuit(), add.registers, A=d, B=b) == {"B": a}


def test_ripple_mod_structure():
    for n in range(2, 7):
        counts = ext.ripple_mod_program(n).counts()
        assert counts["carry"] == counts["carry_inv"] == n - 1
        assert counts["SUM"] == 2 * n - 1
        r = resource_report(ext.build_ripple_mod_adder(n)[0])
        assert r.non_clifford_depth == 4 * (n - 1) and r.ancilla_count == 1


def test_ripple_comparator_structure():
    for n in range(1, 6):
        p = ext.ripple_comparator_program(n)
        counts = p.counts()
        assert counts["carry"] == counts["carry_inv"] == n
        assert counts["SUM"] == 1 and counts["S02"] == 2 * n
        assert resource_report(p.circuit()).non_clifford_depth == 4 * n


def test_cla_comparator_merges():
    from ternarith.trits import binary_weight, ceil_log2
    assert ext.cla_comparator_merges(10) == 11
    for n in range(1, 33):
        assert ext.cla_comparator_merges(n) == n + binary_weight((1 << ceil_log2(n)) - n) - 1


@pytest.mark.parametrize("a,b,r", [(5, 3, 0), (3, 5, 1)])
def test_comparator_small(a, b, r):
    for build in (ext.build_ripple_comparator, ext.build_cla_comparator):
        c, regs = build(2)
        assert evaluate(c, regs, A=a, B=b) == {"R": r}
