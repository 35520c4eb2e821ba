"""End-to-end acceptance checks, one test per criterion.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from ternarith import adders, extensions
from ternarith.circuit import CPX, CZ2, HORNER, SWAP2, Circuit, Op, c2z, csum, cx, resource_report
from ternarith.contracts import add_mod_oracle, add_oracle, cmp_oracle, sub_oracle
from ternarith.cxlower import lower_to_cx, s0110_circuit, verify_all_templates
from ternarith.cyclo import NotRepresentable, UnitaryMatrix, circuit_matrix, diagonal_exponents, \
    equal_up_to_global_phase, gate_matrix, to_big_endian, zeta9
from ternarith.permsim import (
    Sampled, affine_generators, affine_group_order, check_against_oracle, closure, decompose_affine,
    is_affine, permutation_of, random_affine, simulate,
)
from ternarith.superm import (
    eq8_exponent, p9_count, solve_diagonal, square_identity, superm_template, synthesize_gate,
    verify_superm_template,
)
from ternarith.trits import (
    binary_weight, carry_polynomial, carry_threshold, ceil_log2, floor_log2, identity_eq2, identity_eq3,
)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _gate_circuit(kind):
    return Circuit(kind.arity, [Op(kind, tuple(range(kind.arity)))])


@pytest.mark.criterion(1, "carry table, polynomial and Carry block agree; 2 non-Clifford gates, depth 2")
def test_carry_semantics():
    with Timer() as t:
        block = adders.build_carry()
        cases = 0
        for c, a, b in itertools.product((0, 1), range(3), range(3)):
            table = carry_threshold(a, b, c)
            poly = carry_polynomial(a, b, c)
            assert poly == (2 * (1 + a + b + c) * (a * b + a * c + b * c) + a * b * c) % 3
            out = simulate(block, np.array([[c, a, b]]))[0]
            assert table == poly == out[2]
            cases += 1
        assert cases == 18
        perm = permutation_of(block)
        assert sorted(perm.mapping.tolist()) == list(range(27))
        r = resource_report(block)
        assert r.non_clifford_count == 2
        assert r.non_clifford_depth == 2
    assert t.elapsed < 1


@pytest.mark.criterion(2, "ripple adder exhaustive n=1..5, cin in {0,1}; n C + n C^-1, depth 4n")
def test_ripple_adder():
    with Timer() as t:
        for n in range(1, 6):
            c, regs = adders.build_ripple_adder(n)
            rep = check_against_oracle(c, regs, add_oracle(regs, n))
            assert rep.passed, rep.describe(regs)
            assert rep.cases == 9**n * 2
        assert rep.cases == 118_098
        for n in range(1, 9):
            prog = adders.ripple_adder_program(n)
            counts = prog.counts()
            assert counts["carry"] == n and counts["carry_inv"] == n
            assert resource_report(prog.circuit()).non_clifford_depth == 4 * n
            assert resource_report(prog.circuit()).ancilla_count == 1
            # a carry-in of 1 costs one more SUM than the adder with c0 fixed to 0
            assert counts["SUM"] == 2 * n + 1
            fixed = adders.ripple_adder_program(n, carry_in=False)
            fc = fixed.counts()
            assert fc["carry"] == n and fc["carry_inv"] == n and fc["SUM"] == 2 * n
            assert resource_report(fixed.circuit()).non_clifford_depth == 4 * n
            if n <= 5:
                fcirc = fixed.circuit()
                assert check_against_oracle(fcirc, fixed.registers, add_oracle(fixed.registers, n)).passed
    assert t.elapsed < 30


@pytest.mark.criterion(3, "carry network merge counts, ancillas and depth for n=1..32")
def test_carry_network():
    for n in range(1, 33):
        c, regs = adders.build_carry_network(n)
        r = resource_report(c)
        assert r.non_clifford_count == 3 * n - 2 * binary_weight(n) - 2 * floor_log2(n) - 1
        assert r.ancilla_count == n - binary_weight(n) - floor_log2(n)
        assert r.non_clifford_depth <= adders.network_depth_bound(n)
    c10, _ = adders.build_carry_network(10)
    assert resource_report(c10).non_clifford_depth == adders.network_depth_bound(10) == 6


@pytest.mark.criterion(4, "out-of-place CLA exhaustive n=1..5; n=10 ancillas 5, depth 10, count 41")
def test_out_of_place_cla():
    with Timer() as t:
        for n in range(1, 6):
            c, regs = adders.build_cla_out_of_place(n)
            rep = check_against_oracle(c, regs, add_oracle(regs, n))
            assert rep.passed, rep.describe(regs)
        r = resource_report(adders.build_cla_out_of_place(10)[0])
        assert r.ancilla_count == 5
        assert r.non_clifford_depth == 10
        assert r.non_clifford_count == 41 == adders.out_of_place_count(10)
    assert t.elapsed < 60


@pytest.mark.criterion(5, "in-place CLA exhaustive n=1..5 with ancillas cleared; n=10 count 77, depth 20")
def test_in_place_cla():
    with Timer() as t:
        for n in range(1, 6):
            c, regs = adders.build_cla_in_place(n)
            assert "Z" in regs.ancillas and "X" in regs.ancillas and "A" not in regs.result
            rep = check_against_oracle(c, regs, add_oracle(regs, n))
            assert rep.passed, rep.describe(regs)
        r = resource_report(adders.build_cla_in_place(10)[0])
        assert r.non_clifford_count == 77 == adders.in_place_count(10)
        assert r.non_clifford_depth == 20 == adders.in_place_depth_bound(10)
    assert t.elapsed < 60


@pytest.mark.criterion(6, "mod adders, subtractors and comparators exhaustive n=1..5; comparator resources")
def test_extensions():
    with Timer() as t:
        for n in range(1, 6):
            builds = [
                (extensions.build_ripple_mod_adder(n), add_mod_oracle, {}),
                (extensions.build_cla_mod_adder(n, "out_of_place"), add_mod_oracle, {}),
                (extensions.build_cla_mod_adder(n, "in_place"), add_mod_oracle, {}),
                (extensions.build_ripple_comparator(n), cmp_oracle, {}),
                (extensions.build_cla_comparator(n), cmp_oracle, {}),
            ]
            for method, borrow in itertools.product(("ripple", "cla"), (False, True)):
                builds.append((extensions.build_subtractor(n, method, borrow), sub_oracle, {"borrow": borrow}))
            for (c, regs), oracle, kw in builds:
                rep = check_against_oracle(c, regs, oracle(regs, n, **kw))
                assert rep.passed, rep.describe(regs)
        for n in range(1, 9):
            prog = extensions.ripple_comparator_program(n)
            counts = prog.counts()
            r = resource_report(prog.circuit())
            assert r.ancilla_count == 1
            assert counts["carry"] + counts["carry_inv"] == 2 * n
            assert counts["SUM"] == 1
            assert counts["S02"] == 2 * n
            assert r.non_clifford_depth == 4 * n
        for n in range(1, 33):
            k = ceil_log2(n)
            r = resource_report(extensions.build_cla_comparator(n)[0])
            assert r.non_clifford_count == 4 * n + 2 * binary_weight(2**k - n)
            assert r.non_clifford_depth == 2 * k + 4
            assert r.ancilla_count == 3 * 2**k - 2 * n
            assert extensions.cla_comparator_merges(n) == n + binary_weight(2**k - n) - 1
        assert extensions.cla_comparator_merges(10) == 11
    assert t.elapsed < 90


@pytest.mark.criterion(7, "floor-sum identities for n=1..64")
def test_summation_identities():
    for n in range(1, 65):
        assert sum(n // 2**i for i in range(1, 8)) == n - binary_weight(n)
        L = floor_log2(n)
        assert sum(int(np.floor(n / 2**i - 0.5)) for i in range(1, L + 2)) == n - L - 1
        lhs2, rhs2 = identity_eq2(n)
        lhs3, rhs3 = identity_eq3(n)
        assert lhs2 == rhs2 and lhs3 == rhs3


@pytest.mark.criterion(8, "Clifford+CX templates exhaustive; |01>,|10> swap; lowered ripple n=2 permutation")
def test_cx_templates():
    with Timer() as t:
        for rep in verify_all_templates():
            assert rep.passed, str(rep)
        perm = permutation_of(s0110_circuit())
        assert perm.moved() == [1, 3]
        assert perm(1) == 3 and perm(3) == 1
        c, _ = adders.build_ripple_adder(2)
        low = lower_to_cx(c)
        assert permutation_of(low) == permutation_of(c)
        assert {g.name for g in low.gates() if not g.is_clifford} == {"CX"}
    assert t.elapsed < 10


@pytest.mark.criterion(9, "seven-term P9 identity, square identity, CZ2/C2Z synthesis, H-conjugated CX and Horner")
def test_supermetaplectic():
    with Timer() as t:
        for i, j, k in itertools.product(range(3), repeat=3):
            assert eq8_exponent(i, j, k) == 3 * i * j * k % 9
        # zeta_9^([2i] - [2-i]) == zeta_9^-2 * zeta_3^(i^2), computed in the cyclotomic field
        for i, lhs, rhs in square_identity():
            assert lhs == rhs
            assert zeta9((2 * i) % 3 - (2 - i) % 3) == zeta9(-2) * zeta9(3 * i * i)
        for kind, count in ((CZ2, 4), (c2z(2), 3)):
            syn = synthesize_gate(kind)
            assert p9_count(syn) == count
            ok, lam = equal_up_to_global_phase(circuit_matrix(syn), circuit_matrix(_gate_circuit(kind)))
            assert ok and lam.zeta_exponent() is not None
        eq1 = to_big_endian(circuit_matrix(_gate_circuit(cx(2))), 2)
        assert eq1 == gate_matrix(cx(2))
        ok, lam = equal_up_to_global_phase(to_big_endian(circuit_matrix(superm_template(cx(2)).replacement), 2), eq1)
        assert ok and lam.zeta_exponent() is not None
        assert p9_count(superm_template(cx(2)).replacement) == 3
        horner = circuit_matrix(_gate_circuit(HORNER))
        assert horner == UnitaryMatrix.from_permutation(permutation_of(_gate_circuit(HORNER)).mapping)
        ok, lam = verify_superm_template(HORNER)
        assert ok and lam.zeta_exponent() is not None
        assert p9_count(superm_template(HORNER).replacement) == 4
    assert t.elapsed < 30


@pytest.mark.criterion(10, "affine closure orders, decomposition round trips, nonlinear gates rejected")
def test_affine_group():
    with Timer() as t:
        assert len(closure(affine_generators(1))) == 6 == affine_group_order(1)
        assert len(closure(affine_generators(2))) == 432 == affine_group_order(2)
        rng = np.random.default_rng(2024)
        trials = 0
        for n in (1, 2, 3, 4):
            for _ in range(30):
                g = random_affine(n, rng)
                circ = decompose_affine(g)
                assert {op.gate.name for op in circ.ops} <= {"SUM", "S12", "X"}
                assert is_affine(permutation_of(circ)) == g
                trials += 1
        assert trials >= 100
        for kind in (HORNER, CPX, csum(0), SWAP2):
            assert is_affine(permutation_of(_gate_circuit(kind))) is None
    assert t.elapsed < 30


@pytest.mark.criterion(11, "diag(1,1,-1) is rejected as not representable")
def test_lattice_guard():
    minus_one = UnitaryMatrix.diagonal([0, 0, 18])  # zeta_36^18 = -1
    with pytest.raises(NotRepresentable):
        diagonal_exponents(minus_one)
    with pytest.raises(NotRepresentable):
        solve_diagonal(minus_one)


@pytest.mark.criterion(12, "repeated CLI runs are byte-identical; seeded sampling reproducible")
def test_determinism(tmp_path):
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "ternarith.cli", *args], capture_output=True, cwd=tmp_path)

    runs = [
        ("gen", "cla-adder", "--n", "4", "--variant", "in-place"),
        ("gen", "comparator", "--n", "5", "--method", "cla"),
        ("selftest",),
    ]
    for args in runs:
        a, b = cli(*args), cli(*args)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout and a.stderr == b.stderr
    path = tmp_path / "r.t3"
    assert cli("gen", "ripple-adder", "--n", "4", "-o", str(path)).returncode == 0
    first = path.read_bytes()
    assert cli("gen", "ripple-adder", "--n", "4", "-o", str(path)).returncode == 0
    assert path.read_bytes() == first
    sampled = ("verify", "--spec", "add", "-i", str(path), "--samples", "500", "--seed", "7")
    a, b = cli(*sampled), cli(*sampled)
    assert a.returncode == 0 and a.stdout == b.stdout and b"seed=7" in a.stdout

    c, regs = adders.build_ripple_adder(3)
    wrong = lambda v: {"B": (v["A"] + v["B"] + v["CIN"] + 1) % 27, "OVF": 0 * v["A"]}
    r1 = check_against_oracle(c, regs, wrong, mode=Sampled(200, seed=3))
    r2 = check_against_oracle(c, regs, wrong, mode=Sampled(200, seed=3))
    assert not r1.passed and r1.counterexample == r2.counterexample
