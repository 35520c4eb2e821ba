"""Synthesize the controlled-controlled Z and hard-controlled Z gates from P9 and Clifford gates."""

from ternarith.circuit import CZ2, Circuit, Op, c2z
from ternarith.cyclo import circuit_matrix, equal_up_to_global_phase
from ternarith.superm import minimal_phase_polynomial, p9_count, synthesize_gate, target_exponents

for kind in (CZ2, c2z(0), c2z(2)):
    c = synthesize_gate(kind)
    target = circuit_matrix(Circuit(kind.arity, [Op(kind, tuple(range(kind.arity)))]))
    ok, lam = equal_up_to_global_phase(circuit_matrix(c), target)
    print(f"{kind}: {p9_count(c)} P9, exact={ok}, phase={lam}")
    print("   ", minimal_phase_polynomial(target_exponents(kind)))
