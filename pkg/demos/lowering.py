"""Lower a small adder into both gate sets and check each result exactly."""

from ternarith import adders
from ternarith.circuit import resource_report
from ternarith.cxlower import lower_to_cx, same_permutation
from ternarith.superm import lower_to_superm, p9_count, same_permutation_up_to_phase

c, regs = adders.build_ripple_adder(2)
cx = lower_to_cx(c)
sm = lower_to_superm(cx)

print("source:", resource_report(c).counts_by_kind)
print("Clifford+CX:", resource_report(cx).counts_by_kind)
print("  same permutation:", same_permutation(c, cx))
print("Clifford+P9: P9 gates =", p9_count(sm), "total gates =", len(sm.ops))
print("  same permutation up to phase:", same_permutation_up_to_phase(c, sm))
