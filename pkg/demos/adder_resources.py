"""Print resource counts of the adders and comparators for a few widths."""

from ternarith import adders, extensions
from ternarith.circuit import resource_report

BUILDERS = [
    ("ripple", adders.build_ripple_adder),
    ("cla out-of-place", adders.build_cla_out_of_place),
    ("cla in-place", adders.build_cla_in_place),
    ("cla mod 3^n", extensions.build_cla_mod_adder),
    ("cla comparator", extensions.build_cla_comparator),
]


def main():
    print(f"{'circuit':<18}{'n':>4}{'width':>7}{'non-Cl':>8}{'depth':>7}{'anc':>5}")
    for n in (4, 10, 16, 32):
        for name, build in BUILDERS:
            r = resource_report(build(n)[0])
            print(f"{name:<18}{n:>4}{r.width:>7}{r.non_clifford_count:>8}{r.non_clifford_depth:>7}{r.ancilla_count:>5}")
        print()


if __name__ == "__main__":
    main()
