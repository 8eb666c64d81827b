"""Commuting probabilities of the classical families, two ways.

Walks the dihedral family and the polyhedral groups, computing Pr(G)
both by counting commuting ordered pairs and by counting conjugacy
classes, and compares against the closed-form values the constructors
carry as metadata.
"""

from fractions import Fraction

from commprob import FamilySpec, make, pr_by_classes, pr_direct
from commprob.rationals import format_rational


def main():
    print("Dihedral groups of order 2n: Pr = (n+6)/4n for even n, (n+3)/4n for odd")
    print(f"{'n':>3} {'order':>6} {'pairs':>10} {'classes':>10} {'closed form':>12}")
    for n in range(2, 16):
        table, spec = make(FamilySpec("dihedral", (n,)))
        direct = pr_direct(table)
        classes = pr_by_classes(table)
        assert direct == classes == spec.expected_pr
        print(
            f"{n:>3} {table.order:>6} {format_rational(direct):>10}"
            f" {format_rational(classes):>10} {format_rational(spec.expected_pr):>12}"
        )

    print("\nPolyhedral groups:")
    for family, params in [("alternating", (4,)), ("symmetric", (4,)), ("alternating", (5,))]:
        table, spec = make(FamilySpec(family, params))
        print(f"  {spec.name:<4} order {table.order:>3}  Pr = {format_rational(pr_direct(table))}")

    print("\nThe nonabelian ceiling: no nonabelian group passes 5/8.")
    d4, _ = make(FamilySpec("dihedral", (4,)))
    q8, _ = make(FamilySpec("dicyclic", (2,)))
    print(f"  D4 and Q8 both sit exactly at {format_rational(pr_direct(d4))} "
          f"(and {format_rational(pr_direct(q8))}) - an isoclinic pair.")
    assert pr_direct(d4) == pr_direct(q8) == Fraction(5, 8)


if __name__ == "__main__":
    main()
