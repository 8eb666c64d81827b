"""The closed form for p-groups with central derived subgroup.

For such a group the commuting probability is a short sum over the
subgroups K of the derived subgroup D with cyclic quotient:

    Pr(G) = (1/|D|) * sum_K  phi((D:K)) / p^s(K),

where p^s(K) = |G| / #{x : [G,x] <= K}. The demo evaluates the sum for
extraspecial groups and checks it against the brute-force count.
"""

from commprob import FamilySpec, make, pr_direct
from commprob.probability import pr_central_pgroup_formula
from commprob.rationals import format_rational


def main():
    print("Extraspecial groups of order p^(2s+1): Pr = (1/p)(1 + (p-1)/p^(2s))")
    for p, s in [(2, 1), (2, 2), (2, 3), (3, 1), (5, 1)]:
        table, spec = make(FamilySpec("extraspecial", (p, s)))
        predicted, trace = pr_central_pgroup_formula(table)
        brute = pr_direct(table)
        assert predicted == brute == spec.expected_pr
        terms = ", ".join(
            f"K of order {t.k_order} (index {t.index}, s={t.s})" for t in trace.terms
        )
        print(
            f"  p={p} s={s}: order {table.order:>4}  Pr = {format_rational(predicted):>9}"
            f"   [{terms}]"
        )

    print("\nThe formula also covers every abelian p-group (trivially 1):")
    c8, _ = make(FamilySpec("cyclic", (8,)))
    predicted, _ = pr_central_pgroup_formula(c8)
    print(f"  C8: Pr = {format_rational(predicted)}")


if __name__ == "__main__":
    main()
