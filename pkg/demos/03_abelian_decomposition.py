"""Why commuting probabilities look like scaled Egyptian fractions.

Any group with an abelian normal subgroup H of index n splits its
commuting-pair count into an n x n grid over coset pairs; each nonzero
cell contributes a unit fraction, giving

    Pr(G) = (1/n^2) * (1/x_1 + ... + 1/x_L),   x_1 = 1, L <= n^2.

The demo prints the grid for a few groups and reassembles Pr from it.
"""

from commprob import FamilySpec, abelian_decomposition, make, pr_direct
from commprob.groups import abelian_normal_subgroups, largest_abelian_normal_subgroup
from commprob.rationals import format_rational


def show(name, table, sub):
    form = abelian_decomposition(table, sub)
    print(f"{name}: abelian normal subgroup of order {sub.order}, index {form.index}")
    for row in form.s_sizes:
        print("   " + " ".join(f"{v:4d}" for v in row))
    print(f"   x-list {list(form.x_list)}  ->  Pr = {format_rational(form.pr)}")
    assert form.pr == pr_direct(table)


def main():
    s3, _ = make(FamilySpec("symmetric", (3,)))
    show("S3", s3, largest_abelian_normal_subgroup(s3))

    d4, _ = make(FamilySpec("dihedral", (4,)))
    show("D4", d4, largest_abelian_normal_subgroup(d4))

    d6, _ = make(FamilySpec("dihedral", (6,)))
    show("D6", d6, largest_abelian_normal_subgroup(d6))

    q8, _ = make(FamilySpec("dicyclic", (2,)))
    print("\nEvery abelian normal subgroup of Q8 gives its own grid:")
    for sub in abelian_normal_subgroups(q8):
        form = abelian_decomposition(q8, sub)
        print(
            f"   order {sub.order}: index {form.index}, "
            f"x-list {list(form.x_list)}, Pr = {format_rational(form.pr)}"
        )


if __name__ == "__main__":
    main()
