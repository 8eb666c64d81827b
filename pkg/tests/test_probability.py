"""Commuting-probability tests: evaluators, closed forms, bounds,
decompositions. Brute-force oracles live here, written without numpy."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from commprob.errors import PreconditionFailed
from commprob.families import FamilySpec, make
from commprob.groups import (
    abelian_normal_subgroups,
    center,
    derived_subgroup,
    element_orders,
    subgroup_from_generators,
    subgroup_from_members,
    subgroup_table,
)
from commprob.probability import (
    BoundContext,
    PrReport,
    abelian_decomposition,
    check_bounds,
    erdos_turan_holds,
    pr_by_classes,
    pr_central_pgroup_formula,
    pr_direct,
    pr_of_members,
    verify_special_forms,
)


def naive_pr(table) -> Fraction:
    """Pure-python ordered-pair count."""
    n = table.order
    hits = sum(
        1
        for x in range(n)
        for y in range(n)
        if int(table.op[x, y]) == int(table.op[y, x])
    )
    return Fraction(hits, n * n)


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------


def test_known_values(named):
    assert pr_direct(named["c12"]) == 1
    assert pr_by_classes(named["c12"]) == 1
    assert pr_direct(named["d4"]) == Fraction(5, 8)
    assert pr_direct(named["a5"]) == Fraction(1, 12)
    assert pr_by_classes(named["s4"]) == Fraction(5, 24)
    assert pr_by_classes(named["q8"]) == Fraction(5, 8)


def test_against_naive_count(named):
    for key in ("s3", "d4", "q8", "a4"):
        g = named[key]
        assert pr_direct(g) == naive_pr(g) == pr_by_classes(g)


def test_pr_of_members(named):
    s3 = named["s3"]
    rot = next(x for x in range(6) if element_orders(s3)[x] == 3)
    a3 = subgroup_from_generators(s3, [rot])
    assert pr_of_members(s3, a3.members) == 1


# ---------------------------------------------------------------------------
# central p-group formula
# ---------------------------------------------------------------------------


def test_central_pgroup_formula_values(named):
    v, trace = pr_central_pgroup_formula(named["es27"])
    assert v == Fraction(11, 27)
    assert trace.p == 3 and trace.special_s == 1

    v, trace = pr_central_pgroup_formula(named["d4"])
    assert v == Fraction(5, 8)
    assert trace.special_s == 1

    c8 = make(FamilySpec("cyclic", (8,)))[0]
    v, trace = pr_central_pgroup_formula(c8)
    assert v == 1
    assert all(t.s == 0 for t in trace.terms if t.index == 1)


def test_central_pgroup_formula_preconditions(named):
    with pytest.raises(PreconditionFailed):
        pr_central_pgroup_formula(named["s3"])  # not a prime power
    with pytest.raises(PreconditionFailed):
        pr_central_pgroup_formula(named["d8"])  # derived subgroup not central


def test_central_pgroup_formula_on_corpus(corpus128):
    checked = 0
    for table, spec in corpus128:
        if table.order > 125:
            continue
        base = _prime_power_base(table.order)
        if base not in (2, 3, 5):
            continue
        der = derived_subgroup(table)
        if not set(der.members) <= set(center(table).members):
            continue
        value, _ = pr_central_pgroup_formula(table)
        assert value == pr_direct(table), spec.name
        checked += 1
    assert checked >= 40


def _prime_power_base(n: int) -> int | None:
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    while n % p == 0:
        n //= p
    return p if n == 1 else None


# ---------------------------------------------------------------------------
# special forms
# ---------------------------------------------------------------------------


def test_special_forms_examples(named):
    d4 = {m.pattern: m for m in verify_special_forms(named["d4"])}
    hit = d4["derived2-central-quotient-elementary"]
    assert hit.predicted == Fraction(5, 8) and hit.match and "s=1" in hit.note

    s3 = {m.pattern: m for m in verify_special_forms(named["s3"])}
    hit = s3["derived3-central-quotient-s3"]
    assert hit.predicted == Fraction(1, 2) and hit.match

    d8 = {m.pattern: m for m in verify_special_forms(named["d8"])}
    hit = d8["derived4-central2"]
    assert hit.predicted == Fraction(7, 16) and hit.match and "s=0" in hit.note
    assert pr_direct(named["d8"]) == Fraction(7, 16)


def test_special_forms_empty_for_abelian(named):
    assert verify_special_forms(named["c12"]) == []


def test_special_form_predictions_never_contradict(corpus64):
    for table, spec in corpus64:
        for m in verify_special_forms(table):
            if m.match:
                assert m.predicted == pr_direct(table), (spec.name, m.pattern)


def test_fingerprints_conclusive_on_small_corpus(corpus16):
    """Order, abelianness and the element-order multiset pin down the tiny
    fingerprint targets among all groups of order <= 16 in the corpus."""
    from commprob.groups import is_abelian

    profiles = {}
    for table, spec in corpus16:
        key = (
            table.order,
            is_abelian(table),
            tuple(sorted(element_orders(table))),
        )
        profiles.setdefault(key, set()).add(
            (pr_direct(table), tuple(sorted(c for c in _class_sizes(table))))
        )
    for target_order in (2, 3, 4, 6):
        for key, invariants in profiles.items():
            if key[0] == target_order:
                assert len(invariants) == 1, key


def _class_sizes(table):
    from commprob.groups import conjugacy_classes

    return conjugacy_classes(table).sizes()


# ---------------------------------------------------------------------------
# bound suite
# ---------------------------------------------------------------------------


def test_erdos_turan_exact_rule():
    assert erdos_turan_holds(3, 1)
    assert erdos_turan_holds(4, 2)
    # k = 1 forces order <= 4
    assert not erdos_turan_holds(5, 1)
    assert erdos_turan_holds(2**64, 7)
    assert not erdos_turan_holds(2**64 + 1, 6)


def test_bounds_s3_fitting_squared(named):
    rep = check_bounds(named["s3"])
    fit = {b.bound: b for b in rep.bounds}["fitting-index"]
    assert fit.lhs == Fraction(1, 4) and fit.rhs == Fraction(1, 2) and fit.holds


def test_bounds_a5_derived(named):
    rep = check_bounds(named["a5"])
    der = {b.bound: b for b in rep.bounds}["derived-bound"]
    assert der.rhs == Fraction(1, 4) + Fraction(3, 4 * 60)
    assert der.rhs == Fraction(21, 80) and der.holds


def test_bounds_gustafson_equality(named):
    rep = check_bounds(named["d4"])
    by = {b.bound: b for b in rep.bounds}
    assert by["gustafson"].holds and by["gustafson"].lhs == Fraction(5, 8)
    assert by["gustafson-equality"].holds


def test_bounds_min_degree(named):
    rep = check_bounds(named["s4"], BoundContext(min_nonlinear_degree=2))
    by = {b.bound: b for b in rep.bounds}
    assert by["min-degree-lower"].holds and by["min-degree-upper"].holds
    rep = check_bounds(named["c12"], BoundContext(min_nonlinear_degree=2))
    by = {b.bound: b for b in rep.bounds}
    assert by["min-degree-lower"].skipped


def test_bounds_orbit(named):
    s3 = named["s3"]
    rot = next(x for x in range(6) if element_orders(s3)[x] == 3)
    a3 = subgroup_from_generators(s3, [rot])
    rep = check_bounds(s3, BoundContext(orbit_subgroup=a3))
    orb = {b.bound: b for b in rep.bounds}["orbit-bound"]
    # c = 2 from the subgroups of the order-2 quotient, k_G(N) = 2
    assert orb.rhs == Fraction(2 * 2, 6) and orb.holds
    rep = check_bounds(s3, BoundContext(orbit_subgroup=a3, orbit_class_bound=2))
    assert {b.bound: b for b in rep.bounds}["orbit-bound"].rhs == Fraction(2, 3)


def test_bounds_fitting_skipped_above_cutoff():
    from commprob.families import cyclic_table

    rep = check_bounds(cyclic_table(300))
    by = {b.bound: b for b in rep.bounds}
    assert by["fitting-index"].skipped
    assert by["erdos-turan"].holds


def test_bounds_skips_marked(named):
    rep = check_bounds(named["c12"], BoundContext(skip_fitting=True))
    by = {b.bound: b for b in rep.bounds}
    assert by["gustafson"].skipped and by["fitting-index"].skipped
    assert by["orbit-bound"].skipped
    names = [b.bound for b in rep.bounds]
    assert names == [
        "gustafson",
        "gustafson-equality",
        "erdos-turan",
        "fitting-index",
        "derived-bound",
        "min-degree-lower",
        "min-degree-upper",
        "orbit-bound",
    ]


def test_bound_entries_internally_consistent(corpus16, named):
    """Whenever both sides of a bound are recorded, the verdict is exactly
    the stated relation applied to them."""
    relations = {"<=": lambda a, b: a <= b, "<": lambda a, b: a < b,
                 ">=": lambda a, b: a >= b}
    groups = [t for t, _ in corpus16] + [named["a5"], named["s4"]]
    for table in groups:
        rep = check_bounds(table, BoundContext(min_nonlinear_degree=2))
        for b in rep.bounds:
            if b.holds is None or b.lhs is None or b.rhs is None:
                continue
            assert b.holds == relations[b.relation](b.lhs, b.rhs), b


def test_report_serialization_roundtrip(named):
    rep = check_bounds(named["d4"])
    data = rep.to_json_dict()
    back = PrReport.from_json_dict(data)
    assert back == rep
    csv = rep.to_csv()
    assert csv.splitlines()[0].startswith("name,order,k,pr,center_index")
    assert "D4,8,5,5/8,4" in csv


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def test_decomposition_s3(named):
    s3 = named["s3"]
    a3 = next(N for N in abelian_normal_subgroups(s3) if N.order == 3)
    form = abelian_decomposition(s3, a3)
    assert form.index == 2
    assert form.s_sizes == ((9, 3), (3, 3))
    assert form.x_list == (1, 3, 3, 3)
    assert form.pr == Fraction(1, 2)
    assert form.coset_reps[0] == 0


def test_decomposition_d4_over_c4(named):
    d4 = named["d4"]
    c4 = next(
        N
        for N in abelian_normal_subgroups(d4)
        if N.order == 4 and max(element_orders(subgroup_table(d4, N))) == 4
    )
    form = abelian_decomposition(d4, c4)
    assert form.s_sizes == ((16, 8), (8, 8))
    assert form.x_list == (1, 2, 2, 2)
    assert form.pr == Fraction(5, 8)


def test_decomposition_whole_abelian(named):
    c12 = named["c12"]
    whole = subgroup_from_members(c12, range(12))
    form = abelian_decomposition(c12, whole)
    assert form.index == 1 and form.x_list == (1,) and form.pr == 1


def test_decomposition_preconditions(named):
    s4 = named["s4"]
    with pytest.raises(PreconditionFailed):
        # the subgroup generated by all 3-cycles is A4: normal, not abelian
        sub = subgroup_from_generators(
            s4, [x for x in range(24) if element_orders(s4)[x] == 3]
        )
        abelian_decomposition(s4, sub)
    s3 = named["s3"]
    h2 = subgroup_from_generators(s3, [next(x for x in range(6) if element_orders(s3)[x] == 2)])
    with pytest.raises(PreconditionFailed):
        abelian_decomposition(s3, h2)


def test_multiplicativity_sample(corpus64):
    rng = random.Random(424242)
    from commprob.groups import direct_product

    pairs = 0
    while pairs < 12:
        (ta, sa), (tb, sb) = rng.sample(corpus64, 2)
        if ta.order * tb.order > 2048:
            continue
        prod = direct_product(ta, tb)
        assert pr_direct(prod) == pr_direct(ta) * pr_direct(tb)
        pairs += 1
