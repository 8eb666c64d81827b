"""Named group families with known-answer metadata.

Every constructor is deterministic, and the corpus generated here is the
ground-truth universe for the test suites: cyclic, dihedral, dicyclic,
symmetric, alternating and extraspecial groups plus their pairwise
direct products. Where a classical closed form for the commuting
probability exists it is recorded as ``expected_pr`` (dihedral both
parities, the polyhedral groups A4/S4/A5, extraspecial, cyclic = 1);
the minimum nonlinear irreducible degree ``expected_d`` is attached as
metadata where standard, never computed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import OrderCapExceeded, UnsupportedParams
from .groups import (
    GroupTable,
    Permutation,
    build_from_permutations,
    conjugacy_classes,
    direct_product,
    is_abelian,
    quotient,
    subgroup_from_generators,
)
from .probability import pr_direct

_DTYPE = np.int32

SYMMETRIC_DEGREE_CAP = 7
ALTERNATING_DEGREE_CAP = 7
EXTRASPECIAL_ORDER_CAP = 3125

BASE_FAMILIES = ("cyclic", "dihedral", "symmetric", "alternating", "dicyclic", "extraspecial")
_FAMILY_CODE = {name: i for i, name in enumerate(BASE_FAMILIES)}
_FAMILY_ARITY = {
    "cyclic": 1,
    "dihedral": 1,
    "symmetric": 1,
    "alternating": 1,
    "dicyclic": 1,
    "extraspecial": 2,
}

_D_PROVENANCE = "standard character theory"


@dataclass(frozen=True)
class FamilySpec:
    """A family member: which family, which parameters, what is known."""

    family: str
    params: tuple[int, ...]
    name: str = ""
    expected_pr: Fraction | None = None
    pr_provenance: str | None = None
    expected_d: int | None = None
    d_provenance: str | None = None

    def to_json_dict(self) -> dict:
        return {"family": self.family, "params": list(self.params)}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


# ---------------------------------------------------------------------------
# raw table builders
# ---------------------------------------------------------------------------


def cyclic_table(n: int) -> GroupTable:
    idx = np.arange(n, dtype=_DTYPE)
    op = (idx[:, None] + idx[None, :]) % n
    inv = (-idx) % n
    return GroupTable(order=n, op=op.astype(_DTYPE), inv=inv.astype(_DTYPE), name=f"C{n}")


def dihedral_group(n: int) -> GroupTable:
    """Dihedral group of order 2n, built from permutations."""
    if n == 2:
        gens = [Permutation(4, (1, 0, 2, 3)), Permutation(4, (0, 1, 3, 2))]
        return build_from_permutations(4, gens, name="D2")
    rot = Permutation(n, tuple((i + 1) % n for i in range(n)))
    refl = Permutation(n, tuple((n - i) % n for i in range(n)))
    return build_from_permutations(n, [rot, refl], name=f"D{n}")


def symmetric_group(n: int) -> GroupTable:
    if n == 1:
        return build_from_permutations(1, [], name="S1")
    gens = [Permutation(n, (1, 0) + tuple(range(2, n)))]
    if n >= 3:
        gens.append(Permutation(n, tuple((i + 1) % n for i in range(n))))
    return build_from_permutations(n, gens, name=f"S{n}")


def alternating_group(n: int) -> GroupTable:
    gens = []
    for k in range(2, n):
        images = list(range(n))
        images[0], images[1], images[k] = 1, k, 0
        gens.append(Permutation(n, tuple(images)))
    return build_from_permutations(n, gens, name=f"A{n}")


def dicyclic_table(m: int) -> GroupTable:
    """Dicyclic group of order 4m: a^(2m) = 1, b^2 = a^m, b a b^-1 = a^-1.

    Element a^i b^j is index i + 2m*j with i in [0, 2m), j in {0, 1}.
    """
    two_m = 2 * m
    order = 4 * m
    op = np.empty((order, order), dtype=_DTYPE)
    for i in range(two_m):
        for j in (0, 1):
            a = i + two_m * j
            for k in range(two_m):
                for l in (0, 1):
                    b = k + two_m * l
                    if j == 0:
                        op[a, b] = (i + k) % two_m + two_m * l
                    elif l == 0:
                        op[a, b] = (i - k) % two_m + two_m
                    else:
                        op[a, b] = (i - k + m) % two_m
    inv = np.argmax(op == 0, axis=1).astype(_DTYPE)
    return GroupTable(order=order, op=op, inv=inv, name=f"Dic{m}")


def heisenberg_table(p: int, s: int) -> GroupTable:
    """Extraspecial group of order p^(2s+1) in upper-unitriangular style.

    Elements are (a, b, c) with a, b in F_p^s and c in F_p, multiplying
    as (a, b, c)(a', b', c') = (a+a', b+b', c+c' + a.b'); this is the
    iterated central product of s copies of the p^3 base group
    (exponent p for odd p, the order-4-element type for p = 2).
    """
    order = p ** (2 * s + 1)
    idx = np.arange(order, dtype=np.int64)
    c = idx % p
    rest = idx // p
    b_digits = np.empty((order, s), dtype=np.int64)
    tmp = rest.copy()
    for t in range(s):
        b_digits[:, t] = tmp % p
        tmp //= p
    a_digits = np.empty((order, s), dtype=np.int64)
    for t in range(s):
        a_digits[:, t] = tmp % p
        tmp //= p

    op = np.empty((order, order), dtype=_DTYPE)
    chunk = max(1, (1 << 22) // order)
    for lo in range(0, order, chunk):
        hi = min(order, lo + chunk)
        a_sum = (a_digits[lo:hi, None, :] + a_digits[None, :, :]) % p
        b_sum = (b_digits[lo:hi, None, :] + b_digits[None, :, :]) % p
        twist = (a_digits[lo:hi, None, :] * b_digits[None, :, :]).sum(axis=2)
        c_sum = (c[lo:hi, None] + c[None, :] + twist) % p
        enc = c_sum
        mult = p
        for t in range(s):
            enc = enc + b_sum[:, :, t] * mult
            mult *= p
        for t in range(s):
            enc = enc + a_sum[:, :, t] * mult
            mult *= p
        op[lo:hi] = enc.astype(_DTYPE)
    inv = np.argmax(op == 0, axis=1).astype(_DTYPE)
    return GroupTable(order=order, op=op, inv=inv, name=f"ES{p}_{s}")


def central_product(
    a: GroupTable, za: int, b: GroupTable, zb: int
) -> tuple[GroupTable, int]:
    """(A x B) / <(za, zb^-1)> for central elements za, zb of equal order.

    Returns the quotient and the image of (za, 1) in it, so products can
    be iterated.
    """
    prod = direct_product(a, b)
    glue = int(za) * b.order + int(b.inv[zb])
    N = subgroup_from_generators(prod, [glue])
    quot = quotient(prod, N)
    members = np.asarray(N.members, dtype=_DTYPE)
    coset_of = np.full(prod.order, -1, dtype=_DTYPE)
    reps = 0
    for x in range(prod.order):
        if coset_of[x] >= 0:
            continue
        coset_of[prod.op[members, x]] = reps
        reps += 1
    return quot, int(coset_of[int(za) * b.order + 0])


# ---------------------------------------------------------------------------
# family dispatch
# ---------------------------------------------------------------------------


def _dihedral_pr(n: int) -> Fraction:
    return Fraction(n + 6, 4 * n) if n % 2 == 0 else Fraction(n + 3, 4 * n)


def _extraspecial_pr(p: int, s: int) -> Fraction:
    return Fraction(1, p) * (1 + Fraction(p - 1, p ** (2 * s)))


def make(spec: FamilySpec) -> tuple[GroupTable, FamilySpec]:
    """Build the group named by ``spec`` and fill in its known metadata."""
    fam, params = spec.family, tuple(spec.params)
    if fam == "cyclic":
        (n,) = _require_params(fam, params, 1)
        if n < 1:
            raise UnsupportedParams("cyclic order must be >= 1")
        table = cyclic_table(n)
        filled = replace(
            spec, name=table.name, expected_pr=Fraction(1), pr_provenance="abelian"
        )
    elif fam == "dihedral":
        (n,) = _require_params(fam, params, 1)
        if n < 2:
            raise UnsupportedParams("dihedral parameter must be >= 2")
        table = dihedral_group(n)
        filled = replace(
            spec,
            name=table.name,
            expected_pr=_dihedral_pr(n),
            pr_provenance="dihedral closed form",
            expected_d=2 if n >= 3 else None,
            d_provenance=_D_PROVENANCE if n >= 3 else None,
        )
    elif fam == "symmetric":
        (n,) = _require_params(fam, params, 1)
        if n < 1:
            raise UnsupportedParams("symmetric degree must be >= 1")
        if n > SYMMETRIC_DEGREE_CAP:
            raise OrderCapExceeded(f"symmetric degree capped at {SYMMETRIC_DEGREE_CAP}")
        table = symmetric_group(n)
        filled = replace(spec, name=table.name)
        if n == 4:
            filled = replace(
                filled,
                expected_pr=Fraction(5, 24),
                pr_provenance="polyhedral value table",
                expected_d=2,
                d_provenance=_D_PROVENANCE,
            )
    elif fam == "alternating":
        (n,) = _require_params(fam, params, 1)
        if n < 3:
            raise UnsupportedParams("alternating degree must be >= 3")
        if n > ALTERNATING_DEGREE_CAP:
            raise OrderCapExceeded(f"alternating degree capped at {ALTERNATING_DEGREE_CAP}")
        table = alternating_group(n)
        filled = replace(spec, name=table.name)
        if n == 4:
            filled = replace(
                filled,
                expected_pr=Fraction(1, 3),
                pr_provenance="polyhedral value table",
            )
        elif n == 5:
            filled = replace(
                filled,
                expected_pr=Fraction(1, 12),
                pr_provenance="polyhedral value table",
                expected_d=3,
                d_provenance=_D_PROVENANCE,
            )
    elif fam == "dicyclic":
        (m,) = _require_params(fam, params, 1)
        if m < 2:
            raise UnsupportedParams("dicyclic parameter must be >= 2")
        table = dicyclic_table(m)
        filled = replace(spec, name=table.name)
    elif fam == "extraspecial":
        p, s = _require_params(fam, params, 2)
        if not _is_prime(p) or s < 1:
            raise UnsupportedParams("extraspecial needs a prime p and s >= 1")
        if p ** (2 * s + 1) > EXTRASPECIAL_ORDER_CAP:
            raise OrderCapExceeded(
                f"extraspecial order capped at {EXTRASPECIAL_ORDER_CAP}"
            )
        table = heisenberg_table(p, s)
        filled = replace(
            spec,
            name=table.name,
            expected_pr=_extraspecial_pr(p, s),
            pr_provenance="central p-group closed form",
            expected_d=p**s,
            d_provenance=_D_PROVENANCE,
        )
    elif fam == "product":
        left, right = _split_product_params(params)
        table_a, spec_a = make(left)
        table_b, spec_b = make(right)
        table = direct_product(table_a, table_b)
        expected = None
        prov = None
        if spec_a.expected_pr is not None and spec_b.expected_pr is not None:
            expected = spec_a.expected_pr * spec_b.expected_pr
            prov = "multiplicativity"
        d, d_prov = _combine_degrees(table_a, spec_a, table_b, spec_b)
        filled = replace(
            spec,
            name=table.name,
            expected_pr=expected,
            pr_provenance=prov,
            expected_d=d,
            d_provenance=d_prov,
        )
    else:
        raise UnsupportedParams(f"unknown family {fam!r}")
    return table, filled


def _require_params(fam: str, params: tuple[int, ...], count: int) -> tuple[int, ...]:
    if len(params) != count:
        raise UnsupportedParams(f"{fam} takes {count} parameter(s), got {list(params)}")
    return params


def _combine_degrees(ta, sa, tb, sb) -> tuple[int | None, str | None]:
    """Minimum nonlinear irreducible degree of a product: tensor a
    nonlinear factor irrep with a linear one on the other side."""
    cands = []
    for t, s in ((ta, sa), (tb, sb)):
        if is_abelian(t):
            continue
        if s.expected_d is None:
            return None, None
        cands.append(s.expected_d)
    if not cands:
        return None, None
    return min(cands), _D_PROVENANCE


def product_spec(a: FamilySpec, b: FamilySpec) -> FamilySpec:
    """Encode a pairwise product of base-family members as one spec."""
    for s in (a, b):
        if s.family not in _FAMILY_CODE:
            raise UnsupportedParams("products nest base families only")
    params = (
        (_FAMILY_CODE[a.family],)
        + tuple(a.params)
        + (_FAMILY_CODE[b.family],)
        + tuple(b.params)
    )
    return FamilySpec(family="product", params=params)


def _split_product_params(params: tuple[int, ...]) -> tuple[FamilySpec, FamilySpec]:
    vals = list(params)
    sides = []
    while vals:
        code = vals.pop(0)
        if not 0 <= code < len(BASE_FAMILIES):
            raise UnsupportedParams(f"unknown family code {code} in product params")
        fam = BASE_FAMILIES[code]
        arity = _FAMILY_ARITY[fam]
        if len(vals) < arity:
            raise UnsupportedParams("truncated product params")
        sides.append(FamilySpec(family=fam, params=tuple(vals[:arity])))
        vals = vals[arity:]
    if len(sides) != 2:
        raise UnsupportedParams("product params must encode exactly two factors")
    return sides[0], sides[1]


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


def corpus(max_order: int) -> list[tuple[GroupTable, FamilySpec]]:
    """Deterministic ground-truth corpus of order <= max_order.

    All base-family members, then all unordered pairwise direct products
    of base members of order >= 2 that fit under the cap. Nothing is
    deduplicated here; fingerprint-based dedup is a reporting concern.
    """
    if max_order < 1:
        raise UnsupportedParams("max_order must be >= 1")
    base_specs: list[FamilySpec] = []
    base_specs += [FamilySpec("cyclic", (n,)) for n in range(1, max_order + 1)]
    base_specs += [FamilySpec("dihedral", (n,)) for n in range(2, max_order // 2 + 1)]
    base_specs += [FamilySpec("dicyclic", (m,)) for m in range(2, max_order // 4 + 1)]
    fact = 2
    n = 2
    while n <= SYMMETRIC_DEGREE_CAP and fact <= max_order:
        base_specs.append(FamilySpec("symmetric", (n,)))
        n += 1
        fact *= n
    n = 3
    while n <= ALTERNATING_DEGREE_CAP and _half_factorial(n) <= max_order:
        base_specs.append(FamilySpec("alternating", (n,)))
        n += 1
    p = 2
    while p**3 <= min(max_order, EXTRASPECIAL_ORDER_CAP):
        if _is_prime(p):
            s = 1
            while p ** (2 * s + 1) <= min(max_order, EXTRASPECIAL_ORDER_CAP):
                base_specs.append(FamilySpec("extraspecial", (p, s)))
                s += 1
        p += 1

    built = [make(s) for s in base_specs]
    out = list(built)
    nontrivial = [(t, s) for t, s in built if t.order >= 2]
    for i, (ta, sa) in enumerate(nontrivial):
        for tb, sb in nontrivial[i:]:
            if ta.order * tb.order > max_order:
                continue
            out.append(make(product_spec(sa, sb)))
    return out


def _half_factorial(n: int) -> int:
    f = 1
    for i in range(2, n + 1):
        f *= i
    return f // 2


def fingerprint(G: GroupTable) -> tuple[int, Fraction, tuple[int, ...]]:
    """(order, Pr, sorted class-size multiset): the reporting dedup key."""
    part = conjugacy_classes(G)
    return (G.order, pr_direct(G), tuple(sorted(part.sizes())))
