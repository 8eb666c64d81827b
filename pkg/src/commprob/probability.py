"""Exact commuting-probability computations.

Two independent evaluators for Pr(G) (ordered-pair count and class
count), the closed-form value predicted for p-groups with central
derived subgroup, structural special-form checks, the classical bound
suite, and the decomposition of a group over an abelian normal subgroup
into unit-fraction form. Everything returns ``fractions.Fraction``;
no comparison is ever made in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionFailed
from .groups import (
    SUBGROUP_CUTOFF,
    GroupTable,
    Subgroup,
    all_subgroups,
    center,
    centralizer,
    conjugacy_classes,
    derived_subgroup,
    element_orders,
    fitting_subgroup,
    is_abelian,
    is_normal,
    orbit_count_on_normal,
    quotient,
    subgroup_table,
)
from .rationals import format_rational

_DTYPE = np.int32

GUSTAFSON_BOUND = Fraction(5, 8)


# ---------------------------------------------------------------------------
# the two independent evaluators
# ---------------------------------------------------------------------------


def pr_direct(G: GroupTable) -> Fraction:
    """Commuting probability as (# commuting ordered pairs) / |G|^2."""
    commuting = int((G.op == G.op.T).sum())
    return Fraction(commuting, G.order * G.order)


def pr_by_classes(G: GroupTable) -> Fraction:
    """Commuting probability as (# conjugacy classes) / |G|."""
    return Fraction(conjugacy_classes(G).count, G.order)


def pr_of_members(G: GroupTable, members) -> Fraction:
    """Pr of a closed member set, without building its own table."""
    m = np.asarray(sorted(members), dtype=_DTYPE)
    block = G.op[np.ix_(m, m)]
    return Fraction(int((block == block.T).sum()), len(m) ** 2)


# ---------------------------------------------------------------------------
# tiny-group fingerprints
#
# The targets below are determined up to isomorphism by (order,
# abelianness, element-order multiset); no general isomorphism test is
# needed at these sizes.
# ---------------------------------------------------------------------------


def _is_cyclic(T: GroupTable) -> bool:
    return max(element_orders(T)) == T.order


def _elementary_abelian_two_rank(T: GroupTable) -> int | None:
    """Rank r if T is isomorphic to C_2^r, else None."""
    n = T.order
    if n & (n - 1):
        return None
    if not is_abelian(T):
        return None
    if n > 1 and max(element_orders(T)) != 2:
        return None
    return n.bit_length() - 1


def _looks_like_s3(T: GroupTable) -> bool:
    return T.order == 6 and not is_abelian(T)


def _looks_like_klein_four(T: GroupTable) -> bool:
    return _elementary_abelian_two_rank(T) == 2


# ---------------------------------------------------------------------------
# central p-group closed form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KTerm:
    """One summand: a subgroup K of the derived subgroup with cyclic
    quotient, its index, and the exponent s(K) with
    p^s(K) = |G| / #{x : [G,x] <= K}."""

    k_order: int
    index: int
    s: int


@dataclass(frozen=True)
class FormulaTrace:
    pattern: str
    p: int
    terms: tuple[KTerm, ...]
    predicted: Fraction
    special_s: int | None = None


def _prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p^k, k >= 1; None if n is not a prime power."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def _commutators_with(G: GroupTable, x: int) -> np.ndarray:
    """[g, x] for all g, as a vector over g."""
    n = G.order
    allv = np.arange(n, dtype=_DTYPE)
    t1 = G.op[G.inv, G.inv[x]]
    t2 = G.op[t1, allv]
    return G.op[t2, x]


def pr_central_pgroup_formula(G: GroupTable) -> tuple[Fraction, FormulaTrace]:
    """Closed-form Pr for a p-group whose derived subgroup is central.

    Sums phi((D:K)) / p^s(K) over the subgroups K of the derived
    subgroup D with cyclic quotient D/K, then divides by |D|. The K = D
    term is the constant 1 (s(D) = 0), matching the familiar
    "1 + sum over proper K" presentation. For D cyclic of order p with
    |G/Z| = p^(2s) this collapses to (1/p)(1 + (p-1)/p^(2s)).
    """
    pk = _prime_power(G.order)
    if pk is None:
        raise PreconditionFailed(f"order {G.order} is not a prime power")
    p, _ = pk
    derived = derived_subgroup(G)
    zent = center(G)
    if not set(derived.members) <= set(zent.members):
        raise PreconditionFailed("derived subgroup is not central")

    D = subgroup_table(G, derived)  # abelian
    d_members = np.asarray(derived.members, dtype=_DTYPE)
    n = G.order

    terms = []
    total = Fraction(0)
    for K in all_subgroups(D):
        if not _is_cyclic(quotient(D, K)):
            continue
        k_in_g = d_members[np.asarray(K.members, dtype=_DTYPE)]
        mask = np.zeros(n, dtype=bool)
        mask[k_in_g] = True
        inside = sum(1 for x in range(n) if mask[_commutators_with(G, x)].all())
        if n % inside:
            raise PreconditionFailed("commutator-containment count does not divide |G|")
        q = n // inside
        s = 0
        while q > 1:
            if q % p:
                raise PreconditionFailed("containment index is not a power of p")
            q //= p
            s += 1
        idx = derived.order // K.order
        phi = 1 if idx == 1 else (p - 1) * (idx // p)
        total += Fraction(phi, p**s)
        terms.append(KTerm(k_order=K.order, index=idx, s=s))

    predicted = total / derived.order

    special_s = None
    if derived.order == p:
        zq = G.order // zent.order
        r = 0
        while zq > 1 and zq % (p * p) == 0:
            zq //= p * p
            r += 1
        if zq == 1:
            special_s = r
    trace = FormulaTrace(
        pattern="central-pgroup",
        p=p,
        terms=tuple(sorted(terms, key=lambda t: t.k_order)),
        predicted=predicted,
        special_s=special_s,
    )
    return predicted, trace


# ---------------------------------------------------------------------------
# special structural forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialFormMatch:
    pattern: str
    predicted: Fraction | None
    actual: Fraction
    match: bool
    note: str = ""


def verify_special_forms(G: GroupTable) -> list[SpecialFormMatch]:
    """Detect which classical structural hypotheses hold and compare the
    predicted Pr with the direct count. Empty list when none applies."""
    out: list[SpecialFormMatch] = []
    if is_abelian(G):
        return out
    actual = pr_direct(G)
    derived = derived_subgroup(G)
    zent = center(G)
    central_quotient = quotient(G, zent)

    if derived.order == 2:
        rank = _elementary_abelian_two_rank(central_quotient)
        if rank is not None and rank % 2 == 0 and rank > 0:
            s = rank // 2
            predicted = Fraction(1, 2) * (1 + Fraction(1, 4**s))
            out.append(
                SpecialFormMatch(
                    pattern="derived2-central-quotient-elementary",
                    predicted=predicted,
                    actual=actual,
                    match=predicted == actual,
                    note=f"s={s}",
                )
            )

    if derived.order == 3 and _looks_like_s3(central_quotient):
        predicted = Fraction(1, 2)
        out.append(
            SpecialFormMatch(
                pattern="derived3-central-quotient-s3",
                predicted=predicted,
                actual=actual,
                match=predicted == actual,
            )
        )

    inter = sorted(set(derived.members) & set(zent.members))
    if derived.order == 4 and len(inter) == 2:
        cent = centralizer(G, derived.members)
        cent_table = subgroup_table(G, cent)
        idx = cent.order // center(cent_table).order
        s = 0
        q = idx
        while q > 1 and q % 4 == 0:
            q //= 4
            s += 1
        if q == 1:
            predicted = Fraction(1, 4) * (
                1 + Fraction(1, 4) + Fraction(1, 2 ** (2 * s + 1))
            )
            out.append(
                SpecialFormMatch(
                    pattern="derived4-central2",
                    predicted=predicted,
                    actual=actual,
                    match=predicted == actual,
                    note=f"s={s}",
                )
            )
        else:
            out.append(
                SpecialFormMatch(
                    pattern="derived4-central2",
                    predicted=None,
                    actual=actual,
                    match=False,
                    note="centralizer central index is not a power of 4",
                )
            )

    d_table = subgroup_table(G, derived)
    if derived.order == 6 and is_abelian(d_table) and len(inter) == 2:
        diff = actual - Fraction(1, 4)
        den = diff.denominator
        power_of_two = den >= 8 and (den & (den - 1)) == 0
        ok = diff.numerator == 1 and power_of_two
        out.append(
            SpecialFormMatch(
                pattern="derived6-central2",
                predicted=actual if ok else None,
                actual=actual,
                match=ok,
                note=f"pr - 1/4 = {format_rational(diff)}",
            )
        )
    return out


# ---------------------------------------------------------------------------
# bound suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundResult:
    """One bound evaluation. ``holds is None`` means "skipped" and the
    note says why; otherwise lhs/rhs hold the exact compared quantities
    (both None when the comparison is structural rather than numeric)."""

    bound: str
    relation: str
    lhs: Fraction | None
    rhs: Fraction | None
    holds: bool | None
    note: str = ""

    @property
    def skipped(self) -> bool:
        return self.holds is None

    def to_json_dict(self) -> dict:
        return {
            "bound": self.bound,
            "relation": self.relation,
            "lhs": None if self.lhs is None else format_rational(self.lhs),
            "rhs": None if self.rhs is None else format_rational(self.rhs),
            "holds": self.holds,
            "note": self.note,
        }


@dataclass
class BoundContext:
    """Optional inputs for :func:`check_bounds`.

    ``min_nonlinear_degree`` comes from construction metadata (never
    computed here). ``orbit_subgroup``/``orbit_class_bound`` drive the
    orbit-counting bound; when the class bound is absent it is computed
    over all subgroups of the quotient if that fits under the cutoff.
    """

    min_nonlinear_degree: int | None = None
    orbit_subgroup: Subgroup | None = None
    orbit_class_bound: int | None = None
    skip_fitting: bool = False
    fitting_cutoff: int = SUBGROUP_CUTOFF
    subgroup_cutoff: int = SUBGROUP_CUTOFF


@dataclass(frozen=True)
class PrReport:
    name: str
    order: int
    k: int
    pr: Fraction
    center_index: int
    bounds: tuple[BoundResult, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "k": self.k,
            "pr": format_rational(self.pr),
            "center_index": self.center_index,
            "bounds": [b.to_json_dict() for b in self.bounds],
        }

    def to_csv(self) -> str:
        """Two CSV lines (header and row) with one column per bound."""
        head = ["name", "order", "k", "pr", "center_index"]
        row = [self.name, str(self.order), str(self.k),
               format_rational(self.pr), str(self.center_index)]
        for b in self.bounds:
            head.append(b.bound)
            row.append("skipped" if b.skipped else ("holds" if b.holds else "FAILS"))
        return ",".join(head) + "\n" + ",".join(row) + "\n"

    @staticmethod
    def from_json_dict(data: dict) -> "PrReport":
        bounds = tuple(
            BoundResult(
                bound=b["bound"],
                relation=b["relation"],
                lhs=None if b["lhs"] is None else Fraction(b["lhs"]),
                rhs=None if b["rhs"] is None else Fraction(b["rhs"]),
                holds=b["holds"],
                note=b.get("note", ""),
            )
            for b in data.get("bounds", [])
        )
        return PrReport(
            name=data["name"],
            order=data["order"],
            k=data["k"],
            pr=Fraction(data["pr"]),
            center_index=data["center_index"],
            bounds=bounds,
        )


def erdos_turan_holds(order: int, k: int) -> bool:
    """k >= log2(log2(order)), decided exactly in integers.

    Equivalent to order <= 2^(2^k); when 2^k already reaches the bit
    length of the order the inequality is settled without forming the
    double power.
    """
    if order <= 2:
        return True
    if (1 << min(k, 64)) >= order.bit_length():
        return True
    return order <= 2 ** (2**k)


def check_bounds(G: GroupTable, context: BoundContext | None = None) -> PrReport:
    """Evaluate every applicable classical bound exactly.

    Inapplicable bounds are reported as skipped entries, never dropped.
    """
    ctx = context or BoundContext()
    n = G.order
    k = conjugacy_classes(G).count
    pr = Fraction(k, n)
    zent = center(G)
    center_index = n // zent.order
    abelian = center_index == 1
    results: list[BoundResult] = []

    if abelian:
        results.append(
            BoundResult("gustafson", "<=", None, None, None, "abelian group")
        )
        results.append(
            BoundResult("gustafson-equality", "iff", None, None, None, "abelian group")
        )
    else:
        results.append(
            BoundResult("gustafson", "<=", pr, GUSTAFSON_BOUND, pr <= GUSTAFSON_BOUND)
        )
        is_eq = pr == GUSTAFSON_BOUND
        klein = _looks_like_klein_four(quotient(G, zent))
        results.append(
            BoundResult(
                "gustafson-equality",
                "iff",
                None,
                None,
                is_eq == klein,
                "equality at 5/8 holds exactly when the central quotient is "
                "the Klein four-group",
            )
        )

    if n <= 2:
        results.append(
            BoundResult("erdos-turan", ">=", None, None, None, "order <= 2")
        )
    else:
        holds = erdos_turan_holds(n, k)
        small = (1 << min(k, 6)) < 64
        rhs = Fraction(2 ** (2**k)) if small else None
        results.append(
            BoundResult(
                "erdos-turan",
                "<=",
                Fraction(n),
                rhs,
                holds,
                "class count k vs log2(log2(order)), checked as order <= 2^(2^k)",
            )
        )

    if ctx.skip_fitting or n > ctx.fitting_cutoff:
        results.append(
            BoundResult("fitting-index", "<=", None, None, None, "skipped by context")
        )
    else:
        fit = fitting_subgroup(G, cutoff=ctx.fitting_cutoff)
        idx = n // fit.order
        results.append(
            BoundResult(
                "fitting-index",
                "<=",
                pr * pr,
                Fraction(1, idx),
                pr * pr <= Fraction(1, idx),
                "squared to keep the comparison rational",
            )
        )

    derived_order = _derived_order(G)
    rhs = Fraction(1, 4) + Fraction(3, 4) * Fraction(1, derived_order)
    results.append(BoundResult("derived-bound", "<=", pr, rhs, pr <= rhs))

    d = ctx.min_nonlinear_degree
    if d is None or abelian:
        why = "abelian group" if abelian else "no degree metadata"
        results.append(BoundResult("min-degree-lower", "<", None, None, None, why))
        results.append(BoundResult("min-degree-upper", "<=", None, None, None, why))
    else:
        low = Fraction(1, derived_order)
        up = Fraction(1, d * d) + (1 - Fraction(1, d * d)) * Fraction(1, derived_order)
        results.append(BoundResult("min-degree-lower", "<", low, pr, low < pr))
        results.append(BoundResult("min-degree-upper", "<=", pr, up, pr <= up))

    if ctx.orbit_subgroup is None:
        results.append(
            BoundResult("orbit-bound", "<=", None, None, None, "no subgroup supplied")
        )
    else:
        N = ctx.orbit_subgroup
        orbits = orbit_count_on_normal(G, N)
        quot = quotient(G, N)
        c = ctx.orbit_class_bound
        if c is None and quot.order <= ctx.subgroup_cutoff:
            c = max(
                conjugacy_classes(subgroup_table(quot, S)).count
                for S in all_subgroups(quot, cutoff=ctx.subgroup_cutoff)
            )
        if c is None:
            results.append(
                BoundResult(
                    "orbit-bound", "<=", None, None, None,
                    "no class bound supplied and quotient above cutoff",
                )
            )
        else:
            rhs = Fraction(c * orbits, n)
            results.append(BoundResult("orbit-bound", "<=", pr, rhs, pr <= rhs))

    return PrReport(
        name=G.name,
        order=n,
        k=k,
        pr=pr,
        center_index=center_index,
        bounds=tuple(results),
    )


def _derived_order(G: GroupTable) -> int:
    return derived_subgroup(G).order


# ---------------------------------------------------------------------------
# decomposition over an abelian normal subgroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EgyptianForm:
    """Unit-fraction shape of Pr(G) relative to an abelian normal H.

    For coset representatives x_1 = 1, x_2, ..., x_n the grid entry
    ``s_sizes[i][j]`` counts pairs (h1, h2) in H x H with h1*x_i and
    h2*x_j commuting. Each nonzero entry equals |H|^2 * n_ij / (n_i n_j)
    where n_i is the size of the image of h -> [h, x_i] and n_ij the
    size of the pairwise intersection of those images; the grid then
    rewrites Pr(G) as (1/n^2) * sum(1/x_k) with positive integers x_k,
    x_1 = 1.
    """

    index: int
    coset_reps: tuple[int, ...]
    image_sizes: tuple[int, ...]
    intersection_sizes: tuple[tuple[int, ...], ...]
    s_sizes: tuple[tuple[int, ...], ...]
    x_list: tuple[int, ...]
    pr: Fraction

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "coset_reps": list(self.coset_reps),
            "image_sizes": list(self.image_sizes),
            "intersection_sizes": [list(r) for r in self.intersection_sizes],
            "s_sizes": [list(r) for r in self.s_sizes],
            "x_list": list(self.x_list),
            "pr": format_rational(self.pr),
        }


def abelian_decomposition(G: GroupTable, H: Subgroup) -> EgyptianForm:
    """Decompose Pr(G) over an abelian normal subgroup H of index n.

    Coset representatives are deterministic (smallest element per coset,
    cosets ordered by smallest element, identity first). All pair counts
    are brute force over H x H; the dichotomy "each count is 0 or
    |H|^2 n_ij/(n_i n_j)" and the reconstruction of Pr are asserted.
    """
    members = np.asarray(H.members, dtype=_DTYPE)
    block = G.op[np.ix_(members, members)]
    if not np.array_equal(block, block.T):
        raise PreconditionFailed("subgroup is not abelian")
    if not is_normal(G, H):
        raise PreconditionFailed("subgroup is not normal")

    n_total = G.order
    h_order = H.order
    coset_of = np.full(n_total, -1, dtype=_DTYPE)
    reps: list[int] = []
    for x in range(n_total):
        if coset_of[x] >= 0:
            continue
        coset_of[G.op[members, x]] = len(reps)
        reps.append(x)
    n = len(reps)

    h_mask = np.zeros(n_total, dtype=bool)
    h_mask[members] = True

    images: list[np.ndarray] = []
    image_sets: list[frozenset[int]] = []
    for x in reps:
        t1 = G.op[G.inv[members], G.inv[x]]
        t2 = G.op[t1, members]
        img = np.unique(G.op[t2, x])
        if not h_mask[img].all():
            raise PreconditionFailed("commutator image escapes the subgroup")
        images.append(img)
        image_sets.append(frozenset(int(v) for v in img))
    image_sizes = tuple(int(img.size) for img in images)

    # one block reduction of the commuting matrix gives the whole grid
    by_coset = np.argsort(coset_of, kind="stable").astype(_DTYPE)
    comm = (G.op == G.op.T)[np.ix_(by_coset, by_coset)]
    grid = comm.reshape(n, h_order, n, h_order).sum(axis=(1, 3))

    inter_sizes = [[0] * n for _ in range(n)]
    s_sizes = [[0] * n for _ in range(n)]
    x_list: list[int] = []
    total_pairs = 0
    op = G.op
    inv = G.inv
    for i in range(n):
        xi = reps[i]
        for j in range(n):
            xj = reps[j]
            n_ij = len(image_sets[i] & image_sets[j])
            inter_sizes[i][j] = n_ij
            count = int(grid[i, j])
            expected = h_order * h_order * n_ij // (image_sizes[i] * image_sizes[j])
            if count not in (0, expected):
                raise AssertionError(
                    f"pair-count dichotomy violated at cosets ({i},{j}): "
                    f"{count} not in {{0, {expected}}}"
                )
            # emptiness of H_j  intersect  [x_j,x_i]*H_i must match count == 0
            h_ij = int(op[op[op[inv[xj], inv[xi]], xj], xi])
            shift_row = op[h_ij]
            hat_nonempty = any(
                int(shift_row[u]) in image_sets[j] for u in images[i]
            )
            if hat_nonempty != (count > 0):
                raise AssertionError(
                    f"coset-gate mismatch at ({i},{j}): "
                    f"nonempty={hat_nonempty} but count={count}"
                )
            s_sizes[i][j] = count
            total_pairs += count
            if count:
                x_list.append(h_order * h_order // count)

    pr = Fraction(total_pairs, n_total * n_total)
    recon = Fraction(sum(Fraction(1, x) for x in x_list), n * n)
    if recon != pr or pr != pr_direct(G):
        raise AssertionError("unit-fraction reconstruction does not match Pr")
    if not x_list or x_list[0] != 1 or not (1 <= len(x_list) <= n * n):
        raise AssertionError("x-list shape invariant violated")

    return EgyptianForm(
        index=n,
        coset_reps=tuple(reps),
        image_sizes=image_sizes,
        intersection_sizes=tuple(tuple(r) for r in inter_sizes),
        s_sizes=tuple(tuple(r) for r in s_sizes),
        x_list=tuple(x_list),
        pr=pr,
    )
