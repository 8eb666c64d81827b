"""Exact unit-fraction machinery: equation solving and gap certificates.

For a fixed term count n, let S_n be the set of sums 1/x_1 + ... + 1/x_n
over positive integers x_i (x_i = 1 is allowed). Two classical facts
drive everything here:

* for fixed n and rational q, the equation sum(1/x_i) = q has finitely
  many solutions, found by the bounded recursion in which the largest
  remaining fraction 1/x satisfies (remaining)/count <= 1/x <= remaining;

* below any probe l > 0 the set S_n has a maximum element, so every
  rational probe has a genuine gap (max_below(l), l) free of S_n values.

The second fact is computed, not just asserted, by the gap recursion

    f(1, l) = 1/(floor(1/l) + 1)
    f(n, l) = max over 1/x < l of 1/x + f(n-1, l - 1/x)

whose infinitely many branches collapse as follows: once
1/x < l - f(n-1, l), the inner probe l - 1/x exceeds f(n-1, l), which is
therefore still the inner maximum (no S_(n-1) element lies between it
and l, hence none between it and l - 1/x); all such "stabilized"
branches evaluate to 1/x + f(n-1, l), which is largest at the smallest
admissible x. Only the finitely many x with 1/x >= l - f(n-1, l) need
exact recursion. Induction on n grounds the argument: at n = 1 the gap
below l is explicit. This threshold reconstruction is our own; the
resulting certificates are independently re-checked by interval scans in
the test suite.

The recursion is memoized on exact rationals with a bounded LRU cache,
because probes cluster near interesting limit points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NoElementBelow
from .rationals import format_rational

_MEMO_SIZE = 1 << 16


@dataclass(frozen=True)
class UnitFractionMultiset:
    """A non-increasing tuple of positive integer denominators."""

    terms: tuple[int, ...]

    def __post_init__(self):
        if not all(isinstance(t, int) and t >= 1 for t in self.terms):
            raise ValueError("terms must be positive integers")
        if any(a < b for a, b in zip(self.terms, self.terms[1:])):
            raise ValueError("terms must be non-increasing")

    @property
    def value(self) -> Fraction:
        return sum((Fraction(1, t) for t in self.terms), Fraction(0))

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return " ".join(str(t) for t in self.terms)


@dataclass(frozen=True)
class GapCertificate:
    """Witness that no n-term value lies in (max_below, l).

    When ``max_below`` is absent the certified statement is that the
    whole interval (0, l) is empty, and epsilon equals l.
    """

    n: int
    l: Fraction
    max_below: Fraction | None
    epsilon: Fraction
    witness: UnitFractionMultiset | None
    search_trace: tuple[str, ...] = ()

    def __post_init__(self):
        if self.max_below is not None:
            if not (self.max_below < self.l):
                raise ValueError("max_below must lie strictly below the probe")
            if self.epsilon != self.l - self.max_below:
                raise ValueError("epsilon must equal l - max_below")
            if self.witness is None or self.witness.value != self.max_below:
                raise ValueError("witness must reproduce max_below exactly")
        elif self.epsilon != self.l:
            raise ValueError("empty certificate must have epsilon = l")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "l": format_rational(self.l),
            "max_below": None if self.max_below is None else format_rational(self.max_below),
            "epsilon": format_rational(self.epsilon),
            "witness": None if self.witness is None else list(self.witness.terms),
        }


@dataclass(frozen=True)
class SpectrumQuery:
    """Gap query against the scaled candidate value set of index n."""

    index: int
    probe: Fraction
    result: GapCertificate

    def to_json_dict(self) -> dict:
        out = self.result.to_json_dict()
        out["index"] = self.index
        return out


# ---------------------------------------------------------------------------
# exact equation solving
# ---------------------------------------------------------------------------


def solve_exact(n: int, q) -> list[UnitFractionMultiset]:
    """All non-increasing solutions of sum(1/x_i, i=1..n) = q.

    Empty when unsolvable (q <= 0 or q > n). Output is sorted
    lexicographically on the non-increasing term tuples.
    """
    if n < 1:
        raise ValueError("term count must be >= 1")
    q = Fraction(q)
    found: list[tuple[int, ...]] = []
    if q > 0:
        _solve_rec(n, q, 1, (), found)
    return [
        UnitFractionMultiset(t)
        for t in sorted(tuple(reversed(asc)) for asc in found)
    ]


def _solve_rec(
    k: int,
    rem: Fraction,
    lo: int,
    prefix: tuple[int, ...],
    out: list[tuple[int, ...]],
) -> None:
    if k == 1:
        if rem.numerator == 1 and rem.denominator >= lo:
            out.append(prefix + (rem.denominator,))
        return
    if rem <= 0:
        return
    if k == 2:
        # same bounded loop, in plain integers: 1/x + 1/y = a/b with
        # x <= y forces b/a < x <= 2b/a and y = bx/(ax - b)
        a, b = rem.numerator, rem.denominator
        for x in range(max(lo, b // a + 1), 2 * b // a + 1):
            t = a * x - b
            num = b * x
            if num % t == 0:
                y = num // t
                if y >= x:
                    out.append(prefix + (x, y))
        return
    # the largest remaining fraction 1/d satisfies rem/k <= 1/d <= rem
    d_lo = max(lo, -(-rem.denominator // rem.numerator))
    d_hi = (k * rem.denominator) // rem.numerator
    for d in range(d_lo, d_hi + 1):
        _solve_rec(k - 1, rem - Fraction(1, d), d, prefix + (d,), out)


# ---------------------------------------------------------------------------
# gap recursion
# ---------------------------------------------------------------------------


def _floor_inv(l: Fraction) -> int:
    """floor(1/l) for positive l."""
    return l.denominator // l.numerator


@lru_cache(maxsize=_MEMO_SIZE)
def _gap(n: int, l: Fraction) -> tuple[Fraction, tuple[int, ...]]:
    """(max of S_n strictly below l, one witness as a denominator tuple)."""
    if n == 1:
        x = _floor_inv(l) + 1
        return Fraction(1, x), (x,)
    prev_val, prev_wit = _gap(n - 1, l)
    threshold = l - prev_val
    x_stab = _floor_inv(threshold) + 1
    best_val = Fraction(1, x_stab) + prev_val
    best_wit = (x_stab,) + prev_wit
    x_min = _floor_inv(l) + 1
    for x in range(x_min, x_stab):
        val, wit = _gap(n - 1, l - Fraction(1, x))
        cand = Fraction(1, x) + val
        if cand > best_val:
            best_val, best_wit = cand, (x,) + wit
    return best_val, best_wit


def max_below(n: int, l) -> GapCertificate:
    """The maximum of S_n in (0, l), with witness and gap width.

    Such a maximum always exists for l > 0 (sums with huge denominators
    are arbitrarily small), so ``NoElementBelow`` is defensive only.

    Cost warning: the number of exact branches at level n is about the
    reciprocal of the level-(n-1) gap below l, which can shrink
    double-exponentially in n (Sylvester-style growth). Probes are exact
    and results certified at any size, but small probes with four or
    more terms can be astronomically expensive.
    """
    if n < 1:
        raise ValueError("term count must be >= 1")
    l = Fraction(l)
    if l <= 0:
        raise NoElementBelow(f"no {n}-term value below {format_rational(l)}")
    value, wit = _gap(n, l)
    witness = UnitFractionMultiset(tuple(sorted(wit, reverse=True)))
    trace = _top_trace(n, l)
    return GapCertificate(
        n=n,
        l=l,
        max_below=value,
        epsilon=l - value,
        witness=witness,
        search_trace=trace,
    )


def _top_trace(n: int, l: Fraction) -> tuple[str, ...]:
    """Top-level branch log (diagnostic; bounded size)."""
    if n == 1:
        return (f"terms=1 probe={format_rational(l)} closed form",)
    prev_val, _ = _gap(n - 1, l)
    x_stab = _floor_inv(l - prev_val) + 1
    x_min = _floor_inv(l) + 1
    return (
        f"terms={n} probe={format_rational(l)} "
        f"exact-branches={x_min}..{x_stab - 1} stabilized-at={x_stab}",
    )


def descend(n: int, l, count: int) -> list[Fraction]:
    """Iterated max_below: the first ``count`` values of S_n below l."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out: list[Fraction] = []
    probe = Fraction(l)
    for _ in range(count):
        probe = max_below(n, probe).max_below
        out.append(probe)
    return out


@dataclass(frozen=True)
class LimitPointWitness:
    """Outcome of an accumulation-point query, with a solving multiset."""

    is_limit_point: bool
    m: int | None = None
    witness: UnitFractionMultiset | None = None

    def __bool__(self) -> bool:
        return self.is_limit_point


def is_limit_point(n: int, q) -> LimitPointWitness:
    """Whether q is an accumulation point of S_n.

    The accumulation points of S_n are exactly {0} together with all
    S_m for m < n (send the remaining n - m denominators to infinity);
    isolated members of S_n itself do not count here.
    """
    if n < 1:
        raise ValueError("term count must be >= 1")
    q = Fraction(q)
    if q == 0:
        return LimitPointWitness(True, m=0, witness=None)
    for m in range(1, n):
        sols = solve_exact(m, q)
        if sols:
            return LimitPointWitness(True, m=m, witness=sols[0])
    return LimitPointWitness(False)


def candidate_gap(n: int, l) -> SpectrumQuery:
    """Gap certificate for the scaled candidate value set of index n.

    The candidate set is {(1/n^2)(1 + s)} for s = 0 or s in S_m with
    m <= n^2 - 1; it contains every commuting probability achieved with
    an abelian normal subgroup of index n, but is generally a strict
    superset (grid entries are not independent), so certified gaps are
    lower bounds on the true spectrum gaps.
    """
    if n < 1:
        raise ValueError("index must be >= 1")
    l = Fraction(l)
    if l <= 0:
        raise NoElementBelow(f"no candidate value below {format_rational(l)}")
    inner = n * n * l - 1
    if inner <= 0:
        raise NoElementBelow(
            f"no candidate value below {format_rational(l)} at index {n}"
        )
    best_s = Fraction(0)
    best_wit: tuple[int, ...] = ()
    for m in range(1, n * n):
        val, wit = _gap(m, inner)
        if val > best_s:
            best_s, best_wit = val, wit
    value = (1 + best_s) / (n * n)
    scaled = (n * n,) + tuple(n * n * x for x in best_wit)
    witness = UnitFractionMultiset(tuple(sorted(scaled, reverse=True)))
    cert = GapCertificate(
        n=len(scaled),
        l=l,
        max_below=value,
        epsilon=l - value,
        witness=witness,
        search_trace=(
            f"index={n} probe={format_rational(l)} "
            f"inner-probe={format_rational(inner)} best-terms={len(best_wit)}",
        ),
    )
    return SpectrumQuery(index=n, probe=l, result=cert)
