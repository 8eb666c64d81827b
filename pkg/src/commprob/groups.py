"""Finite groups as validated Cayley tables.

Elements are 0-based indices and index 0 is always the identity; every
constructor relabels its input to honour that. The structural operations
here (centralizers, derived/Fitting subgroups, quotients, cores, subgroup
enumeration) are the raw material for the exact commuting-probability
computations in :mod:`commprob.probability`.

Conventions fixed once for the whole library:

* commutator  ``[x, y] = x^-1 y^-1 x y``
* conjugation ``x^y   = y^-1 x y``

All operations are pure functions; ``GroupTable``, ``Subgroup`` and
``ClassPartition`` are immutable after construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NoIdentity,
    NotAssociative,
    NotClosed,
    NotLatinSquare,
    NotNormal,
    OrderCapExceeded,
)

# Full O(n^3) associativity validation up to this order; beyond it the
# table is spot-checked on random triples and flagged "sampled".
ASSOC_FULL_CUTOFF = 512
ASSOC_SAMPLES = 1_000_000

# Cap for subgroup enumeration (the most expensive primitive here).
SUBGROUP_CUTOFF = 192

# Cap for closures and direct products.
ORDER_CAP = 20_000

_DTYPE = np.int32


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group: ``op[x, y]`` is the product xy, ``inv[x]`` the inverse.

    ``validation`` records how associativity was established: "full",
    "sampled" (orders above the cutoff) or "constructed" (tables built by
    our own constructors, associative by construction).
    """

    order: int
    op: np.ndarray
    inv: np.ndarray
    identity: int = 0
    name: str = ""
    validation: str = "constructed"

    def __post_init__(self):
        self.op.setflags(write=False)
        self.inv.setflags(write=False)

    def mul(self, x: int, y: int) -> int:
        return int(self.op[x, y])

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.name or 'G'}, order={self.order})"

    def canonical_bytes(self) -> bytes:
        """Row-major bytes of the identity-first table (cache/hash key)."""
        return np.ascontiguousarray(self.op, dtype=np.int32).tobytes()


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup given by its sorted member indices inside ``parent``."""

    parent: GroupTable
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted(int(m) for m in self.members))
        object.__setattr__(self, "members", mem)
        if not mem or mem[0] != 0:
            raise ValueError("subgroup must contain the identity (index 0)")
        n = self.parent.order
        if self.parent.order % len(mem) != 0:
            raise ValueError(
                f"subgroup size {len(mem)} does not divide group order {n}"
            )
        arr = np.asarray(mem, dtype=_DTYPE)
        prods = self.parent.op[np.ix_(arr, arr)]
        mask = np.zeros(n, dtype=bool)
        mask[arr] = True
        if not mask[prods].all():
            raise ValueError("member set is not closed under the group operation")

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.name or 'G'})"


@dataclass(frozen=True, eq=False)
class ClassPartition:
    """Conjugacy classes: disjoint element sets plus an element->class map."""

    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray

    def __post_init__(self):
        self.class_of.setflags(write=False)

    @property
    def count(self) -> int:
        return len(self.classes)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0, ..., degree-1}; ``images[i]`` is the image of i."""

    degree: int
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(self.degree)):
            raise ValueError("images must be a bijection of [0, degree)")

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Left-to-right composition: apply self first, then other."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(
            self.degree, tuple(other.images[p] for p in self.images)
        )

    def inverse(self) -> "Permutation":
        out = [0] * self.degree
        for i, im in enumerate(self.images):
            out[im] = i
        return Permutation(self.degree, tuple(out))

    def is_identity(self) -> bool:
        return all(i == im for i, im in enumerate(self.images))


def identity_permutation(degree: int) -> Permutation:
    return Permutation(degree, tuple(range(degree)))


# ---------------------------------------------------------------------------
# cycle notation (1-based at the boundary, 0-based inside)
# ---------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation like ``"(1 2)(3 4)"``.

    Fixed points are omitted; ``""`` and ``"()"`` denote the identity.
    Juxtaposed cycles are applied left to right.
    """
    stripped = _CYCLE_RE.sub("", text).strip()
    if stripped:
        raise ValueError(f"stray characters in cycle notation: {stripped!r}")
    images = list(range(degree))
    for body in _CYCLE_RE.findall(text):
        points = [int(tok) for tok in body.split()]
        if not points:
            continue
        if any(p < 1 or p > degree for p in points):
            raise ValueError(f"cycle point out of range 1..{degree}: ({body})")
        if len(set(points)) != len(points):
            raise ValueError(f"repeated point within a cycle: ({body})")
        cycle_map = {}
        for a, b in zip(points, points[1:] + points[:1]):
            cycle_map[a - 1] = b - 1
        images = [cycle_map.get(im, im) for im in images]
    return Permutation(degree, tuple(images))


def format_cycles(perm: Permutation) -> str:
    """Inverse of :func:`parse_cycles`; identity prints as ``"()"``."""
    seen = [False] * perm.degree
    parts = []
    for start in range(perm.degree):
        if seen[start] or perm.images[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm.images[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm.images[nxt]
        parts.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(parts) if parts else "()"


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------


def _first_bad_latin(op: np.ndarray, axis: int) -> tuple[int, int] | None:
    n = op.shape[0]
    view = op if axis == 0 else op.T
    for i in range(n):
        seen = np.zeros(n, dtype=bool)
        for j in range(n):
            v = view[i, j]
            if seen[v]:
                return (i, j) if axis == 0 else (j, i)
            seen[v] = True
    return None


def _check_associativity(op: np.ndarray, full_cutoff: int, samples: int) -> str:
    n = op.shape[0]
    if n <= full_cutoff:
        chunk = max(1, (2**22) // max(n * n, 1))
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            left = op[op[lo:hi, :], :]
            right = op[lo:hi][:, op.reshape(-1)].reshape(hi - lo, n, n)
            if not np.array_equal(left, right):
                bad = np.argwhere(left != right)[0]
                x, y, z = int(bad[0]) + lo, int(bad[1]), int(bad[2])
                raise NotAssociative(
                    f"(x*y)*z != x*(y*z) at (x,y,z)=({x},{y},{z})", cell=(x, y, z)
                )
        return "full"
    rng = np.random.default_rng(0)
    xs = rng.integers(0, n, size=samples)
    ys = rng.integers(0, n, size=samples)
    zs = rng.integers(0, n, size=samples)
    left = op[op[xs, ys], zs]
    right = op[xs, op[ys, zs]]
    if not np.array_equal(left, right):
        i = int(np.argmax(left != right))
        raise NotAssociative(
            f"(x*y)*z != x*(y*z) at (x,y,z)=({xs[i]},{ys[i]},{zs[i]})",
            cell=(int(xs[i]), int(ys[i]), int(zs[i])),
        )
    return "sampled"


def build_from_cayley(
    table: Sequence[Sequence[int]],
    *,
    name: str = "",
    assoc_full_cutoff: int = ASSOC_FULL_CUTOFF,
    assoc_samples: int = ASSOC_SAMPLES,
) -> GroupTable:
    """Validate a square multiplication table and wrap it as a group.

    The identity is relabeled to index 0 if necessary. Raises
    ``NotClosed`` / ``NoIdentity`` / ``NotLatinSquare`` / ``NotAssociative``,
    each naming the first violating cell.
    """
    op = np.asarray(table, dtype=np.int64)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] == 0:
        raise NotClosed(f"table must be square and nonempty, got shape {op.shape}")
    n = op.shape[0]

    bad = (op < 0) | (op >= n)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NotClosed(
            f"cell ({i},{j}) holds {int(op[i, j])}, outside [0,{n})", cell=(i, j)
        )
    op = op.astype(_DTYPE)

    idx = np.arange(n, dtype=_DTYPE)
    row_ok = (op == idx[None, :]).all(axis=1)
    col_ok = (op == idx[:, None]).all(axis=0)
    ids = np.flatnonzero(row_ok & col_ok)
    if ids.size == 0:
        raise NoIdentity("no two-sided identity element")
    e = int(ids[0])
    if e != 0:
        # swap labels 0 and e
        relabel = idx.copy()
        relabel[0], relabel[e] = e, 0
        op = relabel[op[np.ix_(relabel, relabel)]]

    cell = _first_bad_latin(op, axis=0)
    if cell is not None:
        raise NotLatinSquare(f"row {cell[0]} repeats a value at column {cell[1]}", cell=cell)
    cell = _first_bad_latin(op, axis=1)
    if cell is not None:
        raise NotLatinSquare(f"column {cell[1]} repeats a value at row {cell[0]}", cell=cell)

    validation = _check_associativity(op, assoc_full_cutoff, assoc_samples)

    inv = np.argmax(op == 0, axis=1).astype(_DTYPE)
    if not (op[inv, idx] == 0).all():
        x = int(np.argmax(op[inv, idx] != 0))
        raise NotAssociative(
            f"one-sided inverse at element {x} is not two-sided", cell=(int(inv[x]), x)
        )
    return GroupTable(order=n, op=op, inv=inv, name=name, validation=validation)


def _table_from_elements(elems: list[tuple[int, ...]], degree: int) -> np.ndarray:
    """Cayley table for a closed list of permutations (as image tuples)."""
    n = len(elems)
    arr = np.array(elems, dtype=np.int64)
    op = np.empty((n, n), dtype=_DTYPE)
    if degree <= 15:
        # mixed-radix key fits in int64 for degree <= 15
        radix = (degree ** np.arange(degree, dtype=np.int64))[::-1]
        keys = arr @ radix
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        for i in range(n):
            composed = arr[:, arr[i]]  # (e_i * e_j)(p) = e_j[e_i[p]]
            where = np.searchsorted(sorted_keys, composed @ radix)
            op[i, :] = order[where]
    else:
        index = {t: k for k, t in enumerate(elems)}
        for i in range(n):
            ei = elems[i]
            for j in range(n):
                ej = elems[j]
                op[i, j] = index[tuple(ej[p] for p in ei)]
    return op


def build_from_permutations(
    degree: int,
    generators: Iterable[Permutation],
    *,
    name: str = "",
    order_cap: int = ORDER_CAP,
) -> GroupTable:
    """Close a generating set of permutations into a full group table.

    Elements are numbered by breadth-first discovery with the generator
    order fixed, so identical input always yields identical numbering.
    """
    gens = list(generators)
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator degree {g.degree} != {degree}")
    ident = tuple(range(degree))
    elems: list[tuple[int, ...]] = [ident]
    index = {ident: 0}
    head = 0
    gen_images = [g.images for g in gens]
    while head < len(elems):
        cur = elems[head]
        head += 1
        for gim in gen_images:
            nxt = tuple(gim[p] for p in cur)
            if nxt not in index:
                if len(elems) >= order_cap:
                    raise OrderCapExceeded(
                        f"closure passed the cap of {order_cap} elements"
                    )
                index[nxt] = len(elems)
                elems.append(nxt)
    op = _table_from_elements(elems, degree)
    inv = np.argmax(op == 0, axis=1).astype(_DTYPE)
    return GroupTable(order=len(elems), op=op, inv=inv, name=name)


def direct_product(a: GroupTable, b: GroupTable, *, order_cap: int = ORDER_CAP) -> GroupTable:
    """Componentwise product on index pairs, packed as ``i = x*|B| + y``."""
    n = a.order * b.order
    if n > order_cap:
        raise OrderCapExceeded(f"product order {n} exceeds cap {order_cap}")
    op = (
        a.op[:, None, :, None].astype(_DTYPE) * b.order
        + b.op[None, :, None, :]
    ).reshape(n, n)
    inv = (a.inv[:, None].astype(_DTYPE) * b.order + b.inv[None, :]).reshape(n)
    name = f"{a.name or 'A'}x{b.name or 'B'}"
    return GroupTable(order=n, op=op, inv=inv, name=name)


# ---------------------------------------------------------------------------
# elementwise operations
# ---------------------------------------------------------------------------


def conjugate(G: GroupTable, x: int, y: int) -> int:
    """x^y = y^-1 x y."""
    return int(G.op[G.op[G.inv[y], x], y])


def commutator(G: GroupTable, x: int, y: int) -> int:
    """[x, y] = x^-1 y^-1 x y."""
    return int(G.op[G.op[G.op[G.inv[x], G.inv[y]], x], y])


def element_orders(G: GroupTable) -> list[int]:
    orders = [1] * G.order
    for g in range(1, G.order):
        k, cur = 1, g
        while cur != 0:
            cur = int(G.op[cur, g])
            k += 1
        orders[g] = k
    return orders


def exponent(G: GroupTable) -> int:
    return math.lcm(*element_orders(G))


def is_abelian(G: GroupTable) -> bool:
    return bool(np.array_equal(G.op, G.op.T))


# ---------------------------------------------------------------------------
# closures and subgroups
# ---------------------------------------------------------------------------


def _closure(op: np.ndarray, seed: Iterable[int]) -> np.ndarray:
    """Members of the subgroup generated by ``seed`` (always adds identity)."""
    cur = np.unique(np.fromiter(list(seed) + [0], dtype=_DTYPE))
    while True:
        prods = np.unique(op[np.ix_(cur, cur)])
        if prods.size == cur.size:
            return cur
        cur = prods


def subgroup_from_members(G: GroupTable, members: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(int(m) for m in members))


def subgroup_from_generators(G: GroupTable, generators: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(int(m) for m in _closure(G.op, generators)))


def whole_group(G: GroupTable) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(G, (0,))


def subgroup_table(G: GroupTable, sub: Subgroup | Sequence[int]) -> GroupTable:
    """The member set of ``sub`` as a group in its own right (identity first)."""
    members = np.asarray(
        sub.members if isinstance(sub, Subgroup) else sorted(sub), dtype=_DTYPE
    )
    pos = np.full(G.order, -1, dtype=_DTYPE)
    pos[members] = np.arange(len(members), dtype=_DTYPE)
    op = pos[G.op[np.ix_(members, members)]]
    if (op < 0).any():
        raise ValueError("member set is not closed")
    inv = pos[G.inv[members]]
    return GroupTable(
        order=len(members), op=op, inv=inv, name=f"{G.name}|sub{len(members)}"
    )


def conjugacy_classes(G: GroupTable) -> ClassPartition:
    """Orbit partition under conjugation x -> g^-1 x g."""
    n = G.order
    # conj[g, x] = (g^-1 x) g ; column x is then the whole class of x
    left = G.op[G.inv, :]
    conj = G.op[left, np.arange(n, dtype=_DTYPE)[:, None]]
    class_of = np.full(n, -1, dtype=_DTYPE)
    classes: list[tuple[int, ...]] = []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        orbit = np.unique(conj[:, x])
        class_of[orbit] = len(classes)
        classes.append(tuple(int(v) for v in orbit))
    return ClassPartition(classes=tuple(classes), class_of=class_of)


def centralizer(G: GroupTable, elements: Iterable[int]) -> Subgroup:
    """{g : gs = sg for all s in elements}; with all of G this is the center."""
    elems = np.asarray(sorted(set(int(e) for e in elements)), dtype=_DTYPE)
    if elems.size == 0:
        raise ValueError("centralizer of the empty set is not defined here")
    good = (G.op[:, elems] == G.op[elems, :].T).all(axis=1)
    return Subgroup(G, tuple(int(v) for v in np.flatnonzero(good)))


def center(G: GroupTable) -> Subgroup:
    good = (G.op == G.op.T).all(axis=1)
    return Subgroup(G, tuple(int(v) for v in np.flatnonzero(good)))


def _commutator_values(G: GroupTable, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """All [x, y] for x in rows, y in cols (as a flat unique array)."""
    t1 = G.op[np.ix_(G.inv[rows], G.inv[cols])]
    t2 = G.op[t1, rows[:, None]]
    t3 = G.op[t2, cols[None, :]]
    return np.unique(t3)


def derived_subgroup(G: GroupTable) -> Subgroup:
    """Subgroup generated by all commutators [x, y]."""
    allv = np.arange(G.order, dtype=_DTYPE)
    comms = _commutator_values(G, allv, allv)
    return Subgroup(G, tuple(int(v) for v in _closure(G.op, comms)))


def is_normal(G: GroupTable, H: Subgroup | Sequence[int]) -> bool:
    members = np.asarray(
        H.members if isinstance(H, Subgroup) else sorted(H), dtype=_DTYPE
    )
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    half = G.op[np.ix_(G.inv, members)]
    conj = G.op[half, np.arange(G.order, dtype=_DTYPE)[:, None]]
    return bool(mask[conj].all())


def normal_subgroups(G: GroupTable, *, cutoff: int = SUBGROUP_CUTOFF) -> list[Subgroup]:
    """All normal subgroups, as class-closed unions reached by joining
    normal closures of single classes (far smaller search space than
    filtering the full subgroup list)."""
    if G.order > cutoff:
        raise OrderCapExceeded(f"order {G.order} exceeds enumeration cutoff {cutoff}")
    part = conjugacy_classes(G)
    atoms: dict[bytes, np.ndarray] = {}
    for cls in part.classes:
        closed = _closure(G.op, cls)
        atoms.setdefault(closed.tobytes(), closed)
    trivial = np.asarray([0], dtype=_DTYPE)
    found: dict[bytes, np.ndarray] = {trivial.tobytes(): trivial}
    work = [trivial]
    atom_list = list(atoms.values())
    while work:
        base = work.pop()
        for atom in atom_list:
            joined = _closure(G.op, np.concatenate([base, atom]))
            key = joined.tobytes()
            if key not in found:
                found[key] = joined
                work.append(joined)
    subs = sorted(found.values(), key=lambda m: (m.size, tuple(m)))
    return [Subgroup(G, tuple(int(v) for v in m)) for m in subs]


def all_subgroups(G: GroupTable, *, cutoff: int = SUBGROUP_CUTOFF) -> list[Subgroup]:
    """The complete subgroup list.

    Enumeration extends each known subgroup by one coset representative at
    a time; since <H, hx> = <H, x> only one representative per coset is
    tried. Every subgroup is reachable through a chain of single-element
    extensions, so the list is complete (including perfect subgroups).
    """
    if G.order > cutoff:
        raise OrderCapExceeded(f"order {G.order} exceeds enumeration cutoff {cutoff}")
    n = G.order
    op = G.op
    trivial = np.asarray([0], dtype=_DTYPE)
    found: dict[bytes, np.ndarray] = {trivial.tobytes(): trivial}
    queue = [trivial]
    head = 0
    while head < len(queue):
        H = queue[head]
        head += 1
        if H.size == n:
            continue
        covered = np.zeros(n, dtype=bool)
        covered[H] = True
        for x in range(n):
            if covered[x]:
                continue
            covered[op[H, x]] = True
            J = _closure(op, np.concatenate([H, [x]]))
            key = J.tobytes()
            if key not in found:
                found[key] = J
                queue.append(J)
    subs = sorted(found.values(), key=lambda m: (m.size, tuple(m)))
    return [Subgroup(G, tuple(int(v) for v in m)) for m in subs]


def quotient(G: GroupTable, N: Subgroup) -> GroupTable:
    """Cayley table on the cosets of a normal subgroup.

    Cosets are numbered by their smallest element, so the coset of the
    identity is index 0.
    """
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    n = G.order
    members = np.asarray(N.members, dtype=_DTYPE)
    coset_of = np.full(n, -1, dtype=_DTYPE)
    reps: list[int] = []
    for x in range(n):
        if coset_of[x] >= 0:
            continue
        coset_of[G.op[members, x]] = len(reps)
        reps.append(x)
    reps_arr = np.asarray(reps, dtype=_DTYPE)
    q_op = coset_of[G.op[np.ix_(reps_arr, reps_arr)]]
    q_inv = coset_of[G.inv[reps_arr]]
    return GroupTable(
        order=len(reps), op=q_op, inv=q_inv, name=f"{G.name or 'G'}/N{N.order}"
    )


def normal_core(G: GroupTable, H: Subgroup) -> Subgroup:
    """Intersection of all conjugates of H: the largest normal subgroup
    of G inside H."""
    n = G.order
    members = np.asarray(H.members, dtype=_DTYPE)
    keep = np.zeros(n, dtype=bool)
    keep[members] = True
    for g in range(n):
        conj = G.op[G.op[G.inv[g], members], g]
        mask = np.zeros(n, dtype=bool)
        mask[conj] = True
        keep &= mask
        if keep.sum() == 1:
            break
    return Subgroup(G, tuple(int(v) for v in np.flatnonzero(keep)))


def orbit_count_on_normal(G: GroupTable, N: Subgroup) -> int:
    """Number of conjugation orbits of G on a normal subgroup N."""
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    n = G.order
    allg = np.arange(n, dtype=_DTYPE)
    seen: set[int] = set()
    count = 0
    for m in N.members:
        if m in seen:
            continue
        orbit = np.unique(G.op[G.op[G.inv, m], allg])
        seen.update(int(v) for v in orbit)
        count += 1
    return count


def _lower_central_reaches_trivial(T: GroupTable) -> bool:
    allv = np.arange(T.order, dtype=_DTYPE)
    gamma = allv
    while True:
        comms = _commutator_values(T, allv, gamma)
        nxt = _closure(T.op, comms)
        if nxt.size == 1:
            return True
        if nxt.size == gamma.size:
            return False
        gamma = nxt


def is_nilpotent(G: GroupTable) -> bool:
    """Lower central series reaches the trivial subgroup."""
    return _lower_central_reaches_trivial(G)


def fitting_subgroup(G: GroupTable, *, cutoff: int = SUBGROUP_CUTOFF) -> Subgroup:
    """Join of all nilpotent normal subgroups."""
    if is_nilpotent(G):
        return whole_group(G)
    nilpotent_members = [
        np.asarray(N.members, dtype=_DTYPE)
        for N in normal_subgroups(G, cutoff=cutoff)
        if is_nilpotent(subgroup_table(G, N))
    ]
    joined = _closure(G.op, np.unique(np.concatenate(nilpotent_members)))
    fit = Subgroup(G, tuple(int(v) for v in joined))
    # the join of nilpotent normal subgroups is itself nilpotent and normal
    if not is_normal(G, fit) or not is_nilpotent(subgroup_table(G, fit)):
        raise AssertionError("Fitting subgroup invariant violated")
    return fit


def abelian_normal_subgroups(
    G: GroupTable, *, cutoff: int = SUBGROUP_CUTOFF
) -> list[Subgroup]:
    out = []
    for N in normal_subgroups(G, cutoff=cutoff):
        block = G.op[np.ix_(N.members, N.members)]
        if np.array_equal(block, block.T):
            out.append(N)
    return out


def largest_abelian_normal_subgroup(G: GroupTable, *, cutoff: int = SUBGROUP_CUTOFF) -> Subgroup:
    """Largest abelian normal subgroup; ties broken by lexicographic members."""
    cands = abelian_normal_subgroups(G, cutoff=cutoff)
    return max(cands, key=lambda s: (s.order, tuple(-m for m in s.members)))


def index_two_subgroups(G: GroupTable) -> list[Subgroup]:
    """All subgroups of index 2 (necessarily normal).

    They are exactly the preimages of hyperplanes in G/M where M is
    generated by all squares and commutators.
    """
    n = G.order
    squares = G.op[np.arange(n, dtype=_DTYPE), np.arange(n, dtype=_DTYPE)]
    allv = np.arange(n, dtype=_DTYPE)
    comms = _commutator_values(G, allv, allv)
    M = _closure(G.op, np.unique(np.concatenate([squares, comms])))
    if M.size == n:
        return []
    V = quotient(G, Subgroup(G, tuple(int(v) for v in M)))
    # coordinates of each coset over F_2
    members_M = np.asarray(M, dtype=_DTYPE)
    coset_of = np.full(n, -1, dtype=_DTYPE)
    reps: list[int] = []
    for x in range(n):
        if coset_of[x] >= 0:
            continue
        coset_of[G.op[members_M, x]] = len(reps)
        reps.append(x)
    m = V.order
    coords = np.full(m, -1, dtype=np.int64)
    coords[0] = 0
    basis: list[int] = []
    span = {0: 0}
    for v in range(1, m):
        if coords[v] >= 0:
            continue
        basis.append(v)
        bit = 1 << (len(basis) - 1)
        for w, cw in list(span.items()):
            u = int(V.op[w, v])
            span[u] = cw | bit
            coords[u] = cw | bit
    out = []
    r = len(basis)
    for phi in range(1, 2**r):
        masked = coords[coset_of] & phi
        for shift in (32, 16, 8, 4, 2, 1):  # XOR fold: low bit = parity
            masked ^= masked >> shift
        out.append(Subgroup(G, tuple(int(v) for v in np.flatnonzero(masked & 1 == 0))))
    out.sort(key=lambda s: s.members)
    return out
