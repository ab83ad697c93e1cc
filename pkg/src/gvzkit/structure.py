"""Structural computations: conjugacy classes, centralizers, commutators,
flat classes, the normal-subgroup lattice, central series and Sylow theory.

Everything here is a pure function of an immutable Group; the heavier results
are memoized on the group's cache, so repeat calls are cheap and outputs are
deterministic (ties are always broken by least element index).
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import (Group, Subgroup, cached, full_subgroup, mask_from_indices,
                     mask_indices, trivial_subgroup)


class UnsupportedStructureError(ValueError):
    """A computation that needs structure the group does not have."""


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p:: p] = b"\x00" * len(sieve[p * p:: p])
    return [p for p in range(2, n + 1) if sieve[p]]


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_prime_power(n: int) -> bool:
    return n > 1 and len(prime_factors(n)) == 1


@dataclass(frozen=True)
class ConjugacyClass:
    rep: int
    members: tuple[int, ...]
    size: int
    inverse_class: int
    element_order: int


class ClassPartition:
    """Conjugacy classes in least-representative order; class 0 is {identity}."""

    __slots__ = ("group", "classes", "class_of", "power_map", "_masks")

    def __init__(self, group, classes, class_of, power_map):
        self.group = group
        self.classes = classes
        self.class_of = class_of
        self.power_map = power_map
        self._masks = [mask_from_indices(c.members) for c in classes]

    def __len__(self):
        return len(self.classes)

    def class_mask(self, cid: int) -> int:
        return self._masks[cid]


def conjugacy_classes(g: Group) -> ClassPartition:
    return cached(g, "classes", lambda: _conjugacy_classes(g))


def _conjugacy_classes(g: Group) -> ClassPartition:
    n = g.order
    rows = g._rows
    inv = g._inv
    class_of = [-1] * n
    classes: list[ConjugacyClass] = []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        cid = len(classes)
        orbit = {rows[rows[inv[y]][x]][y] for y in range(n)}
        members = tuple(sorted(orbit))
        for m in members:
            class_of[m] = cid
        classes.append(ConjugacyClass(rep=x, members=members, size=len(members),
                                      inverse_class=-1,
                                      element_order=g.element_order(x)))
    fixed = []
    for c in classes:
        fixed.append(ConjugacyClass(c.rep, c.members, c.size,
                                    class_of[g.inv(c.rep)], c.element_order))
    power_map = {
        p: tuple(class_of[g.power(c.rep, p)] for c in fixed)
        for p in _primes_upto(g.exponent)
    }
    return ClassPartition(g, tuple(fixed), tuple(class_of), power_map)


def centralizer_order(g: Group, x: int) -> int:
    part = conjugacy_classes(g)
    return g.order // part.classes[part.class_of[x]].size


def center(g: Group) -> Subgroup:
    def build():
        part = conjugacy_classes(g)
        mask = 0
        for c in part.classes:
            if c.size == 1:
                mask |= 1 << c.rep
        return Subgroup(g, mask)

    return cached(g, "center", build)


# -- subgroup machinery ------------------------------------------------------


def close_mask(g: Group, mask: int) -> int:
    """Smallest subgroup containing the masked elements (product closure)."""
    rows = g._rows
    mask |= 1
    members = mask_indices(mask)
    seen = mask
    head = 0
    while head < len(members):
        x = members[head]
        head += 1
        row = rows[x]
        for y in members[:head]:
            for z in (row[y], rows[y][x]):
                if not (seen >> z) & 1:
                    seen |= 1 << z
                    members.append(z)
    return seen


def generated_subgroup(g: Group, gens) -> Subgroup:
    return Subgroup(g, close_mask(g, mask_from_indices(gens)))


def normal_closure(g: Group, gens) -> Subgroup:
    mask = 0
    for x in gens:
        for y in g.elements():
            mask |= 1 << g.conj(x, y)
    return Subgroup(g, close_mask(g, mask))


def commutator_subgroup(g: Group, a: Subgroup, b: Subgroup) -> Subgroup:
    mask = 0
    for x in a.indices():
        for y in b.indices():
            mask |= 1 << g.comm(x, y)
    return Subgroup(g, close_mask(g, mask))


def derived_subgroup(g: Group) -> Subgroup:
    return cached(g, "derived",
                  lambda: commutator_subgroup(g, full_subgroup(g), full_subgroup(g)))


def join(a: Subgroup, b: Subgroup) -> Subgroup:
    if a.parent is not b.parent:
        raise ValueError("subgroups of different parents")
    return Subgroup(a.parent, close_mask(a.parent, a.members | b.members))


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    if a.parent is not b.parent:
        raise ValueError("subgroups of different parents")
    return Subgroup(a.parent, a.members & b.members)


def commutator_with_group(g: Group, x: int) -> Subgroup:
    """The subgroup [x, G] generated by all commutators of x with G."""
    mask = 0
    for y in g.elements():
        mask |= 1 << g.comm(x, y)
    return Subgroup(g, close_mask(g, mask))


def is_flat(g: Group, x: int) -> bool:
    """Whether the class of x equals the coset x[x,G] (size comparison)."""
    part = conjugacy_classes(g)
    size = part.classes[part.class_of[x]].size
    return size == commutator_with_group(g, x).order


def flat_class_ids(g: Group) -> tuple[int, ...]:
    def build():
        part = conjugacy_classes(g)
        return tuple(cid for cid, c in enumerate(part.classes) if is_flat(g, c.rep))

    return cached(g, "flat_classes", build)


def all_flat_in(g: Group, mask: int) -> tuple[bool, int | None]:
    """Whether every masked element is flat in g; returns a witness otherwise."""
    part = conjugacy_classes(g)
    flat = set(flat_class_ids(g))
    for cid, c in enumerate(part.classes):
        if cid not in flat and (mask >> c.rep) & 1:
            return False, c.rep
    return True, None


def normal_subgroups(g: Group) -> list[Subgroup]:
    """All normal subgroups, as the join closure of conjugacy-class closures."""

    def build():
        part = conjugacy_classes(g)
        gens = sorted({close_mask(g, part.class_mask(cid))
                       for cid in range(len(part))})
        found = {1}
        queue = [1]
        joins: dict[int, int] = {}
        while queue:
            h = queue.pop()
            for cmask in gens:
                if cmask & ~h == 0:
                    continue
                u = h | cmask
                closed = joins.get(u)
                if closed is None:
                    closed = close_mask(g, u)
                    joins[u] = closed
                if closed not in found:
                    found.add(closed)
                    queue.append(closed)
        masks = sorted(found, key=lambda m: (m.bit_count(), m))
        return [Subgroup(g, m) for m in masks]

    return cached(g, "normals", build)


# -- central series and nilpotence -------------------------------------------


@dataclass(frozen=True)
class SeriesResult:
    terms: tuple[Subgroup, ...]
    kind: str  # "lower-central" | "upper-central"
    stabilized: bool


@dataclass(frozen=True)
class CentralSeries:
    lower: SeriesResult
    upper: SeriesResult
    is_nilpotent: bool
    nilpotence_class: int | None
    hypercenter: Subgroup


def central_series(g: Group) -> CentralSeries:
    return cached(g, "central_series", lambda: _central_series(g))


def _central_series(g: Group) -> CentralSeries:
    whole = full_subgroup(g)
    lower = [whole]
    while True:
        nxt = commutator_subgroup(g, lower[-1], whole)
        if nxt.members == lower[-1].members:
            break
        lower.append(nxt)

    upper = [trivial_subgroup(g)]
    while True:
        prev = upper[-1].members
        mask = 0
        for x in g.elements():
            if all((prev >> g.comm(x, y)) & 1 for y in g.elements()):
                mask |= 1 << x
        if mask == prev:
            break
        upper.append(Subgroup(g, mask))

    hypercenter = upper[-1]
    nilpotent = hypercenter.members == whole.members
    nclass = len(lower) - 1 if nilpotent and lower[-1].order == 1 else None
    if nilpotent and nclass is None:
        # the two series must agree on nilpotence
        raise AssertionError("central series disagree on nilpotence")
    return CentralSeries(
        lower=SeriesResult(tuple(lower), "lower-central", True),
        upper=SeriesResult(tuple(upper), "upper-central", True),
        is_nilpotent=nilpotent,
        nilpotence_class=nclass,
        hypercenter=hypercenter,
    )


def is_nilpotent(g: Group) -> bool:
    return central_series(g).is_nilpotent


# -- Sylow and Hall subgroups -------------------------------------------------


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def sylow_subgroup(g: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup, by normalizer ascent from a least-index p-element.

    For nilpotent groups the (unique) Sylow subgroup is read off the
    element-order partition directly.
    """
    if g.order % p:
        raise ValueError(f"{p} does not divide the group order {g.order}")
    target = _p_part(g.order, p)
    if is_nilpotent(g):
        mask = mask_from_indices(
            x for x in g.elements() if _p_part(g.element_order(x), p) == g.element_order(x))
        sub = Subgroup(g, mask)
        if sub.order != target:
            raise AssertionError("p-element set of a nilpotent group is not Sylow")
        return sub
    seed = next(x for x in g.elements() if g.element_order(x) == p)
    current = close_mask(g, 1 << seed)
    while current.bit_count() < target:
        normalizer = 0
        members = mask_indices(current)
        for y in g.elements():
            if all((current >> g.conj(h, y)) & 1 for h in members):
                normalizer |= 1 << y
        grow = None
        outside = normalizer & ~current
        for y in mask_indices(outside):
            if (current >> g.power(y, p)) & 1:
                grow = y
                break
        if grow is None:
            raise AssertionError("normalizer ascent stalled below Sylow order")
        current = close_mask(g, current | (1 << grow))
    return Subgroup(g, current)


def hall_complement(g: Group, p: int) -> Subgroup:
    """The normal Hall p-complement of a nilpotent group."""
    if g.order % p:
        raise ValueError(f"{p} does not divide the group order {g.order}")
    if not is_nilpotent(g):
        raise UnsupportedStructureError(
            "Hall p-complement is only computed for nilpotent groups")
    mask = mask_from_indices(x for x in g.elements() if g.element_order(x) % p)
    return Subgroup(g, mask)
