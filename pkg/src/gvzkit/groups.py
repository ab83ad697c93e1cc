"""Finite groups as multiplication tables on element indices 0..n-1.

The identity is always index 0. Groups are immutable once built and carry a
private cache slot that derived computations (conjugacy classes, character
tables, ...) use for memoization, keeping every operation observationally
pure.

The on-disk GRP text format:

    # comment lines start with '#'
    perm <d>          one generator per following line, d space-separated
                      1-based images
    table <n>         n following lines of n space-separated 0-based indices;
                      row/column 0 must be the identity

Tables of order at most 512 are checked for associativity exhaustively on
load; larger tables get identity, inverse and Latin-square checks only.
"""

from __future__ import annotations

import math
import re
from array import array
from pathlib import Path

DEFAULT_ORDER_CAP = 4096

_ASSOC_CHECK_LIMIT = 512


class GrpParseError(ValueError):
    """Malformed GRP input, or a table violating the group axioms."""


class OrderCapError(ValueError):
    """A construction would exceed the configured order cap."""


def cached(group: "Group", key, thunk):
    """Memoize a derived computation on the group's private cache."""
    cache = group._cache
    if key not in cache:
        cache[key] = thunk()
    return cache[key]


class Group:
    """Finite group with total multiplication on indices 0..order-1."""

    __slots__ = ("label", "order", "exponent", "_rows", "_inv", "_orders",
                 "factors", "embeddings", "_cache")

    def __init__(self, rows, label: str):
        n = len(rows)
        if n == 0:
            raise GrpParseError("empty multiplication table")
        packed = []
        for row in rows:
            if len(row) != n:
                raise GrpParseError("multiplication table is not square")
            try:
                arr = row if isinstance(row, array) else array("H", row)
            except (OverflowError, TypeError) as exc:
                raise GrpParseError(f"bad table entry: {exc}") from None
            if any(v >= n for v in arr):
                raise GrpParseError("table entry out of range")
            packed.append(arr)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "_rows", packed)
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "factors", None)
        object.__setattr__(self, "embeddings", None)
        if packed[0][0] != 0:
            raise GrpParseError("identity failure: 0*0 != 0")
        inv = array("H", [0]) * n
        for x in range(n):
            try:
                inv[x] = packed[x].index(0)
            except ValueError:
                raise GrpParseError(f"element {x} has no right inverse") from None
        object.__setattr__(self, "_inv", inv)
        orders = array("H", [0]) * n
        for x in range(n):
            k, y = 1, x
            while y != 0:
                y = packed[y][x]
                k += 1
                if k > n:
                    raise GrpParseError(f"element {x} generates no finite cycle")
            orders[x] = k
        object.__setattr__(self, "_orders", orders)
        object.__setattr__(self, "exponent", math.lcm(*orders) if n > 1 else 1)

    def __setattr__(self, name, value):
        raise AttributeError("Group is immutable")

    def __repr__(self):
        return f"Group({self.label!r}, order={self.order})"

    # -- element arithmetic ------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return self._rows[x][y]

    def inv(self, x: int) -> int:
        self._check_index(x)
        return self._inv[x]

    def element_order(self, x: int) -> int:
        self._check_index(x)
        return self._orders[x]

    def power(self, x: int, k: int) -> int:
        self._check_index(x)
        k %= self._orders[x]
        acc = 0
        base = x
        while k:
            if k & 1:
                acc = self._rows[acc][base]
            base = self._rows[base][base]
            k >>= 1
        return acc

    def conj(self, x: int, y: int) -> int:
        """y^-1 * x * y."""
        self._check_index(x)
        self._check_index(y)
        rows = self._rows
        return rows[rows[self._inv[y]][x]][y]

    def comm(self, x: int, y: int) -> int:
        """x^-1 * y^-1 * x * y."""
        self._check_index(x)
        self._check_index(y)
        rows = self._rows
        return rows[rows[rows[self._inv[x]][self._inv[y]]][x]][y]

    def _check_index(self, x) -> None:
        if not isinstance(x, int) or x < 0 or x >= self.order:
            raise IndexError(f"element index {x!r} out of range 0..{self.order - 1}")

    def elements(self) -> range:
        return range(self.order)

    # -- validation --------------------------------------------------------

    def validate(self, *, force_assoc: bool | None = None) -> None:
        """Check the group axioms; raises GrpParseError on failure.

        Associativity is verified exhaustively when order <= 512 (or when
        force_assoc is true); identity, inverses and the Latin-square
        property are always verified.
        """
        n = self.order
        rows = self._rows
        full = list(range(n))
        for x in range(n):
            if rows[0][x] != x or rows[x][0] != x:
                raise GrpParseError(f"identity failure at element {x}")
            if sorted(rows[x]) != full:
                raise GrpParseError(f"row {x} is not a permutation")
            if sorted(rows[y][x] for y in range(n)) != full:
                raise GrpParseError(f"column {x} is not a permutation")
            i = self._inv[x]
            if rows[x][i] != 0 or rows[i][x] != 0:
                raise GrpParseError(f"inverse failure at element {x}")
        do_assoc = force_assoc if force_assoc is not None else n <= _ASSOC_CHECK_LIMIT
        if do_assoc:
            import numpy as np

            t = np.array([list(r) for r in rows], dtype=np.int64)
            for i in range(n):
                if not np.array_equal(t[t[i]], t[i][t]):
                    raise GrpParseError(f"associativity failure involving element {i}")


class Subgroup:
    """Subgroup of a parent group, stored as a bitmask over element indices."""

    __slots__ = ("parent", "members")

    def __init__(self, parent: Group, members: int):
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "members", members)

    def __setattr__(self, name, value):
        raise AttributeError("Subgroup is immutable")

    @property
    def order(self) -> int:
        return self.members.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool((self.members >> x) & 1)

    def indices(self) -> list[int]:
        return mask_indices(self.members)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.label!r})"

    def is_normal(self) -> bool:
        g = self.parent
        mask = self.members
        for h in self.indices():
            for x in g.elements():
                if not (mask >> g.conj(h, x)) & 1:
                    return False
        return True

    def validate(self) -> None:
        """Check closure, identity, inverses and Lagrange divisibility."""
        g = self.parent
        mask = self.members
        if not mask & 1:
            raise ValueError("subgroup does not contain the identity")
        idxs = self.indices()
        for a in idxs:
            if not (mask >> g._inv[a]) & 1:
                raise ValueError(f"subgroup not closed under inversion at {a}")
            row = g._rows[a]
            for b in idxs:
                if not (mask >> row[b]) & 1:
                    raise ValueError(f"subgroup not closed under product at ({a},{b})")
        if g.order % self.order:
            raise ValueError("subgroup order does not divide the group order")


def mask_from_indices(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def mask_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def trivial_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, 1)


def full_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, (1 << g.order) - 1)


class QuotientMap:
    """Surjective homomorphism from a group onto its quotient by a kernel."""

    __slots__ = ("source", "quotient", "projection", "kernel")

    def __init__(self, source: Group, quotient: Group, projection, kernel: Subgroup):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "quotient", quotient)
        object.__setattr__(self, "projection", projection)
        object.__setattr__(self, "kernel", kernel)

    def __setattr__(self, name, value):
        raise AttributeError("QuotientMap is immutable")

    def project(self, x: int) -> int:
        return self.projection[x]

    def preimage_mask(self, quotient_mask: int) -> int:
        mask = 0
        for x in range(self.source.order):
            if (quotient_mask >> self.projection[x]) & 1:
                mask |= 1 << x
        return mask

    def preimage(self, h: Subgroup) -> Subgroup:
        if h.parent is not self.quotient:
            raise ValueError("subgroup does not live in the quotient")
        return Subgroup(self.source, self.preimage_mask(h.members))


# -- construction from permutations and files -------------------------------


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Apply p first, then q."""
    return tuple(q[i] for i in p)


def group_from_permutations(gens, degree: int, *, label: str,
                            cap: int = DEFAULT_ORDER_CAP) -> Group:
    """Close a list of permutations (0-based image tuples) under products.

    Elements are enumerated breadth-first over the generators in listed
    order, identity first, so the indexing is reproducible.
    """
    identity = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise GrpParseError(f"not a permutation of {degree} points: {g}")
    elems = [identity]
    index = {identity: 0}
    head = 0
    while head < len(elems):
        x = elems[head]
        head += 1
        for g in gens:
            y = _compose(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                if len(elems) > cap:
                    raise OrderCapError(f"group order exceeds cap {cap}")
    n = len(elems)
    rows = []
    for x in elems:
        rows.append(array("H", (index[_compose(x, y)] for y in elems)))
    return Group(rows, label)


_HEADER_RE = re.compile(r"^(perm|table)\s+(\d+)$")


def parse_group_text(text: str, *, label: str = "group",
                     cap: int = DEFAULT_ORDER_CAP) -> Group:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GrpParseError("empty group file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise GrpParseError(f"bad header line: {lines[0]!r}")
    kind, size = m.group(1), int(m.group(2))
    body = lines[1:]
    if kind == "perm":
        gens = []
        for ln in body:
            try:
                images = [int(tok) for tok in ln.split()]
            except ValueError:
                raise GrpParseError(f"non-integer generator line: {ln!r}") from None
            if len(images) != size or sorted(images) != list(range(1, size + 1)):
                raise GrpParseError(f"non-permutation line: {ln!r}")
            gens.append(tuple(i - 1 for i in images))
        return group_from_permutations(gens, size, label=label, cap=cap)
    if size > cap:
        raise OrderCapError(f"declared order {size} exceeds cap {cap}")
    if len(body) != size:
        raise GrpParseError(f"expected {size} table rows, found {len(body)}")
    rows = []
    for ln in body:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise GrpParseError(f"non-integer table line: {ln!r}") from None
        if len(row) != size or any(v < 0 or v >= size for v in row):
            raise GrpParseError(f"bad table row: {ln!r}")
        rows.append(row)
    g = Group(rows, label)
    g.validate()
    return g


def load_group_file(path, *, cap: int = DEFAULT_ORDER_CAP) -> Group:
    path = Path(path)
    return parse_group_text(path.read_text(encoding="utf-8"),
                            label=path.stem, cap=cap)


def emit_group_text(g: Group) -> str:
    """Canonical GRP table serialization: LF endings, single spaces."""
    out = [f"table {g.order}"]
    for row in g._rows:
        out.append(" ".join(str(v) for v in row))
    return "\n".join(out) + "\n"


# -- builtin families --------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def cyclic_group(n: int) -> Group:
    if n < 1:
        raise ValueError(f"cyclic order must be positive, got {n}")
    rows = [[(i + j) % n for j in range(n)] for i in range(n)]
    return Group(rows, f"C{n}")


def dihedral_group(order: int) -> Group:
    """Dihedral group of the given (even) order; index i + n*j <-> r^i s^j."""
    if order < 2 or order % 2:
        raise ValueError(f"dihedral order must be even and >= 2, got {order}")
    n = order // 2

    def mul(a, e, b, f):
        return ((a + b) % n if e == 0 else (a - b) % n, (e + f) % 2)

    rows = [[0] * order for _ in range(order)]
    for e in range(2):
        for a in range(n):
            x = a + n * e
            for f in range(2):
                for b in range(n):
                    y = b + n * f
                    c, h = mul(a, e, b, f)
                    rows[x][y] = c + n * h
    return Group(rows, f"D{order}")


def dicyclic_group(order: int) -> Group:
    """Generalized quaternion (dicyclic) group of order 4n; a^i b^j packing."""
    if order < 8 or order % 4:
        raise ValueError(f"dicyclic order must be a multiple of 4 and >= 8, got {order}")
    m = order // 2  # order of a
    half = m // 2
    rows = [[0] * order for _ in range(order)]
    for j in range(2):
        for i in range(m):
            x = i + m * j
            for l in range(2):
                for k in range(m):
                    y = k + m * l
                    if j == 0:
                        c, h = (i + k) % m, l
                    elif l == 0:
                        c, h = (i - k) % m, 1
                    else:
                        c, h = (i - k + half) % m, 0
                    rows[x][y] = c + m * h
    return Group(rows, f"Q{order}")


def elementary_abelian_group(p: int, k: int) -> Group:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("rank must be positive")
    n = p ** k
    if n > DEFAULT_ORDER_CAP:
        raise OrderCapError(f"order {n} exceeds cap {DEFAULT_ORDER_CAP}")

    def add(x, y):
        z, mult = 0, 1
        for _ in range(k):
            z += ((x % p + y % p) % p) * mult
            x //= p
            y //= p
            mult *= p
        return z

    rows = [[add(x, y) for y in range(n)] for x in range(n)]
    return Group(rows, f"E({p}^{k})")


def extraspecial_group(p: int, sign: str) -> Group:
    """Extraspecial group of order p^3; '+' and '-' select the two types.

    For odd p, '+' is the Heisenberg group of exponent p and '-' the group
    of exponent p^2; for p = 2 they are D8 and Q8.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if sign not in ("+", "-"):
        raise ValueError(f"type must be '+' or '-', got {sign!r}")
    label = f"ES({p},{sign})"
    if p == 2:
        base = dihedral_group(8) if sign == "+" else dicyclic_group(8)
        g = Group(base._rows, label)
        return g
    n = p ** 3
    rows = [[0] * n for _ in range(n)]
    if sign == "+":
        # triples (a, b, c): (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')
        for a in range(p):
            for b in range(p):
                for c in range(p):
                    x = (a * p + b) * p + c
                    for a2 in range(p):
                        for b2 in range(p):
                            for c2 in range(p):
                                y = (a2 * p + b2) * p + c2
                                z = (((a + a2) % p) * p + (b + b2) % p) * p \
                                    + (c + c2 + a * b2) % p
                                rows[x][y] = z
    else:
        # a of order p^2, b of order p, b^-1 a b = a^(1+p)
        p2 = p * p
        for j in range(p):
            t = pow(1 + p, j, p2)
            for i in range(p2):
                x = j * p2 + i
                for l in range(p):
                    for k in range(p2):
                        y = l * p2 + k
                        rows[x][y] = ((j + l) % p) * p2 + (i + k * t) % p2
    return Group(rows, label)


def frobenius_group(p: int, q: int) -> Group:
    """Frobenius group of order p*q: affine maps x -> a*x + b on Z/p."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if q < 2 or (p - 1) % q:
        raise ValueError(f"need q >= 2 dividing p-1; got p={p}, q={q}")
    h = next(a for a in range(2, p)
             if pow(a, q, p) == 1 and all(pow(a, d, p) != 1
                                          for d in range(1, q) if q % d == 0))
    powers = [pow(h, i, p) for i in range(q)]
    n = p * q
    rows = [[0] * n for _ in range(n)]
    for i in range(q):
        for b in range(p):
            x = i * p + b
            for j in range(q):
                for c in range(p):
                    y = j * p + c
                    rows[x][y] = ((i + j) % q) * p + (powers[j] * b + c) % p
    return Group(rows, f"Frob({p},{q})")


def symmetric_group(n: int) -> Group:
    """Symmetric group on n letters (n <= 6), generated by (1 2) and the n-cycle."""
    if n < 1 or n > 6:
        raise ValueError(f"symmetric group supported for 1 <= n <= 6, got {n}")
    if n == 1:
        return Group([[0]], "S1")
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple(range(1, n)) + (0,)
    gens = [swap, cycle] if n > 2 else [swap]
    return group_from_permutations(gens, n, label=f"S{n}")


_FAMILIES = {
    "cyclic": (cyclic_group, 1),
    "dihedral": (dihedral_group, 1),
    "quaternion": (dicyclic_group, 1),
    "extraspecial": (extraspecial_group, 2),
    "frobenius": (frobenius_group, 2),
    "symmetric": (symmetric_group, 1),
    "elementary": (elementary_abelian_group, 2),
}


def builtin_family(name: str, *params) -> Group:
    """Construct a named family member, e.g. builtin_family('dihedral', 16)."""
    if name not in _FAMILIES:
        raise ValueError(f"unknown family {name!r}; know {sorted(_FAMILIES)}")
    builder, arity = _FAMILIES[name]
    if len(params) != arity:
        raise ValueError(f"family {name!r} takes {arity} parameter(s)")
    return builder(*params)


# -- products, quotients, materialized subgroups -----------------------------


def direct_product(a: Group, b: Group, *, cap: int = DEFAULT_ORDER_CAP) -> Group:
    """Direct product with index (x, y) -> x*|B| + y; records embeddings."""
    n = a.order * b.order
    if n > cap:
        raise OrderCapError(f"product order {n} exceeds cap {cap}")
    nb = b.order
    arows, brows = a._rows, b._rows
    rows = []
    for x1 in range(a.order):
        arow = arows[x1]
        for y1 in range(nb):
            brow = brows[y1]
            rows.append(array("H", (arow[x2] * nb + brow[y2]
                                    for x2 in range(a.order) for y2 in range(nb))))
    g = Group(rows, f"{a.label}x{b.label}")
    emb_a = Subgroup(g, mask_from_indices(x * nb for x in range(a.order)))
    emb_b = Subgroup(g, mask_from_indices(range(nb)))
    object.__setattr__(g, "factors", (a, b))
    object.__setattr__(g, "embeddings", (emb_a, emb_b))
    return g


def quotient_group(g: Group, n: Subgroup) -> QuotientMap:
    """Quotient by a normal subgroup; cosets are indexed by least member."""
    if n.parent is not g:
        raise ValueError("subgroup belongs to a different group")
    try:
        n.validate()
    except ValueError as exc:
        raise ValueError(f"kernel is not a subgroup: {exc}") from None
    if not n.is_normal():
        raise ValueError("subgroup is not normal")
    order = g.order
    members = n.indices()
    coset = array("h", [-1]) * order
    reps = []
    for x in range(order):
        if coset[x] < 0:
            cid = len(reps)
            reps.append(x)
            row = g._rows[x]
            for h in members:
                coset[row[h]] = cid
    q = len(reps)
    rows = [array("H", (coset[g._rows[reps[i]][reps[j]]] for j in range(q)))
            for i in range(q)]
    quot = Group(rows, f"{g.label}/{n.order}")
    projection = array("H", (coset[x] for x in range(order)))
    return QuotientMap(g, quot, projection, n)


def subgroup_as_group(g: Group, n: Subgroup) -> tuple[Group, tuple[int, ...]]:
    """Materialize a subgroup as a standalone group via its Cayley subtable.

    Returns the new group and the tuple mapping its indices to parent
    indices (ascending, so the identity stays at index 0).
    """
    if n.parent is not g:
        raise ValueError("subgroup belongs to a different group")
    elems = n.indices()
    local = {x: i for i, x in enumerate(elems)}
    rows = []
    for x in elems:
        row = g._rows[x]
        try:
            rows.append(array("H", (local[row[y]] for y in elems)))
        except KeyError:
            raise ValueError("member set is not closed under products") from None
    h = Group(rows, f"{g.label}|{n.order}")
    return h, tuple(elems)
