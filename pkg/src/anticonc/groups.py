"""Finite groups as dense Cayley tables with 0-based element indices.

Every constructor funnels into one representation: an immutable table of
products plus precomputed identity, inverses, element orders and display
names.  Elements are plain ints in ``range(size)``; they only make sense
relative to their owning group, and all downstream operations check group
compatibility before mixing values.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import IO, Sequence, Union

import numpy as np

from .config import max_group_entries

_custom_key_counter = itertools.count()


class GroupValidationError(ValueError):
    """A table failed one of the group axioms; the message names the witness."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[i, j]`` is the index of ``g_i * g_j``.  Instances are immutable
    and safe to share across threads.  Equality is object identity; two
    builtin constructions with the same structural ``key`` (e.g. two calls
    to ``make_cyclic(6)``) are interchangeable via :func:`same_group`.
    """

    size: int
    table: np.ndarray  # int64, shape (size, size), read-only
    identity: int
    inverse: np.ndarray  # int64, shape (size,)
    orders: np.ndarray  # int64, shape (size,)
    names: tuple[str, ...]
    name: str
    key: tuple = field(default=())

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inverse[i])

    def order_of(self, i: int) -> int:
        return int(self.orders[i])

    def elements(self) -> range:
        return range(self.size)

    def power(self, i: int, t: int) -> int:
        """i-th element raised to integer power t (t may be negative)."""
        if t < 0:
            return self.power(self.inv(i), -t)
        acc = self.identity
        for _ in range(t):
            acc = int(self.table[acc, i])
        return acc

    @functools.cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, size={self.size})"


def same_group(g: FiniteGroup, h: FiniteGroup) -> bool:
    """True when elements of g and h may be mixed (same object or same builtin)."""
    return g is h or (g.key == h.key and g.key != ())


def _check_entries(size: int, cap: int | None) -> None:
    entries = size * size
    limit = max_group_entries(cap)
    if entries > limit:
        raise ValueError(
            f"group table would have {entries} entries, over the cap of {limit}; "
            "raise the cap (max_entries argument / ANTICONC_MAX_GROUP) to allow it"
        )


def _finish(
    table: np.ndarray,
    names: Sequence[str],
    name: str,
    key: tuple,
    orders: np.ndarray | None = None,
) -> FiniteGroup:
    table = np.ascontiguousarray(table, dtype=np.int64)
    size = table.shape[0]
    identity = _find_identity(table)
    if identity is None:
        raise GroupValidationError("table has no two-sided identity element")
    inverse = _find_inverses(table, identity)
    if orders is None:
        orders = _orders_from_table(table, identity)
    table.setflags(write=False)
    inverse.setflags(write=False)
    orders.setflags(write=False)
    return FiniteGroup(
        size=size,
        table=table,
        identity=identity,
        inverse=inverse,
        orders=np.asarray(orders, dtype=np.int64),
        names=tuple(names),
        name=name,
        key=key,
    )


def _find_identity(table: np.ndarray) -> int | None:
    size = table.shape[0]
    idx = np.arange(size)
    for e in range(size):
        if np.array_equal(table[e], idx) and np.array_equal(table[:, e], idx):
            return e
    return None


def _find_inverses(table: np.ndarray, identity: int) -> np.ndarray:
    size = table.shape[0]
    inverse = np.empty(size, dtype=np.int64)
    for i in range(size):
        hits = np.nonzero(table[i] == identity)[0]
        if len(hits) != 1 or table[hits[0], i] != identity:
            raise GroupValidationError(f"element {i} has no two-sided inverse")
        inverse[i] = hits[0]
    return inverse


def _orders_from_table(table: np.ndarray, identity: int) -> np.ndarray:
    size = table.shape[0]
    orders = np.empty(size, dtype=np.int64)
    for i in range(size):
        x, t = i, 1
        while x != identity:
            x = int(table[x, i])
            t += 1
            if t > size:
                raise GroupValidationError(f"element {i} has no finite order <= size")
        orders[i] = t
    return orders


# ---------------------------------------------------------------------------
# constructors


def make_cyclic(m: int, max_entries: int | None = None) -> FiniteGroup:
    """Additive group of residues mod m; element i is named "i"."""
    if m < 1:
        raise ValueError(f"cyclic group needs m >= 1, got {m}")
    _check_entries(m, max_entries)
    idx = np.arange(m, dtype=np.int64)
    table = (idx[:, None] + idx[None, :]) % m
    orders = m // np.gcd(idx, m) if m > 1 else np.ones(1, dtype=np.int64)
    orders = orders.astype(np.int64)
    orders[0] = 1
    return _finish(table, [str(i) for i in range(m)], f"Z{m}", ("cyclic", m), orders)


def make_direct_product(g: FiniteGroup, h: FiniteGroup, max_entries: int | None = None) -> FiniteGroup:
    """Componentwise product; element (a, b) is packed as a*|h| + b."""
    size = g.size * h.size
    _check_entries(size, max_entries)
    table = (g.table[:, None, :, None] * h.size + h.table[None, :, None, :]).reshape(size, size)
    orders = np.lcm(g.orders[:, None], h.orders[None, :]).reshape(size)
    names = [f"({a},{b})" for a in g.names for b in h.names]
    key = ("product", g.key, h.key) if g.key != () and h.key != () else ("product", next(_custom_key_counter))
    return _finish(table, names, f"{g.name}x{h.name}", key, orders.astype(np.int64))


def make_cyclic_power(m: int, l: int, max_entries: int | None = None) -> FiniteGroup:
    """Direct product of l copies of the cyclic group of order m."""
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    group = make_cyclic(m, max_entries)
    for _ in range(l - 1):
        group = make_direct_product(group, make_cyclic(m, max_entries), max_entries)
    return group


def make_dihedral(m: int, max_entries: int | None = None) -> FiniteGroup:
    """Symmetries of the regular m-gon, size 2m.

    Index k < m is the rotation r^k; index m+k is the reflection s*r^k.
    Internally an element is (t, a) acting on residues as x -> a + (-1)^t x,
    composed as functions (left factor applied last).
    """
    if m < 2:
        raise ValueError(f"dihedral group needs m >= 2, got {m}")
    size = 2 * m
    _check_entries(size, max_entries)

    def decode(i: int) -> tuple[int, int]:
        # reflection s*r^k sends x to -(x + k) = (-k) - x, so (1, a) <-> k = -a
        if i < m:
            return 0, i
        return 1, (-(i - m)) % m

    def encode(t: int, a: int) -> int:
        return a % m if t == 0 else m + ((-a) % m)

    table = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        t1, a1 = decode(i)
        for j in range(size):
            t2, a2 = decode(j)
            # (t1,a1) o (t2,a2): x -> a2 + (-1)^t2 x -> a1 + (-1)^t1 (a2 + (-1)^t2 x)
            t = t1 ^ t2
            a = (a1 + (a2 if t1 == 0 else -a2)) % m
            table[i, j] = encode(t, a)
    orders = np.empty(size, dtype=np.int64)
    orders[:m] = m // np.gcd(np.arange(m), m)
    orders[0] = 1
    orders[m:] = 2
    names = [f"r^{k}" for k in range(m)] + [f"s*r^{k}" for k in range(m)]
    return _finish(table, names, f"D{m}", ("dihedral", m), orders)


def make_symmetric(d: int, max_entries: int | None = None) -> FiniteGroup:
    """Symmetric group on d letters (d <= 7), permutations in lexicographic order."""
    if not 1 <= d <= 7:
        raise ValueError(f"symmetric group supported for 1 <= d <= 7, got {d}")
    perms = list(itertools.permutations(range(d)))
    size = len(perms)
    _check_entries(size, max_entries)
    index = {p: i for i, p in enumerate(perms)}
    table = np.empty((size, size), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[x]] for x in range(d))]
    orders = np.array([_perm_order(p) for p in perms], dtype=np.int64)
    names = ["(" + " ".join(map(str, p)) + ")" for p in perms]
    return _finish(table, names, f"S{d}", ("symmetric", d), orders)


def _perm_order(p: tuple[int, ...]) -> int:
    seen = [False] * len(p)
    order = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        order = math.lcm(order, length)
    return order


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(math.isqrt(p)) + 1))


def make_gl2(p: int, max_entries: int | None = None) -> FiniteGroup:
    """Invertible 2x2 matrices over the residue field mod p (p prime, <= 7)."""
    if not _is_prime(p):
        raise ValueError(f"GL2 needs a prime modulus, got {p}")
    if p > 7:
        raise ValueError(f"GL2 table construction capped at p <= 7, got {p} (use sampling instead)")
    mats = [
        (a, b, c, d)
        for a in range(p)
        for b in range(p)
        for c in range(p)
        for d in range(p)
        if (a * d - b * c) % p != 0
    ]
    size = len(mats)
    _check_entries(size, max_entries)
    index = {m: i for i, m in enumerate(mats)}
    arr = np.array(mats, dtype=np.int64)
    a, b, c, d = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
    table = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        e, f, g, h = mats[i]
        pa = (e * a + f * c) % p
        pb = (e * b + f * d) % p
        pc = (g * a + h * c) % p
        pd = (g * b + h * d) % p
        for j in range(size):
            table[i, j] = index[(int(pa[j]), int(pb[j]), int(pc[j]), int(pd[j]))]
    names = [f"[[{m[0]},{m[1]}],[{m[2]},{m[3]}]]" for m in mats]
    return _finish(table, names, f"GL2({p})", ("gl2", p))


# ---------------------------------------------------------------------------
# order queries


def element_order(g: FiniteGroup, x: int) -> int:
    """Least t >= 1 with x^t = identity."""
    if not 0 <= x < g.size:
        raise ValueError(f"element index {x} out of range for {g.name}")
    return g.order_of(x)


def elements_with_min_order(g: FiniteGroup, m: int) -> list[int]:
    """All elements of order >= m, in index order (never contains the identity)."""
    if m < 2:
        raise ValueError(f"min order must be >= 2, got {m}")
    return [i for i in g.elements() if g.orders[i] >= m]


# ---------------------------------------------------------------------------
# load / save / validate


def validate_group(g: FiniteGroup) -> None:
    """Exhaustively check the group axioms and the stored metadata.

    Raises GroupValidationError naming the first violated triple.  The
    associativity sweep is O(size^3) but vectorized one row at a time.
    """
    table, size = g.table, g.size
    if table.shape != (size, size):
        raise GroupValidationError(f"table shape {table.shape} does not match size {size}")
    if table.min() < 0 or table.max() >= size:
        raise GroupValidationError("table entries out of range")
    idx = np.arange(size)
    if not (np.array_equal(table[g.identity], idx) and np.array_equal(table[:, g.identity], idx)):
        raise GroupValidationError(f"declared identity {g.identity} is not two-sided")
    for i in range(size):
        if len(set(table[i].tolist())) != size:
            raise GroupValidationError(f"not left-cancellative: row {i} is not a permutation")
        if len(set(table[:, i].tolist())) != size:
            raise GroupValidationError(f"not right-cancellative: column {i} is not a permutation")
    for i in range(size):
        if table[i, g.inverse[i]] != g.identity or table[g.inverse[i], i] != g.identity:
            raise GroupValidationError(f"inverse of element {i} is wrong")
    for i in range(size):
        lhs = table[table[i], :]  # (i*j)*l for all j, l
        rhs = table[i, table]  # i*(j*l)
        if not np.array_equal(lhs, rhs):
            j, l = np.argwhere(lhs != rhs)[0]
            raise GroupValidationError(
                f"not associative: ({i}*{j})*{l} = {lhs[j, l]} but {i}*({j}*{l}) = {rhs[j, l]}"
            )
    recomputed = _orders_from_table(table, g.identity)
    if not np.array_equal(recomputed, g.orders):
        bad = int(np.nonzero(recomputed != g.orders)[0][0])
        raise GroupValidationError(f"stored order of element {bad} is wrong")
    for i in range(size):
        if g.size % int(g.orders[i]) != 0:
            raise GroupValidationError(f"order of element {i} does not divide the group size")


def load_cayley(source: Union[str, bytes, IO]) -> FiniteGroup:
    """Load a group from the Cayley JSON format and validate it fully.

    Format: {"size": N, "names": [str * N], "table": [[int * N] * N]}.
    Identity and inverses are inferred and checked, never trusted.
    """
    if hasattr(source, "read"):
        doc = json.load(source)
    else:
        doc = json.loads(source)
    if not isinstance(doc, dict):
        raise GroupValidationError("Cayley document must be a JSON object")
    try:
        size = int(doc["size"])
        names = list(doc["names"])
        rows = list(doc["table"])
    except (KeyError, TypeError) as exc:
        raise GroupValidationError(f"malformed Cayley document: missing {exc}") from exc
    if size < 1:
        raise GroupValidationError(f"size must be >= 1, got {size}")
    if len(names) != size or len(rows) != size or any(len(r) != size for r in rows):
        raise GroupValidationError("names/table dimensions do not match size")
    table = np.asarray(rows, dtype=np.int64)
    if table.min() < 0 or table.max() >= size:
        raise GroupValidationError("table entries out of range")
    # row/column bijectivity first: cheap, and required before inverse search
    for i in range(size):
        if len(set(table[i].tolist())) != size:
            raise GroupValidationError(f"not left-cancellative: row {i} is not a permutation")
        if len(set(table[:, i].tolist())) != size:
            raise GroupValidationError(f"not right-cancellative: column {i} is not a permutation")
    group = _finish(table, [str(n) for n in names], str(doc.get("name", f"cayley{size}")), ("loaded", next(_custom_key_counter)))
    validate_group(group)
    return group


def dump_cayley(g: FiniteGroup) -> dict:
    """Inverse of load_cayley (identity/inverses are re-inferred on load)."""
    return {"size": g.size, "name": g.name, "names": list(g.names), "table": g.table.tolist()}


_BUILTIN_HELP = "Z<m>, Z<m>^<l>, D<m>, S<d>, GL2_<p>, or @path.json"


def group_from_spec(spec: str, max_entries: int | None = None) -> FiniteGroup:
    """Parse the CLI group grammar: Z6, Z3^2, D4, S4, GL2_3, @file.json."""
    spec = spec.strip()
    if spec.startswith("@"):
        with open(spec[1:], "rb") as fh:
            return load_cayley(fh)
    try:
        if spec.startswith("GL2_"):
            return make_gl2(int(spec[4:]), max_entries)
        if spec.startswith("Z"):
            if "^" in spec:
                base, power = spec[1:].split("^", 1)
                return make_cyclic_power(int(base), int(power), max_entries)
            if "x" in spec:
                parts = [int(s.lstrip("Z")) for s in spec.split("x")]
                group = make_cyclic(parts[0], max_entries)
                for m in parts[1:]:
                    group = make_direct_product(group, make_cyclic(m, max_entries), max_entries)
                return group
            return make_cyclic(int(spec[1:]), max_entries)
        if spec.startswith("D"):
            return make_dihedral(int(spec[1:]), max_entries)
        if spec.startswith("S"):
            return make_symmetric(int(spec[1:]), max_entries)
    except ValueError as exc:
        if "invalid literal" not in str(exc):
            raise
    raise ValueError(f"unrecognized group spec {spec!r}; expected {_BUILTIN_HELP}")
