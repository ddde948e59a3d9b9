"""Exhaustive worst-case search over admissible two-point variables.

For a group, a walk length n and a target size k, enumerate every multiset
(ordered sequence when the group is nonabelian: factor order changes the
law there) of admissible two-point variables, compute each product law
exactly and maximize the top-k mass.  The hot fold runs in the kernel
backend on integer numerators (denominator 2^n); every reported maximum is
re-verified through the exact Fraction convolution path before it leaves
this module.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .bounds import signed_interval_mass, theorem1_bound, theorem2_bound
from .config import max_laws
from .dist import (
    ExactDist,
    TwoPointVar,
    convolve,
    product_walk,
    top_k_mass,
    top_k_witness,
    uniform_pair,
)
from .groups import FiniteGroup

MODE_SYMMETRIC = "symmetric-pairs"
MODE_ANY = "any-pairs"

# int64 law numerators stay exact up to 2^62; longer walks use Fractions.
_KERNEL_MAX_N = 62


class SearchSpaceError(ValueError):
    """The enumeration would evaluate more laws than the cap allows."""

    def __init__(self, laws: int, cap: int):
        self.laws = laws
        self.cap = cap
        super().__init__(
            f"search would evaluate {laws} product laws, over the cap of {cap}; "
            "shrink n or raise the cap (max_laws / ANTICONC_MAX_LAWS)"
        )


class ValidityError(AssertionError):
    """An exhaustive maximum exceeded a proved bound: an implementation bug."""


@dataclass
class SearchResult:
    group: str
    n: int
    k: int
    min_order: int
    mode: str
    enumeration: str  # "multisets" | "sequences"
    max_value: Fraction
    argmax: tuple[TwoPointVar, ...]
    witness_set: tuple[int, ...]
    laws_evaluated: int
    bound_name: Optional[str] = None
    bound_value: Optional[Fraction] = None
    slack: Optional[Fraction] = None
    tight: Optional[bool] = None

    def attach_bound(self, name: str, value: Fraction) -> "SearchResult":
        self.bound_name = name
        self.bound_value = value
        self.slack = value - self.max_value
        self.tight = self.slack == 0
        if self.slack < 0:
            raise ValidityError(
                f"{name} = {value} is below the exhaustive maximum {self.max_value} "
                f"on {self.group} (n={self.n}, k={self.k}, m={self.min_order}): "
                "either the search admitted an inadmissible variable or the bound is miscomputed"
            )
        return self


def symmetric_pair_vars(g: FiniteGroup, min_order: int, dedup: bool = True) -> list[TwoPointVar]:
    """All uniform {x, x^-1} variables with |x| >= min_order.

    Elements of order 2 are their own inverse and cannot form a two-point
    set; they are skipped (whenever they are eligible, min_order = 2 and
    every bound here is 1, so validity checks lose nothing).  With dedup,
    {x, x^-1} appears once; dedup=False enumerates one entry per element
    for the soundness spot-check.
    """
    if min_order < 2:
        raise ValueError(f"min_order must be >= 2, got {min_order}")
    vars: list[TwoPointVar] = []
    seen: set[tuple[int, int]] = set()
    for x in g.elements():
        if x == g.identity or g.orders[x] < min_order or g.inv(x) == x:
            continue
        key = (min(x, g.inv(x)), max(x, g.inv(x)))
        if dedup and key in seen:
            continue
        seen.add(key)
        vars.append(TwoPointVar(g, key[0], key[1]) if dedup else TwoPointVar(g, x, g.inv(x)))
    return vars


def any_pair_vars(g: FiniteGroup) -> list[TwoPointVar]:
    """All uniform two-point variables on distinct elements (identity allowed)."""
    return [TwoPointVar(g, a, b) for a in g.elements() for b in range(a + 1, g.size)]


def _law_count(n_vars: int, n: int, ordered: bool) -> int:
    return n_vars**n if ordered else math.comb(n_vars + n - 1, n)


def _gather_arrays(g: FiniteGroup, vars: Sequence[TwoPointVar]) -> tuple[np.ndarray, np.ndarray]:
    # law_new[z] = law[z * a^-1] + law[z * b^-1]
    ga = np.ascontiguousarray(np.stack([g.table[:, g.inv(v.a)] for v in vars]))
    gb = np.ascontiguousarray(np.stack([g.table[:, g.inv(v.b)] for v in vars]))
    return ga, gb


def _search_fractions(
    g: FiniteGroup, vars: Sequence[TwoPointVar], n: int, k: int, ordered: bool
) -> tuple[Fraction, tuple[int, ...], int]:
    """Exact Fraction enumeration; slow path and independent cross-check."""
    laws = [uniform_pair(v) for v in vars]
    best: Fraction | None = None
    best_combo: tuple[int, ...] | None = None
    count = 0

    def rec(depth: int, start: int, acc: ExactDist, combo: list[int]):
        nonlocal best, best_combo, count
        if depth == n:
            count += 1
            value = top_k_mass(acc, k)
            if best is None or value > best:
                best = value
                best_combo = tuple(combo)
            return
        for v in range(0 if ordered else start, len(vars)):
            combo.append(v)
            rec(depth + 1, v, convolve(acc, laws[v]), combo)
            combo.pop()

    rec(0, 0, product_walk(g, []), [])
    assert best is not None and best_combo is not None
    return best, best_combo, count


def exhaustive_rho(
    g: FiniteGroup,
    n: int,
    k: int,
    min_order: int = 2,
    mode: str = MODE_SYMMETRIC,
    dedup: bool = True,
    laws_cap: int | None = None,
    threads: int = 1,
) -> SearchResult:
    """Exact maximum of the top-k mass of X_1*...*X_n over admissible variables.

    mode 'symmetric-pairs' draws factors uniform on {x, x^-1} with
    |x| >= min_order; mode 'any-pairs' draws factors uniform on any two
    distinct elements.  Abelian groups are enumerated by multiset,
    nonabelian ones by ordered sequence.  The returned argmax is always
    recomputed through the exact convolution path.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if mode == MODE_SYMMETRIC:
        vars = symmetric_pair_vars(g, min_order, dedup=dedup)
    elif mode == MODE_ANY:
        vars = any_pair_vars(g)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected {MODE_SYMMETRIC!r} or {MODE_ANY!r}")
    if not vars:
        raise ValueError(
            f"no admissible two-point variables in {g.name} for mode={mode}, min_order={min_order}"
        )
    ordered = not g.is_abelian
    laws = _law_count(len(vars), n, ordered)
    cap = max_laws(laws_cap)
    if laws > cap:
        raise SearchSpaceError(laws, cap)

    if n <= _KERNEL_MAX_N:
        ga, gb = _gather_arrays(g, vars)
        chunks = _first_index_chunks(len(vars), threads)
        results = []
        if len(chunks) == 1:
            results.append(kernels.search_max_topk(ga, gb, g.identity, n, k, ordered, 0, len(vars)))
        else:
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                futures = [
                    pool.submit(kernels.search_max_topk, ga, gb, g.identity, n, k, ordered, lo, hi)
                    for lo, hi in chunks
                ]
                results = [f.result() for f in futures]
        best_num = -1
        best_combo: tuple[int, ...] | None = None
        evaluated = 0
        for num, combo, cnt in results:  # chunk order preserves lexicographic tie-break
            evaluated += cnt
            if num > best_num:
                best_num = num
                best_combo = combo
        assert best_combo is not None
        max_value = Fraction(best_num, 1 << n)
    else:
        max_value, best_combo, evaluated = _search_fractions(g, vars, n, k, ordered)

    argmax = tuple(vars[v] for v in best_combo)
    law = product_walk(g, argmax)
    recomputed = top_k_mass(law, k)
    if recomputed != max_value:
        raise ValidityError(
            f"kernel reported top-{k} mass {max_value} but exact recomputation of the "
            f"argmax gives {recomputed} on {g.name}"
        )
    return SearchResult(
        group=g.name,
        n=n,
        k=k,
        min_order=min_order,
        mode=mode,
        enumeration="sequences" if ordered else "multisets",
        max_value=max_value,
        argmax=argmax,
        witness_set=top_k_witness(law, k),
        laws_evaluated=evaluated,
    )


def _first_index_chunks(n_vars: int, threads: int) -> list[tuple[int, int]]:
    threads = max(1, min(threads, n_vars))
    if threads == 1:
        return [(0, n_vars)]
    step = (n_vars + threads - 1) // threads
    return [(lo, min(lo + step, n_vars)) for lo in range(0, n_vars, step)]


def verify_theorem1(
    g: FiniteGroup, n: int, k: int, m: int, laws_cap: int | None = None, threads: int = 1
) -> SearchResult:
    """Exhaustive symmetric-pairs maximum against the signed-walk bound."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    result = exhaustive_rho(g, n, k, min_order=m, mode=MODE_SYMMETRIC, laws_cap=laws_cap, threads=threads)
    return result.attach_bound("signed-walk bound", theorem1_bound(n, k, m))


def verify_theorem2(
    g: FiniteGroup, n: int, k: int, m: int, laws_cap: int | None = None, threads: int = 1
) -> SearchResult:
    """Exhaustive any-pairs maximum against the binary-walk bound.

    Requires the group hypothesis: every non-identity order is odd and at
    least m (m odd >= 3).
    """
    if m < 3 or m % 2 == 0:
        raise ValueError(f"the binary-walk bound needs odd m >= 3, got {m}")
    bad_even = [x for x in g.elements() if x != g.identity and g.orders[x] % 2 == 0]
    if bad_even:
        x = bad_even[0]
        raise ValueError(
            f"{g.name} has an element of even order (index {x}, order {g.order_of(x)}); "
            "a power of it has order 2, which caps no probability below 1/2, so the "
            "odd-order bound does not apply"
        )
    too_small = [x for x in g.elements() if x != g.identity and g.orders[x] < m]
    if too_small:
        x = too_small[0]
        raise ValueError(
            f"{g.name} has an element of order {g.order_of(x)} < m = {m}; "
            "the minimal non-identity order must be at least m"
        )
    result = exhaustive_rho(g, n, k, min_order=m, mode=MODE_ANY, laws_cap=laws_cap, threads=threads)
    return result.attach_bound("binary-walk bound", theorem2_bound(n, k, m))


def lemma1_check(g: FiniteGroup, a: Sequence[int], x: int, s: int) -> bool:
    """Whether A = A * x^s.

    Under |x| >= m and s*|A| < m this is always False (translating a small
    set by a high-order element must move it); the boundary cases where the
    hypothesis fails can return True.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if x == g.identity:
        raise ValueError("x must be a non-identity element")
    step = g.power(x, s)
    a_set = set(a)
    shifted = {g.mul(e, step) for e in a_set}
    return shifted == a_set


@dataclass
class ConjectureVerdict:
    group: str
    m: int
    n: int
    k: int
    even_orders_above_m: tuple[int, ...]  # the sequence S
    m1: Optional[int]
    case: str  # "m1 < 2m" | "m1 >= 2m or S empty"
    conjectured_bound: Fraction
    exhaustive_max: Fraction
    counterexample: Optional[dict] = None
    laws_evaluated: int = 0
    notes: list[str] = field(default_factory=list)


def _brute_force_topk(g: FiniteGroup, vars: Sequence[TwoPointVar], k: int) -> Fraction:
    """Independent recomputation: enumerate all 2^n outcomes directly."""
    n = len(vars)
    counts: dict[int, int] = {}
    for picks in iter_product(*(((v.a, v.b)) for v in vars)):
        z = g.identity
        for e in picks:
            z = g.mul(z, e)
        counts[z] = counts.get(z, 0) + 1
    largest = sorted(counts.values(), reverse=True)[:k]
    return Fraction(sum(largest), 1 << n)


def conjecture_probe(
    g: FiniteGroup,
    m: int,
    n: int,
    k: int,
    laws_cap: int | None = None,
    threads: int = 1,
) -> ConjectureVerdict:
    """Probe the open two-case bound for groups with mixed element orders.

    With S the increasing sequence of even element orders in G exceeding m
    (m odd >= 3) and m1 its first entry: case one (m1 < 2m) conjectures the
    signed-walk mass of (-k, k] mod m1 as the bound; case two (m1 >= 2m, or
    S empty) conjectures the binary-walk bound for m.  The probe runs the
    exhaustive symmetric-pairs search over elements of order >= m and
    reports a counterexample only after re-verifying it by brute-force
    enumeration of all 2^n outcomes.  Nothing here asserts the conjecture.
    """
    if m < 3 or m % 2 == 0:
        raise ValueError(f"the probe needs odd m >= 3, got {m}")
    even_orders = sorted({int(o) for o in g.orders if o % 2 == 0 and o > m})
    m1 = even_orders[0] if even_orders else None
    if m1 is not None and m1 < 2 * m:
        case = "m1 < 2m"
        bound = signed_interval_mass(n, k, m1)
    else:
        case = "m1 >= 2m or S empty"
        bound = theorem2_bound(n, k, m)
    result = exhaustive_rho(g, n, k, min_order=m, mode=MODE_SYMMETRIC, laws_cap=laws_cap, threads=threads)
    verdict = ConjectureVerdict(
        group=g.name,
        m=m,
        n=n,
        k=k,
        even_orders_above_m=tuple(even_orders),
        m1=m1,
        case=case,
        conjectured_bound=bound,
        exhaustive_max=result.max_value,
        laws_evaluated=result.laws_evaluated,
    )
    if result.max_value > bound:
        reverified = _brute_force_topk(g, result.argmax, k)
        if reverified != result.max_value:
            raise ValidityError(
                f"counterexample candidate failed re-verification: search says "
                f"{result.max_value}, brute force says {reverified}"
            )
        verdict.counterexample = {
            "argmax": result.argmax,
            "witness_set": result.witness_set,
            "max_value": result.max_value,
            "reverified": True,
        }
        verdict.notes.append("exhaustive maximum exceeds the conjectured bound (re-verified)")
    return verdict
