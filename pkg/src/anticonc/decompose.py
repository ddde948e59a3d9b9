"""Split a rational distribution with masses <= 1/2 into two-point uniforms.

The construction clears denominators into a multiset of 2N support entries
(each element repeated proportionally to its mass, counts doubled to keep
the total even), sorts it grouping equal elements, and pairs entry i with
entry i+N.  No element fills more than N slots, so the two entries of each
pair are always distinct; merging equal pairs gives a convex combination
of two-point uniform laws that reconstructs the input exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dist import ExactDist, HALF, TwoPointVar
from .groups import FiniteGroup, same_group


@dataclass(frozen=True)
class PairMixture:
    """A convex combination of two-point uniform distributions."""

    components: tuple[tuple[TwoPointVar, Fraction], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture needs at least one component")
        total = sum((w for _, w in self.components), Fraction(0))
        if total != 1:
            raise ValueError(f"component weights sum to {total}, expected exactly 1")
        if any(w <= 0 for _, w in self.components):
            raise ValueError("component weights must be positive")


def decompose_to_pairs(d: ExactDist) -> PairMixture:
    """Write d as a mixture of uniform two-point laws, exactly.

    Requires every mass <= 1/2 and support of size >= 2; a mass above 1/2
    cannot be split into pairs of distinct points (the same obstruction
    that an order-2 element poses to the odd-order bound).
    """
    support = d.support()
    if len(support) < 2:
        raise ValueError("cannot decompose a point mass: support must have >= 2 elements")
    offenders = [x for x in support if d.mass(x) > HALF]
    if offenders:
        x = offenders[0]
        raise ValueError(
            f"mass of element {x} is {d.mass(x)} > 1/2; a distribution with a "
            "majority point admits no two-point-uniform decomposition"
        )
    den = math.lcm(*(d.mass(x).denominator for x in support))
    # 2N entries: element x appears 2 * mass(x) * den times; N = den.
    big_n = den
    entries: list[int] = []
    for x in support:
        entries.extend([x] * (2 * d.mass(x).numerator * (den // d.mass(x).denominator)))
    assert len(entries) == 2 * big_n
    # entries are sorted by element index already (support() is sorted)
    weights: dict[tuple[int, int], int] = {}
    for i in range(big_n):
        a, b = entries[i], entries[i + big_n]
        pair = (a, b) if a < b else (b, a)
        weights[pair] = weights.get(pair, 0) + 1
    components = tuple(
        (TwoPointVar(d.group, a, b), Fraction(c, big_n)) for (a, b), c in sorted(weights.items())
    )
    return PairMixture(components)


def mixture_law(p: PairMixture, g: FiniteGroup) -> ExactDist:
    """The distribution a PairMixture stands for: sum of weight * uniform{a, b}."""
    masses: dict[int, Fraction] = {}
    for var, weight in p.components:
        if not same_group(var.group, g):
            raise ValueError(f"mixture component on {var.group.name} does not live in {g.name}")
        half = weight * HALF
        for x in (var.a, var.b):
            masses[x] = masses.get(x, Fraction(0)) + half
    return ExactDist(g, masses)
