"""Exact rational distributions over group elements and their convolution.

Masses are stdlib Fractions, so every operation here is exact; equality
of distributions is literal equality of rationals.  Distributions are
sparse dicts (absent element = zero mass) and immutable by convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .groups import FiniteGroup, same_group

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class GroupMismatchError(ValueError):
    """Two values from incompatible groups were combined."""


def _require_same(g: FiniteGroup, h: FiniteGroup) -> None:
    if not same_group(g, h):
        raise GroupMismatchError(f"cannot mix elements of {g.name} and {h.name}")


@dataclass(frozen=True)
class TwoPointVar:
    """A random element uniform on two distinct points {a, b} of a group."""

    group: FiniteGroup
    a: int
    b: int

    def __post_init__(self):
        for x in (self.a, self.b):
            if not 0 <= x < self.group.size:
                raise ValueError(f"element index {x} out of range for {self.group.name}")
        if self.a == self.b:
            raise ValueError(
                f"two-point variable needs distinct points, got {{{self.a}, {self.a}}} "
                "(an element equal to its own inverse cannot form a symmetric pair)"
            )

    def sorted_points(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)

    def __repr__(self) -> str:
        return f"{{{self.group.names[self.a]},{self.group.names[self.b]}}}"


class ExactDist:
    """Probability distribution with exact rational point masses."""

    __slots__ = ("group", "masses")

    def __init__(self, group: FiniteGroup, masses: Mapping[int, Fraction]):
        cleaned: dict[int, Fraction] = {}
        total = ZERO
        for x, p in masses.items():
            p = Fraction(p)
            if p == 0:
                continue
            if not 0 <= x < group.size:
                raise ValueError(f"support element {x} out of range for {group.name}")
            if p < 0 or p > 1:
                raise ValueError(f"mass of element {x} is {p}, outside [0, 1]")
            cleaned[x] = p
            total += p
        if total != 1:
            raise ValueError(f"masses sum to {total}, expected exactly 1")
        self.group = group
        self.masses = cleaned

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactDist):
            return NotImplemented
        return same_group(self.group, other.group) and self.masses == other.masses

    def __hash__(self):
        return hash((self.group.key, tuple(sorted(self.masses.items()))))

    def mass(self, x: int) -> Fraction:
        return self.masses.get(x, ZERO)

    def support(self) -> list[int]:
        return sorted(self.masses)

    def items(self):
        return self.masses.items()

    def __repr__(self) -> str:
        parts = ", ".join(f"{self.group.names[x]}: {p}" for x, p in sorted(self.masses.items()))
        return f"ExactDist({self.group.name}; {parts})"


def point_mass(g: FiniteGroup, x: int) -> ExactDist:
    return ExactDist(g, {x: ONE})


def uniform_pair(v: TwoPointVar) -> ExactDist:
    return ExactDist(v.group, {v.a: HALF, v.b: HALF})


def symmetric_pair(g: FiniteGroup, x: int) -> TwoPointVar:
    """The uniform variable on {x, x^-1}; rejects order-2 and identity elements."""
    return TwoPointVar(g, x, g.inv(x))


def convolve(d1: ExactDist, d2: ExactDist) -> ExactDist:
    """Law of X*Y for independent X ~ d1, Y ~ d2 (order matters)."""
    _require_same(d1.group, d2.group)
    table = d1.group.table
    out: dict[int, Fraction] = {}
    for x, px in d1.masses.items():
        row = table[x]
        for y, py in d2.masses.items():
            z = int(row[y])
            out[z] = out.get(z, ZERO) + px * py
    return ExactDist(d1.group, out)


def product_walk(g: FiniteGroup, vars: Sequence[ExactDist | TwoPointVar]) -> ExactDist:
    """Exact law of the left-to-right product X_1 * ... * X_n.

    Accepts distributions or two-point variables; an empty sequence gives
    the point mass at the identity.
    """
    acc = point_mass(g, g.identity)
    for v in vars:
        d = uniform_pair(v) if isinstance(v, TwoPointVar) else v
        _require_same(g, d.group)
        acc = convolve(acc, d)
    return acc


def top_k_mass(d: ExactDist, k: int) -> Fraction:
    """Exact sum of the k largest point masses (the sup of P(X in A) over |A| = k)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return ZERO
    largest = sorted(d.masses.values(), reverse=True)[:k]
    return sum(largest, ZERO)


def top_k_witness(d: ExactDist, k: int) -> tuple[int, ...]:
    """One set A of size min(k, |support|) attaining top_k_mass, lowest indices first."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    ranked = sorted(d.masses.items(), key=lambda item: (-item[1], item[0]))
    return tuple(sorted(x for x, _ in ranked[:k]))


def mass_of_set(d: ExactDist, a: Iterable[int]) -> Fraction:
    """Exact P(X in A)."""
    total = ZERO
    for x in set(a):
        if not 0 <= x < d.group.size:
            raise ValueError(f"element {x} out of range for {d.group.name}")
        total += d.mass(x)
    return total


def pushforward_inverse(d: ExactDist) -> ExactDist:
    """Law of X^-1 when X ~ d."""
    inv = d.group.inverse
    return ExactDist(d.group, {int(inv[x]): p for x, p in d.masses.items()})
