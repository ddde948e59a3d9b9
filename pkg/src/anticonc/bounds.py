"""Worst-case walk laws and every closed-form comparison bound.

Two reference walks drive all bounds:

* the signed walk: a sum of n independent uniform +-1 steps reduced mod an
  even modulus M, whose mass on the cyclic interval (-k, k] bounds
  P(X_1*...*X_n in A) for |A| = k when every factor is uniform on some
  {g, g^-1} with |g| >= m and M = m_tilde(m);
* the binary walk: a sum of n independent uniform {0, 1} steps reduced mod
  an odd modulus m, whose mass on the k-point interval interval_Ink(n, k, m)
  bounds the same probability for arbitrary factors with point masses
  <= 1/2 on groups whose non-identity orders are all odd and >= m.

Laws are computed by exact dynamic programming on integer step counts
(denominator 2^n implied), never by the trigonometric identity; the
identity (evenly_spaced_binomial_sum) is kept as a floating cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .dist import ExactDist
from .groups import FiniteGroup, make_cyclic

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def m_tilde(m: int) -> int:
    """Smallest even integer >= m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return 2 * ((m + 1) // 2)


@dataclass(frozen=True)
class ResidueInterval:
    """The cyclic interval {start, start+1, ..., start+length-1} mod modulus."""

    modulus: int
    start: int
    length: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.length <= self.modulus:
            raise ValueError(f"length must be in [0, {self.modulus}], got {self.length}")
        if not 0 <= self.start < self.modulus:
            raise ValueError(f"start must be a residue in [0, {self.modulus})")

    def __contains__(self, r: int) -> bool:
        return (r - self.start) % self.modulus < self.length

    def residues(self) -> list[int]:
        return [(self.start + i) % self.modulus for i in range(self.length)]

    def __len__(self) -> int:
        return self.length


def signed_target_interval(k: int, M: int) -> ResidueInterval:
    """(-k, k] mod M, materialized with start -k+1 and length min(2k, M)."""
    return ResidueInterval(M, (1 - k) % M, min(2 * k, M))


# --- exact walk laws ------------------------------------------------------
#
# Per modulus, cache the step counts of every prefix up to _CACHE_STEPS;
# longer walks extend from the last stored prefix without storing (grid
# evaluations jump around in n, and the counts are cheap to keep).

_CACHE_STEPS = 4096
_signed_prefixes: dict[int, list[tuple[int, ...]]] = {}
_binary_prefixes: dict[int, list[tuple[int, ...]]] = {}


def _step(counts: tuple[int, ...], M: int, signed: bool) -> tuple[int, ...]:
    if signed:
        return tuple(counts[(r - 1) % M] + counts[(r + 1) % M] for r in range(M))
    return tuple(counts[r] + counts[(r - 1) % M] for r in range(M))


def _walk_counts(n: int, M: int, signed: bool) -> tuple[int, ...]:
    """Integer step counts of the walk after n steps; masses are counts / 2^n."""
    cache = _signed_prefixes if signed else _binary_prefixes
    prefixes = cache.setdefault(M, [tuple([1] + [0] * (M - 1))])
    while len(prefixes) <= min(n, _CACHE_STEPS):
        prefixes.append(_step(prefixes[-1], M, signed))
    if n < len(prefixes):
        return prefixes[n]
    counts = prefixes[-1]
    for _ in range(n - len(prefixes) + 1):
        counts = _step(counts, M, signed)
    return counts


def signed_walk_counts(n: int, M: int) -> tuple[int, ...]:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if M < 2 or M % 2 != 0:
        raise ValueError(f"signed walk needs an even modulus >= 2, got {M}")
    return _walk_counts(n, M, signed=True)


def binary_walk_counts(n: int, m: int) -> tuple[int, ...]:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return _walk_counts(n, m, signed=False)


def signed_walk_dist(n: int, M: int) -> ExactDist:
    """Exact law of eps_1 + ... + eps_n mod M (eps uniform on {-1, +1}), M even."""
    counts = signed_walk_counts(n, M)
    den = 1 << n
    return ExactDist(make_cyclic(M), {r: Fraction(c, den) for r, c in enumerate(counts) if c})


def _require_binary_modulus(n: int, m: int, what: str) -> None:
    # Odd modulus is the theorem regime; an even one is accepted only when
    # the walk cannot wrap (m >= n+2), where parity plays no role.
    if m < 3:
        raise ValueError(f"{what} needs modulus >= 3, got {m}")
    if m % 2 == 0 and m < n + 2:
        raise ValueError(
            f"{what} needs an odd modulus (got {m}); an even modulus is only "
            f"valid in the no-wrap regime m >= n+2 (here n={n})"
        )


def binary_walk_dist(n: int, m: int) -> ExactDist:
    """Exact law of tau_1 + ... + tau_n mod m (tau uniform on {0, 1}), m odd."""
    _require_binary_modulus(n, m, "binary walk")
    counts = binary_walk_counts(n, m)
    den = 1 << n
    return ExactDist(make_cyclic(m), {r: Fraction(c, den) for r, c in enumerate(counts) if c})


# --- the bounds -----------------------------------------------------------


def signed_interval_mass(n: int, k: int, M: int) -> Fraction:
    """P(signed walk of length n lands in (-k, k] mod M)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return Fraction(0)
    counts = signed_walk_counts(n, M)
    interval = signed_target_interval(k, M)
    return Fraction(sum(counts[r] for r in interval.residues()), 1 << n)


def theorem1_bound(n: int, k: int, m: int) -> Fraction:
    """Largest possible P(X_1*...*X_n in A) over |A| = k, all |g_i| >= m.

    Equals the signed-walk mass of (-k, k] mod m_tilde(m); exactly 1 as
    soon as 2k >= m_tilde(m), where the interval covers every residue.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    return signed_interval_mass(n, k, m_tilde(m))


def interval_Ink(n: int, k: int, m: int) -> ResidueInterval:
    """The k-point target interval of the binary walk, starting ceil((n-k+1)/2) mod m."""
    if n < 0 or k < 0:
        raise ValueError(f"need n, k >= 0, got n={n}, k={k}")
    _require_binary_modulus(n, m, "target interval")
    if k == 0:
        return ResidueInterval(m, 0, 0)
    start = ((n - k + 2) // 2) % m  # ceil((n-k+1)/2) mod m
    return ResidueInterval(m, start, min(k, m))


def theorem2_bound(n: int, k: int, m: int) -> Fraction:
    """Largest possible P(X_1*...*X_n in A) over |A| = k for factors with
    point masses <= 1/2 on a group of odd orders all >= m.

    Equals the binary-walk mass of interval_Ink(n, k, m); 1 for k >= m.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    _require_binary_modulus(n, m, "binary-walk bound")
    counts = binary_walk_counts(n, m)
    interval = interval_Ink(n, k, m)
    return Fraction(sum(counts[r] for r in interval.residues()), 1 << n)


def erdos_interval_bound(n: int, k: int) -> Fraction:
    """P(+-1 walk of length n on the integers ends in (-k, k]).

    The interval holds exactly the k endpoints of matching parity carrying
    the k largest binomial masses; for k = 1 this is C(n, floor(n/2)) / 2^n.
    """
    if n < 1 or k < 1:
        raise ValueError(f"need n, k >= 1, got n={n}, k={k}")
    total = 0
    for s in range(-k + 1, k + 1):
        if (s - n) % 2 == 0:
            total += math.comb(n, (n + s) // 2)
    return Fraction(total, 1 << n)


def corollary_closed_form(n: int, m: int) -> float:
    """2/m_tilde + sqrt(2/pi)/sqrt(n), the closed-form cap on theorem1_bound(n, 1, m)."""
    if n < 1 or m < 2:
        raise ValueError(f"need n >= 1 and m >= 2, got n={n}, m={m}")
    return 2.0 / m_tilde(m) + SQRT_2_OVER_PI / math.sqrt(n)


def tiep_vu_bound(n: int, m: int) -> float:
    """The comparator 141 * max(1/m, 1/sqrt(n)); may exceed 1 and is kept uncapped."""
    if n < 1 or m < 2:
        raise ValueError(f"need n >= 1 and m >= 2, got n={n}, m={m}")
    return 141.0 * max(1.0 / m, 1.0 / math.sqrt(n))


def evenly_spaced_binomial_sum(n: int, s: int, t: int) -> tuple[int, float]:
    """C(n,t) + C(n,t+s) + C(n,t+2s) + ... two ways.

    Returns (exact, trig): the exact big-integer sum, and the cosine-sum
    evaluation (1/s) * sum_j (2 cos(j pi / s))^n * cos(pi (n - 2t) j / s)
    with the summation index used in both cosine factors.  The float side
    exists only to cross-check the exact one.
    """
    if n < 0 or s < 1 or not 0 <= t < s:
        raise ValueError(f"need n >= 0, s >= 1, 0 <= t < s; got n={n}, s={s}, t={t}")
    exact = sum(math.comb(n, x) for x in range(t, n + 1, s))
    trig = 0.0
    for j in range(s):
        trig += (2.0 * math.cos(j * math.pi / s)) ** n * math.cos(math.pi * (n - 2 * t) * j / s)
    return exact, trig / s


def proposition1_gap(n: int, m: int, l: int) -> Fraction:
    """Exact |P(signed walk of length n = l mod m_tilde) - 2/m_tilde|.

    l is an integer representative in [0, m_tilde) and must have the same
    parity as n; off-parity residues carry probability exactly 0 and are
    rejected rather than reported as a (meaningless) gap.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    M = m_tilde(m)
    if not 0 <= l < M:
        raise ValueError(f"residue l must lie in [0, {M}), got {l}")
    if l % 2 != n % 2:
        raise ValueError(
            f"residue l={l} has parity {l % 2} but the walk of length n={n} "
            f"is supported on parity {n % 2}; the limit 2/m_tilde only applies on-parity"
        )
    counts = signed_walk_counts(n, M)
    p = Fraction(counts[l], 1 << n)
    return abs(p - Fraction(2, M))


# --- aggregated report ----------------------------------------------------

FLOAT_GUARD = 2.0**-50


@dataclass
class BoundReport:
    """Every bound evaluated at one (n, k, m), for side-by-side comparison."""

    n: int
    k: int
    m: int
    m_tilde: int
    theorem1: Fraction
    theorem2: Optional[Fraction]  # absent when m is even
    erdos: Fraction
    corollary_closed_form: float
    tiep_vu: float
    notes: list[str] = field(default_factory=list)

    def validity_violations(self) -> list[str]:
        """Cross-bound sanity relations; any entry here means a bug."""
        out = []
        if self.k == 1 and float(self.theorem1) > self.corollary_closed_form + FLOAT_GUARD:
            out.append(
                f"theorem1 {float(self.theorem1):.15g} exceeds closed form "
                f"{self.corollary_closed_form:.15g} at k=1"
            )
        for name, value in (("theorem1", self.theorem1), ("theorem2", self.theorem2), ("erdos", self.erdos)):
            if value is not None and not 0 <= value <= 1:
                out.append(f"{name} = {value} outside [0, 1]")
        return out


def build_bound_report(n: int, k: int, m: int) -> BoundReport:
    notes = []
    if m % 2 == 1 and m >= 3:
        th2 = theorem2_bound(n, k, m)
    else:
        th2 = None
        notes.append("theorem2 omitted: modulus m is even (binary-walk bound needs odd m)")
    report = BoundReport(
        n=n,
        k=k,
        m=m,
        m_tilde=m_tilde(m),
        theorem1=theorem1_bound(n, k, m),
        theorem2=th2,
        erdos=erdos_interval_bound(n, k),
        corollary_closed_form=corollary_closed_form(n, m),
        tiep_vu=tiep_vu_bound(n, m),
        notes=notes,
    )
    report.notes.extend(report.validity_violations())
    return report
