"""Seeded Monte Carlo estimation of walk endpoint probabilities.

For groups too large to tabulate exactly: simulate the product of
two-point factors with a counter-based generator (one unbiased bit per
factor, keyed by seed / sample index / factor word), tally endpoints and
report the maximal cell frequency with a 99% Wilson interval.  Identical
inputs and seed give bit-identical reports at any chunking or thread
count, because the random stream is a pure function of the counters.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .dist import TwoPointVar
from .groups import FiniteGroup, same_group

# two-sided 99% normal quantile (Phi^-1(0.995))
Z99 = 2.5758293035489004
_CHUNK = 1 << 20
_MAX_CELLS = 1024
OVERFLOW_KEY = "__other__"


def wilson_interval(count: int, total: int, z: float = Z99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if not 0 <= count <= total or total < 1:
        raise ValueError(f"need 0 <= count <= total with total >= 1, got {count}/{total}")
    phat = count / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (phat + z2 / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z2 / (4 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SampleReport:
    samples: int
    seed: int
    counts: dict[str, int]  # cell name -> count, descending; may end in __other__
    estimate: float  # frequency of the maximal cell
    ci_low: float
    ci_high: float
    max_cell: str
    backend: str
    target: Optional[Fraction] = None  # exact value to compare against, if known
    notes: list[str] = field(default_factory=list)

    def target_in_interval(self) -> Optional[bool]:
        if self.target is None:
            return None
        return self.ci_low <= float(self.target) <= self.ci_high


def _finalize(
    raw: dict[str, int], samples: int, seed: int, target: Optional[Fraction]
) -> SampleReport:
    ordered = sorted(raw.items(), key=lambda item: (-item[1], item[0]))
    notes = [
        "interval covers the frequency of the empirically maximal cell only "
        "(selection bias: not a simultaneous band)"
    ]
    if len(ordered) > _MAX_CELLS:
        kept = ordered[:_MAX_CELLS]
        overflow = sum(c for _, c in ordered[_MAX_CELLS:])
        kept.append((OVERFLOW_KEY, overflow))
        ordered = kept
        notes.append(f"counts truncated to top {_MAX_CELLS} cells plus {OVERFLOW_KEY}")
    max_cell, max_count = ordered[0]
    low, high = wilson_interval(max_count, samples)
    return SampleReport(
        samples=samples,
        seed=seed,
        counts=dict(ordered),
        estimate=max_count / samples,
        ci_low=low,
        ci_high=high,
        max_cell=max_cell,
        backend=kernels.BACKEND,
        target=target,
        notes=notes,
    )


def _chunk_ranges(samples: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + _CHUNK, samples)) for lo in range(0, samples, _CHUNK)]


def estimate_rho(
    g: FiniteGroup,
    vars: Sequence[TwoPointVar],
    samples: int,
    seed: int,
    threads: int = 1,
    target: Optional[Fraction] = None,
) -> SampleReport:
    """Simulate X_1*...*X_n on a tabulated group and tally endpoints.

    Sample i chooses factor j's point by bit (seed, i, j) of the counter
    stream and multiplies left to right.
    """
    if not vars:
        raise ValueError("need at least one two-point factor")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    for v in vars:
        if not same_group(v.group, g):
            raise ValueError(f"factor {v!r} does not live in {g.name}")
    cols_a = np.ascontiguousarray(np.stack([g.table[:, v.a] for v in vars]))
    cols_b = np.ascontiguousarray(np.stack([g.table[:, v.b] for v in vars]))
    ranges = _chunk_ranges(samples)

    def run(rng: tuple[int, int]) -> np.ndarray:
        out = np.zeros(g.size, dtype=np.int64)
        kernels.sample_walk_counts(cols_a, cols_b, g.identity, seed, rng[0], rng[1], out)
        return out

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, ranges))
    else:
        partials = [run(rng) for rng in ranges]
    counts = np.sum(partials, axis=0)
    raw = {g.names[i]: int(c) for i, c in enumerate(counts) if c > 0}
    return _finalize(raw, samples, seed, target)


@dataclass(frozen=True)
class MatrixPair:
    """A two-point variable on GL2(p) given by explicit matrix entries."""

    p: int
    a: tuple[int, int, int, int]
    b: tuple[int, int, int, int]

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"modulus must be >= 2, got {self.p}")
        for label, mat in (("a", self.a), ("b", self.b)):
            m = tuple(int(x) % self.p for x in mat)
            object.__setattr__(self, label, m)
            if (m[0] * m[3] - m[1] * m[2]) % self.p == 0:
                raise ValueError(f"matrix {m} is singular mod {self.p}")
        if self.a == self.b:
            raise ValueError("two-point variable needs distinct matrices")


def matrix_name(key: int, p: int) -> str:
    d = key % p
    key //= p
    c = key % p
    key //= p
    b = key % p
    a = key // p
    return f"[[{a},{b}],[{c},{d}]]"


def estimate_matrix_walk(
    p: int,
    vars: Sequence[MatrixPair],
    samples: int,
    seed: int,
    threads: int = 1,
    target: Optional[Fraction] = None,
) -> SampleReport:
    """Simulate a 2x2 matrix product walk mod a prime p, no table needed.

    Same sampling contract as estimate_rho; endpoints are keyed by their
    entries, so p may exceed the exact-table cap.
    """
    if not _is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    if p > 55_000:
        raise ValueError(f"p = {p} overflows the int64 cell encoding (p^4 must fit)")
    if not vars:
        raise ValueError("need at least one two-point factor")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    for v in vars:
        if v.p != p:
            raise ValueError(f"factor modulus {v.p} does not match p={p}")
    mats_a = np.ascontiguousarray(np.array([v.a for v in vars], dtype=np.int64))
    mats_b = np.ascontiguousarray(np.array([v.b for v in vars], dtype=np.int64))
    ranges = _chunk_ranges(samples)

    def run(rng: tuple[int, int]) -> dict[int, int]:
        return kernels.sample_matrix_walk(p, mats_a, mats_b, seed, rng[0], rng[1])

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, ranges))
    else:
        partials = [run(rng) for rng in ranges]
    merged: dict[int, int] = {}
    for part in partials:
        for key, c in part.items():
            merged[key] = merged.get(key, 0) + c
    raw = {matrix_name(key, p): c for key, c in merged.items()}
    return _finalize(raw, samples, seed, target)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(math.isqrt(p)) + 1))
