"""Pure-Python (numpy) kernels: the reference semantics for the hot loops.

The compiled extension (_ext) reimplements these functions; both must
produce identical output on identical input, including the counter-based
random stream and the lexicographic search order.  Tests enforce parity.

Random stream: sample i, factor j consumes bit (j mod 64) of the word
mix64(seed + i*PHI + (j//64)*PSI) where mix64 is the splitmix64 finalizer.
The stream is a pure function of (seed, i, j): chunking and threading
cannot change results.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

MASK64 = (1 << 64) - 1
PHI = 0x9E3779B97F4A7C15
PSI = 0xD1B54A32D192ED03
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit integer (scalar reference)."""
    x &= MASK64
    x ^= x >> 30
    x = (x * MIX_A) & MASK64
    x ^= x >> 27
    x = (x * MIX_B) & MASK64
    x ^= x >> 31
    return x


def _mix64_vec(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = x.copy()
        x ^= x >> np.uint64(30)
        x *= np.uint64(MIX_A)
        x ^= x >> np.uint64(27)
        x *= np.uint64(MIX_B)
        x ^= x >> np.uint64(31)
    return x


def sample_walk_counts(
    cols_a: np.ndarray,
    cols_b: np.ndarray,
    identity: int,
    seed: int,
    lo: int,
    hi: int,
    out: np.ndarray,
) -> None:
    """Tally endpoints of the two-point product walk for samples [lo, hi).

    cols_a[j][s] / cols_b[j][s] give the next state after multiplying state
    s by factor j's first/second point; out (length = group size) is
    incremented in place.
    """
    n_factors = cols_a.shape[0]
    if hi <= lo:
        return
    seed_u = np.uint64(seed & MASK64)
    idx = np.arange(lo, hi, dtype=np.uint64)
    state = np.full(hi - lo, identity, dtype=np.int64)
    words = np.empty(0, dtype=np.uint64)
    current_word = -1
    with np.errstate(over="ignore"):
        keys_base = seed_u + idx * np.uint64(PHI)
    for j in range(n_factors):
        w = j >> 6
        if w != current_word:
            with np.errstate(over="ignore"):
                words = _mix64_vec(keys_base + np.uint64(w) * np.uint64(PSI))
            current_word = w
        bits = (words >> np.uint64(j & 63)) & np.uint64(1)
        state = np.where(bits.astype(bool), cols_b[j][state], cols_a[j][state])
    out += np.bincount(state, minlength=out.shape[0]).astype(np.int64)


def sample_matrix_walk(
    p: int,
    mats_a: np.ndarray,
    mats_b: np.ndarray,
    seed: int,
    lo: int,
    hi: int,
) -> dict[int, int]:
    """Endpoint tallies of a 2x2 matrix walk mod p, keyed ((a*p+b)*p+c)*p+d.

    mats_a/mats_b have shape (n_factors, 4) with rows (a, b, c, d).
    """
    n_factors = mats_a.shape[0]
    if hi <= lo:
        return {}
    seed_u = np.uint64(seed & MASK64)
    idx = np.arange(lo, hi, dtype=np.uint64)
    count = hi - lo
    a = np.ones(count, dtype=np.int64)
    b = np.zeros(count, dtype=np.int64)
    c = np.zeros(count, dtype=np.int64)
    d = np.ones(count, dtype=np.int64)
    words = np.empty(0, dtype=np.uint64)
    current_word = -1
    with np.errstate(over="ignore"):
        keys_base = seed_u + idx * np.uint64(PHI)
    for j in range(n_factors):
        w = j >> 6
        if w != current_word:
            words = _mix64_vec(keys_base + np.uint64(w) * np.uint64(PSI))
            current_word = w
        bits = ((words >> np.uint64(j & 63)) & np.uint64(1)).astype(bool)
        e = np.where(bits, mats_b[j, 0], mats_a[j, 0])
        f = np.where(bits, mats_b[j, 1], mats_a[j, 1])
        g = np.where(bits, mats_b[j, 2], mats_a[j, 2])
        h = np.where(bits, mats_b[j, 3], mats_a[j, 3])
        a, b, c, d = (
            (a * e + b * g) % p,
            (a * f + b * h) % p,
            (c * e + d * g) % p,
            (c * f + d * h) % p,
        )
    keys = ((a * p + b) * p + c) * p + d
    uniq, counts = np.unique(keys, return_counts=True)
    return {int(key): int(cnt) for key, cnt in zip(uniq, counts)}


def search_max_topk(
    ga: np.ndarray,
    gb: np.ndarray,
    identity: int,
    n: int,
    k: int,
    ordered: bool,
    first_lo: int,
    first_hi: int,
) -> tuple[int, tuple[int, ...] | None, int]:
    """Maximize the top-k numerator over walks of n two-point factors.

    ga[v][z] / gb[v][z] index the predecessor states contributing to z when
    factor v is applied (law_new[z] = law[ga[v][z]] + law[gb[v][z]]).
    Enumerates var-index combos in lexicographic order: non-decreasing
    n-tuples when not ordered (multisets), all n-tuples otherwise, with the
    first position restricted to [first_lo, first_hi).  Returns the best
    top-k sum of law numerators (denominator 2^n implied), the first combo
    attaining it, and the number of laws evaluated.
    """
    n_vars, size = ga.shape
    laws = np.zeros((n + 1, size), dtype=np.int64)
    laws[0, identity] = 1
    choice = [0] * n
    choice[0] = first_lo
    best = -1
    best_combo: tuple[int, ...] | None = None
    n_laws = 0
    depth = 0
    keep = min(k, size)
    while True:
        limit = first_hi if depth == 0 else n_vars
        if choice[depth] >= limit:
            if depth == 0:
                break
            depth -= 1
            choice[depth] += 1
            continue
        v = choice[depth]
        prev = laws[depth]
        np.add(prev[ga[v]], prev[gb[v]], out=laws[depth + 1])
        if depth + 1 == n:
            law = laws[n]
            n_laws += 1
            if keep >= size:
                total = int(law.sum())
            else:
                total = int(np.partition(law, size - keep)[size - keep :].sum())
            if total > best:
                best = total
                best_combo = tuple(choice)
            choice[depth] += 1
        else:
            depth += 1
            choice[depth] = 0 if ordered else choice[depth - 1]
    return best, best_combo, n_laws
