# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the walk sampler and the exhaustive law search.

Must stay bit-compatible with kernels._pure: same counter-based random
stream, same lexicographic enumeration, same tie-breaking.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

BACKEND = "ext"

cdef uint64_t PHI = 0x9E3779B97F4A7C15UL
cdef uint64_t PSI = 0xD1B54A32D192ED03UL
cdef uint64_t MIX_A = 0xBF58476D1CE4E5B9UL
cdef uint64_t MIX_B = 0x94D049BB133111EBUL


cdef inline uint64_t mix64_c(uint64_t x) noexcept nogil:
    x ^= x >> 30
    x *= MIX_A
    x ^= x >> 27
    x *= MIX_B
    x ^= x >> 31
    return x


def mix64(x):
    """splitmix64 finalizer (Python-visible, for stream tests)."""
    return mix64_c(<uint64_t> (x & 0xFFFFFFFFFFFFFFFF))


def sample_walk_counts(
    int64_t[:, ::1] cols_a,
    int64_t[:, ::1] cols_b,
    Py_ssize_t identity,
    object seed,
    Py_ssize_t lo,
    Py_ssize_t hi,
    int64_t[::1] out,
):
    """Tally endpoints of the two-point product walk for samples [lo, hi)."""
    cdef uint64_t seed_u = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n_factors = cols_a.shape[0]
    cdef Py_ssize_t i, j, state
    cdef Py_ssize_t w, jw
    cdef uint64_t word = 0
    with nogil:
        for i in range(lo, hi):
            state = identity
            w = -1
            for j in range(n_factors):
                jw = j >> 6
                if jw != w:
                    word = mix64_c(seed_u + (<uint64_t> i) * PHI + (<uint64_t> jw) * PSI)
                    w = jw
                if (word >> (j & 63)) & 1:
                    state = cols_b[j, state]
                else:
                    state = cols_a[j, state]
            out[state] += 1


def sample_matrix_walk(
    Py_ssize_t p,
    int64_t[:, ::1] mats_a,
    int64_t[:, ::1] mats_b,
    object seed,
    Py_ssize_t lo,
    Py_ssize_t hi,
):
    """Endpoint tallies of a 2x2 matrix walk mod p, keyed ((a*p+b)*p+c)*p+d."""
    cdef uint64_t seed_u = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n_factors = mats_a.shape[0]
    cdef Py_ssize_t i, j, w, jw
    cdef uint64_t word = 0
    cdef int64_t a, b, c, d, e, f, g, h, na, nb, nc, nd
    cdef dict counts = {}
    cdef int64_t key
    for i in range(lo, hi):
        a = 1
        b = 0
        c = 0
        d = 1
        w = -1
        for j in range(n_factors):
            jw = j >> 6
            if jw != w:
                word = mix64_c(seed_u + (<uint64_t> i) * PHI + (<uint64_t> jw) * PSI)
                w = jw
            if (word >> (j & 63)) & 1:
                e = mats_b[j, 0]
                f = mats_b[j, 1]
                g = mats_b[j, 2]
                h = mats_b[j, 3]
            else:
                e = mats_a[j, 0]
                f = mats_a[j, 1]
                g = mats_a[j, 2]
                h = mats_a[j, 3]
            na = (a * e + b * g) % p
            nb = (a * f + b * h) % p
            nc = (c * e + d * g) % p
            nd = (c * f + d * h) % p
            a = na
            b = nb
            c = nc
            d = nd
        key = ((a * p + b) * p + c) * p + d
        if key in counts:
            counts[key] += 1
        else:
            counts[key] = 1
    return counts


def search_max_topk(
    int64_t[:, ::1] ga,
    int64_t[:, ::1] gb,
    Py_ssize_t identity,
    Py_ssize_t n,
    Py_ssize_t k,
    bint ordered,
    Py_ssize_t first_lo,
    Py_ssize_t first_hi,
):
    """Maximize the top-k numerator over walks of n two-point factors.

    Same contract as kernels._pure.search_max_topk.
    """
    cdef Py_ssize_t n_vars = ga.shape[0]
    cdef Py_ssize_t size = ga.shape[1]
    cdef Py_ssize_t keep = k if k < size else size
    cdef int64_t *laws = <int64_t *> malloc(sizeof(int64_t) * (n + 1) * size)
    cdef Py_ssize_t *choice = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * n)
    cdef Py_ssize_t *best_choice = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * n)
    cdef Py_ssize_t *used = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * (keep if keep > 0 else 1))
    if laws == NULL or choice == NULL or best_choice == NULL or used == NULL:
        free(laws)
        free(choice)
        free(best_choice)
        free(used)
        raise MemoryError()
    cdef int64_t best = -1
    cdef long long n_laws = 0
    cdef bint found = 0
    cdef Py_ssize_t depth, v, z, limit, t, u, arg
    cdef int64_t *prev
    cdef int64_t *cur
    cdef int64_t total, top, value
    cdef bint skip
    try:
        with nogil:
            for z in range(size):
                laws[z] = 0
            laws[identity] = 1
            depth = 0
            choice[0] = first_lo
            while True:
                limit = first_hi if depth == 0 else n_vars
                if choice[depth] >= limit:
                    if depth == 0:
                        break
                    depth -= 1
                    choice[depth] += 1
                    continue
                v = choice[depth]
                prev = laws + depth * size
                cur = laws + (depth + 1) * size
                for z in range(size):
                    cur[z] = prev[ga[v, z]] + prev[gb[v, z]]
                if depth + 1 == n:
                    n_laws += 1
                    total = 0
                    if keep >= size:
                        for z in range(size):
                            total += cur[z]
                    else:
                        # keep passes of argmax-with-exclusion; keep is tiny
                        for t in range(keep):
                            top = -1
                            arg = -1
                            for z in range(size):
                                value = cur[z]
                                if value > top:
                                    skip = 0
                                    for u in range(t):
                                        if used[u] == z:
                                            skip = 1
                                            break
                                    if not skip:
                                        top = value
                                        arg = z
                            used[t] = arg
                            total += top
                    if total > best:
                        best = total
                        found = 1
                        for t in range(n):
                            best_choice[t] = choice[t]
                    choice[depth] += 1
                else:
                    depth += 1
                    choice[depth] = 0 if ordered else choice[depth - 1]
        if not found:
            return -1, None, n_laws
        return int(best), tuple(best_choice[t] for t in range(n)), n_laws
    finally:
        free(laws)
        free(choice)
        free(best_choice)
        free(used)
