# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled integer kernels.

Every routine here has a twin with the same signature in ``_pykernels``;
``oddred.kernels`` picks one at import time. All arithmetic is exact:
fraction-free elimination runs in int64 with 128-bit intermediates and
raises ``OverflowError`` instead of wrapping, so callers can retry with
Python integers.
"""
import numpy as np

from libc.stdint cimport int64_t, int32_t, uint8_t, uint64_t, INT64_MAX
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy

cdef extern from *:
    """
    typedef __int128 oddred_i128;
    static inline int oddred_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    """
    ctypedef long long i128 "oddred_i128"
    int oddred_popcount(unsigned long long x) nogil


cdef Py_ssize_t _bareiss(int64_t* a, Py_ssize_t m, Py_ssize_t n,
                         Py_ssize_t* perm, int* swaps) noexcept nogil:
    # In-place row echelon form; returns rank or -1 on int64 overflow.
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef int64_t prev = 1, piv, f, tmp
    cdef Py_ssize_t ptmp
    cdef i128 t
    for c in range(n):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if a[i * n + c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(n):
                tmp = a[p * n + j]
                a[p * n + j] = a[r * n + j]
                a[r * n + j] = tmp
            ptmp = perm[p]
            perm[p] = perm[r]
            perm[r] = ptmp
            swaps[0] += 1
        piv = a[r * n + c]
        for i in range(r + 1, m):
            f = a[i * n + c]
            for j in range(c + 1, n):
                t = (<i128>piv * <i128>a[i * n + j] - <i128>f * <i128>a[r * n + j]) // <i128>prev
                if t > <i128>INT64_MAX or t < -<i128>INT64_MAX:
                    return -1
                a[i * n + j] = <int64_t>t
            a[i * n + c] = 0
        prev = piv
        r += 1
    return r


def bareiss_rank(const int64_t[:, ::1] mat):
    """Return ``(rank, pivot_rows)``; pivot rows index a basis of the row space."""
    cdef Py_ssize_t m = mat.shape[0], n = mat.shape[1], i, rank
    cdef int swaps = 0
    if m == 0 or n == 0:
        return 0, []
    cdef int64_t* a = <int64_t*>malloc(m * n * sizeof(int64_t))
    cdef Py_ssize_t* perm = <Py_ssize_t*>malloc(m * sizeof(Py_ssize_t))
    if a == NULL or perm == NULL:
        free(a)
        free(perm)
        raise MemoryError()
    try:
        memcpy(a, &mat[0, 0], m * n * sizeof(int64_t))
        for i in range(m):
            perm[i] = i
        with nogil:
            rank = _bareiss(a, m, n, perm, &swaps)
        if rank < 0:
            raise OverflowError("int64 overflow in fraction-free elimination")
        return rank, [perm[i] for i in range(rank)]
    finally:
        free(a)
        free(perm)


def determinant(const int64_t[:, ::1] mat):
    cdef Py_ssize_t n = mat.shape[0], i, rank
    cdef int swaps = 0
    if mat.shape[1] != n:
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    cdef int64_t* a = <int64_t*>malloc(n * n * sizeof(int64_t))
    cdef Py_ssize_t* perm = <Py_ssize_t*>malloc(n * sizeof(Py_ssize_t))
    if a == NULL or perm == NULL:
        free(a)
        free(perm)
        raise MemoryError()
    try:
        memcpy(a, &mat[0, 0], n * n * sizeof(int64_t))
        for i in range(n):
            perm[i] = i
        with nogil:
            rank = _bareiss(a, n, n, perm, &swaps)
        if rank < 0:
            raise OverflowError("int64 overflow in fraction-free elimination")
        if rank < n:
            return 0
        return -a[n * n - 1] if swaps % 2 else a[n * n - 1]
    finally:
        free(a)
        free(perm)


cdef bint _next_combination(Py_ssize_t* idx, Py_ssize_t k, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i = k - 1, j
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, k):
        idx[j] = idx[j - 1] + 1
    return True


def minor_values(const int64_t[:, ::1] mat, Py_ssize_t r):
    """Set of all r x r minors of ``mat``."""
    cdef Py_ssize_t m = mat.shape[0], n = mat.shape[1], i, j, rank
    cdef int swaps
    values = set()
    if r == 0:
        values.add(1)
        return values
    if r > m or r > n:
        return values
    cdef Py_ssize_t* ri = <Py_ssize_t*>malloc(r * sizeof(Py_ssize_t))
    cdef Py_ssize_t* ci = <Py_ssize_t*>malloc(r * sizeof(Py_ssize_t))
    cdef Py_ssize_t* perm = <Py_ssize_t*>malloc(r * sizeof(Py_ssize_t))
    cdef int64_t* a = <int64_t*>malloc(r * r * sizeof(int64_t))
    cdef int64_t det
    if ri == NULL or ci == NULL or perm == NULL or a == NULL:
        free(ri); free(ci); free(perm); free(a)
        raise MemoryError()
    try:
        for i in range(r):
            ri[i] = i
        while True:
            for i in range(r):
                ci[i] = i
            while True:
                for i in range(r):
                    perm[i] = i
                    for j in range(r):
                        a[i * r + j] = mat[ri[i], ci[j]]
                swaps = 0
                rank = _bareiss(a, r, r, perm, &swaps)
                if rank < 0:
                    raise OverflowError("int64 overflow in fraction-free elimination")
                if rank < r:
                    det = 0
                else:
                    det = -a[r * r - 1] if swaps % 2 else a[r * r - 1]
                values.add(det)
                if not _next_combination(ci, r, n):
                    break
            if not _next_combination(ri, r, m):
                break
        return values
    finally:
        free(ri); free(ci); free(perm); free(a)


def cycle_weights(const int32_t[::1] flat, const int64_t[::1] offsets, const int64_t[::1] weights):
    """Sum of ``weights`` over each edge list ``flat[offsets[i]:offsets[i+1]]``."""
    cdef Py_ssize_t count = offsets.shape[0] - 1, i, p
    out = np.zeros(max(count, 0), dtype=np.int64)
    cdef int64_t[::1] res = out
    cdef int64_t s
    with nogil:
        for i in range(count):
            s = 0
            for p in range(offsets[i], offsets[i + 1]):
                s += weights[flat[p]]
            res[i] = s
    return out


def scan_labelings(int nv, const int32_t[::1] eu, const int32_t[::1] ev,
                   const uint8_t[::1] red, const int64_t[::1] weights,
                   int64_t threshold, int parity,
                   unsigned long long start, unsigned long long stop,
                   bint stop_at_first=True):
    """Scan labelings ``start <= mask < stop`` with popcount parity ``parity``.

    Vertex ``v`` is labeled by bit ``nv - 1 - v`` of ``mask``, so increasing
    masks are lexicographic in the label bitstring. Returns
    ``(first_violating_mask, min_value, argmin_mask)`` with -1 for "none".
    """
    cdef Py_ssize_t ne = eu.shape[0], e
    cdef unsigned long long mask
    cdef long long first = -1, argmin = -1
    cdef int64_t best = 0, s
    cdef bint have = False
    cdef int* su = <int*>malloc(max(ne, 1) * sizeof(int))
    cdef int* sv = <int*>malloc(max(ne, 1) * sizeof(int))
    if su == NULL or sv == NULL:
        free(su); free(sv)
        raise MemoryError()
    try:
        for e in range(ne):
            su[e] = nv - 1 - eu[e]
            sv[e] = nv - 1 - ev[e]
        with nogil:
            mask = start
            while mask < stop:
                if (oddred_popcount(mask) & 1) == parity:
                    s = 0
                    for e in range(ne):
                        if ((((mask >> su[e]) ^ (mask >> sv[e])) & 1) == 0) != (red[e] != 0):
                            s += weights[e]
                    if not have or s < best:
                        best = s
                        argmin = <long long>mask
                        have = True
                    if s < threshold and first < 0:
                        first = <long long>mask
                        if stop_at_first:
                            break
                mask += 1
        return first, (best if have else None), argmin
    finally:
        free(su)
        free(sv)


def pm_parity_counts(int n_left, int n_right, const uint64_t[::1] adj, const uint64_t[::1] red_adj):
    """Count perfect matchings by red parity via a subset DP; returns (even, odd)."""
    if n_left != n_right:
        return 0, 0
    if n_left == 0:
        return 1, 0
    if n_right > 30:
        raise ValueError("too many right vertices for the subset DP")
    cdef uint64_t size = (<uint64_t>1) << n_right, mask, nm, bit
    cdef int i, j
    cdef int64_t* ev = <int64_t*>calloc(size, sizeof(int64_t))
    cdef int64_t* od = <int64_t*>calloc(size, sizeof(int64_t))
    if ev == NULL or od == NULL:
        free(ev); free(od)
        raise MemoryError()
    try:
        ev[0] = 1
        with nogil:
            for mask in range(size):
                if ev[mask] == 0 and od[mask] == 0:
                    continue
                i = oddred_popcount(mask)
                if i >= n_left:
                    continue
                for j in range(n_right):
                    bit = (<uint64_t>1) << j
                    if (adj[i] & bit) == 0 or (mask & bit) != 0:
                        continue
                    nm = mask | bit
                    if red_adj[i] & bit:
                        ev[nm] += od[mask]
                        od[nm] += ev[mask]
                    else:
                        ev[nm] += ev[mask]
                        od[nm] += od[mask]
        return ev[size - 1], od[size - 1]
    finally:
        free(ev)
        free(od)
