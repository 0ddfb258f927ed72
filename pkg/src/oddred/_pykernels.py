"""Pure-Python twins of the compiled kernels in ``_ckernels.pyx``.

Same signatures, same results. Elimination runs on Python integers, so
these never overflow; they are only slower.
"""
from itertools import combinations

import numpy as np


def _bareiss(a):
    """In-place fraction-free row echelon form of a list-of-lists matrix.

    Returns ``(rank, perm, swaps)`` where ``perm`` tracks original row indices.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    perm = list(range(m))
    swaps = 0
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[p], a[r] = a[r], a[p]
            perm[p], perm[r] = perm[r], perm[p]
            swaps += 1
        piv = a[r][c]
        row_r = a[r]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            for j in range(c + 1, n):
                row[j] = (piv * row[j] - f * row_r[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r, perm, swaps


def _rows(mat):
    if isinstance(mat, np.ndarray):
        mat = mat.tolist()
    return [[int(v) for v in row] for row in mat]


def bareiss_rank(mat):
    a = _rows(mat)
    if not a or not a[0]:
        return 0, []
    rank, perm, _ = _bareiss(a)
    return rank, perm[:rank]


def determinant(mat):
    a = _rows(mat)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    rank, _, swaps = _bareiss(a)
    if rank < n:
        return 0
    return -a[-1][-1] if swaps % 2 else a[-1][-1]


def minor_values(mat, r):
    rows = _rows(mat)
    m = len(rows)
    n = len(rows[0]) if m else 0
    if r == 0:
        return {1}
    values = set()
    if r > m or r > n:
        return values
    for ri in combinations(range(m), r):
        for ci in combinations(range(n), r):
            values.add(determinant([[rows[i][j] for j in ci] for i in ri]))
    return values


def cycle_weights(flat, offsets, weights):
    flat = np.asarray(flat, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    count = len(offsets) - 1
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    gathered = weights[flat]
    out = np.zeros(count, dtype=np.int64)
    nonempty = offsets[:-1] < offsets[1:]
    if gathered.size:
        sums = np.add.reduceat(gathered, offsets[:-1][nonempty])
        out[nonempty] = sums
    return out


def scan_labelings(nv, eu, ev, red, weights, threshold, parity, start, stop, stop_at_first=True):
    eu = [int(v) for v in eu]
    ev = [int(v) for v in ev]
    red = [bool(v) for v in red]
    weights = [int(v) for v in weights]
    shifts = [(nv - 1 - u, nv - 1 - v, r, w) for u, v, r, w in zip(eu, ev, red, weights)]
    first = -1
    best = None
    argmin = -1
    for mask in range(start, stop):
        if bin(mask).count("1") & 1 != parity:
            continue
        s = 0
        for su, sv, r, w in shifts:
            if ((((mask >> su) ^ (mask >> sv)) & 1) == 0) != r:
                s += w
        if best is None or s < best:
            best = s
            argmin = mask
        if s < threshold and first < 0:
            first = mask
            if stop_at_first:
                break
    return first, best, argmin


def pm_parity_counts(n_left, n_right, adj, red_adj):
    if n_left != n_right:
        return 0, 0
    if n_left == 0:
        return 1, 0
    adj = [int(v) for v in adj]
    red_adj = [int(v) for v in red_adj]
    layer = {0: (1, 0)}
    for i in range(n_left):
        nxt = {}
        for mask, (ev, od) in layer.items():
            for j in range(n_right):
                bit = 1 << j
                if not adj[i] & bit or mask & bit:
                    continue
                if red_adj[i] & bit:
                    add = (od, ev)
                else:
                    add = (ev, od)
                cur = nxt.get(mask | bit, (0, 0))
                nxt[mask | bit] = (cur[0] + add[0], cur[1] + add[1])
        layer = nxt
    return layer.get((1 << n_right) - 1, (0, 0))
