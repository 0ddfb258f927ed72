"""The label constraint relaxation Q, its counterexample and the max-cut reduction."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .errors import InputError, SizeLimitError
from .graphs import IDENTITY, Graph, RedBlueGraph, doubled_graph, norm_edge
from .polyhedra import as_fraction

MAX_LABEL_VERTICES = 24
MAX_CUT_VERTICES = 24


@dataclass(frozen=True)
class Labeling:
    """A 0/1 label per vertex; vertex ``v`` is bit ``nv - 1 - v`` of ``mask``.

    Increasing masks therefore run through bitstrings in lexicographic order.
    """

    mask: int
    nv: int

    def __post_init__(self):
        if self.nv <= 0 or self.nv % 2 or not 0 <= self.mask < (1 << self.nv):
            raise InputError("labeling needs an even vertex count and a mask in range")
        if bin(self.mask).count("1") % 2 != (self.nv // 2) % 2:
            raise InputError("number of 1-labels must have the parity of n")

    @classmethod
    def from_bits(cls, bits: str) -> "Labeling":
        if not bits or set(bits) - {"0", "1"}:
            raise InputError(f"bad bitstring {bits!r}")
        return cls(int(bits, 2), len(bits))

    def __getitem__(self, v: int) -> int:
        return (self.mask >> (self.nv - 1 - v)) & 1

    @property
    def bits(self) -> str:
        return format(self.mask, f"0{self.nv}b")

    @property
    def ones(self) -> int:
        return bin(self.mask).count("1")


@dataclass(frozen=True)
class Inside:
    min_label_value: Optional[Fraction] = None
    argmin: Optional[Labeling] = None


@dataclass(frozen=True)
class NegativeEntry:
    edge: tuple
    value: Fraction


@dataclass(frozen=True)
class DegreeViolation:
    vertex: int
    value: Fraction


@dataclass(frozen=True)
class LabelViolation:
    labeling: Labeling
    value: Fraction


def _check_size(h: RedBlueGraph):
    if h.n % 2:
        raise InputError("labelings need an even number of vertices")
    if h.n > MAX_LABEL_VERTICES:
        raise SizeLimitError(f"{h.n} vertices exceed the labeling cap of {MAX_LABEL_VERTICES}")


def enumerate_labelings(h: RedBlueGraph) -> Iterator[Labeling]:
    """All ``2^(2n-1)`` parity-admissible labelings, lexicographically."""
    _check_size(h)
    nv = h.n
    parity = (nv // 2) % 2
    for mask in range(1 << nv):
        if bin(mask).count("1") % 2 == parity:
            yield Labeling(mask, nv)


def label_edge_set(h: RedBlueGraph, L: Labeling) -> frozenset:
    """Blue edges with equal labels plus red edges with different labels."""
    if L.nv != h.n:
        raise InputError("labeling is for a different vertex count")
    return frozenset(e for e in h.edges if (L[e[0]] == L[e[1]]) != h.is_red(e))


def _scan(h: RedBlueGraph, weights, threshold: int, threads: int):
    """First violating mask (lex order) or None, plus the minimum and its mask."""
    nv = h.n
    eu = np.array([u for u, _ in h.edges], dtype=np.int32)
    ev = np.array([v for _, v in h.edges], dtype=np.int32)
    red = np.array(h.red_vector, dtype=np.uint8)
    w = np.array(weights, dtype=np.int64)
    parity = (nv // 2) % 2
    total = 1 << nv
    threads = max(1, int(threads))
    if threads == 1 or total < 1 << 12:
        return kernels.scan_labelings(nv, eu, ev, red, w, threshold, parity, 0, total, True)
    chunk = max(1 << 10, total // (4 * threads))
    bounds = [(a, min(total, a + chunk)) for a in range(0, total, chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(
            lambda ab: kernels.scan_labelings(nv, eu, ev, red, w, threshold, parity, ab[0], ab[1], True),
            bounds))
    for first, _, _ in parts:  # chunks are in lex order, so the first hit wins
        if first >= 0:
            best = min((p for p in parts if p[1] is not None), key=lambda p: (p[1], p[2]))
            return first, best[1], best[2]
    best = min((p for p in parts if p[1] is not None), key=lambda p: (p[1], p[2]))
    return -1, best[1], best[2]


def q_membership(h: RedBlueGraph, x: Sequence, threads: int = 1):
    """Exact membership in Q by brute force over all labelings.

    Checks nonnegativity, then degree equalities, then every label
    constraint; the lexicographically first violated labeling is returned.
    """
    _check_size(h)
    if len(x) != len(h.edges):
        raise InputError("point must have one entry per edge")
    x = [as_fraction(v) for v in x]
    for e, v in zip(h.edges, x):
        if v < 0:
            return NegativeEntry(e, v)
    deg = [Fraction(0)] * h.n
    for (u, v), val in zip(h.edges, x):
        deg[u] += val
        deg[v] += val
    for vtx, d in enumerate(deg):
        if d != 1:
            return DegreeViolation(vtx, d)
    scale = lcm(*(v.denominator for v in x))
    weights = [int(v * scale) for v in x]
    first, best, argmin = _scan(h, weights, scale, threads)
    if first >= 0:
        return LabelViolation(Labeling(first, h.n), Fraction(_value(h, weights, first), scale))
    return Inside(Fraction(best, scale), Labeling(argmin, h.n))


def _value(h: RedBlueGraph, weights, mask: int) -> int:
    L = Labeling(mask, h.n)
    edges = label_edge_set(h, L)
    return sum(w for e, w in zip(h.edges, weights) if e in edges)


def build_counterexample() -> tuple[RedBlueGraph, tuple]:
    """Ten vertices ``v_1..v_10`` (ids 0..9), 14 edges, 3 red; the point is 2/3 on
    ``{v_1, v_6}`` and 1/3 on every other edge."""
    raw = [(1, 6), (1, 7), (2, 8), (2, 6), (3, 7), (3, 9), (3, 10), (4, 8), (4, 10), (5, 8), (5, 9),
           (2, 7), (4, 9), (5, 10)]
    red = [(2, 7), (4, 9), (5, 10)]
    edges = [norm_edge(u - 1, v - 1) for u, v in raw]
    g = Graph(10, tuple(edges), (tuple(range(5)), tuple(range(5, 10))))
    h = RedBlueGraph(g, frozenset(norm_edge(u - 1, v - 1) for u, v in red))
    heavy = norm_edge(0, 5)
    y = tuple(Fraction(2, 3) if e == heavy else Fraction(1, 3) for e in h.edges)
    return h, y


@dataclass(frozen=True)
class ReductionInstance:
    source: Graph
    k: int
    graph: RedBlueGraph
    x: tuple
    alpha: Fraction


def reduce_maxcut_to_separation(g: Graph, k: int) -> ReductionInstance:
    """Doubled graph with identity edges red; ``1 - 3 alpha`` on red, ``alpha`` elsewhere."""
    if any(g.degree(v) != 3 for v in range(g.n)):
        raise InputError("the reduction needs a cubic graph")
    m = len(g.edges)
    if not 0 <= k <= m - 2:
        raise InputError(f"trivial instance: k must lie in [0, {m - 2}]")
    alpha = Fraction(1, 2 * (m - k + 1))
    h = doubled_graph(g, IDENTITY)
    x = tuple(1 - 3 * alpha if h.is_red(e) else alpha for e in h.edges)
    return ReductionInstance(g, k, h, x, alpha)


def brute_force_max_cut(g: Graph) -> int:
    """Maximum ``|delta(S)|`` over all vertex subsets (last vertex fixed outside)."""
    n = g.n
    if n > MAX_CUT_VERTICES:
        raise SizeLimitError(f"{n} vertices exceed the max-cut cap of {MAX_CUT_VERTICES}")
    if n <= 1 or not g.edges:
        return 0
    eu = np.array([u for u, _ in g.edges], dtype=np.int64)
    ev = np.array([v for _, v in g.edges], dtype=np.int64)
    best = 0
    total = 1 << (n - 1)
    step = 1 << 16
    for a in range(0, total, step):
        masks = np.arange(a, min(total, a + step), dtype=np.int64)
        cut = (((masks[:, None] >> eu) ^ (masks[:, None] >> ev)) & 1).sum(axis=1)
        best = max(best, int(cut.max()))
    return best


@lru_cache(maxsize=None)
def _connected_cubic(nv: int) -> tuple:
    """Connected simple cubic graphs as networkx graphs.

    Cubic multigraphs (loops count twice) are grown from the two 2-vertex
    ones, theta and dumbbell, by edge insertion: subdivide two edge copies,
    or one copy twice, and join the new vertices. Multiplicities live in the
    ``m`` edge attribute. Duplicates are removed up to isomorphism and the
    simple graphs on ``nv`` vertices kept; counts are pinned by tests.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import numerical_edge_match

    match = numerical_edge_match("m", 1)

    def bump(G, a, b):
        if G.has_edge(a, b):
            G[a][b]["m"] += 1
        else:
            G.add_edge(a, b, m=1)

    def drop(G, a, b):
        if G[a][b]["m"] > 1:
            G[a][b]["m"] -= 1
        else:
            G.remove_edge(a, b)

    theta = nx.Graph()
    theta.add_edge(0, 1, m=3)
    dumbbell = nx.Graph()
    dumbbell.add_edges_from([(0, 0), (1, 1), (0, 1)], m=1)
    level = [theta, dumbbell]
    for size in range(4, nv + 1, 2):
        buckets: dict = {}
        nxt = []
        x, y = size - 2, size - 1
        for G in level:
            edges = sorted(tuple(sorted(e)) for e in G.edges())
            moves = []
            for i, (a, b) in enumerate(edges):
                moves.append((a, b, None, None))  # one copy subdivided twice
                if G[a][b]["m"] >= 2:
                    moves.append((a, b, a, b))  # two parallel copies
                moves.extend((a, b, c, d) for c, d in edges[i + 1:])
            for a, b, c, d in moves:
                H = G.copy()
                drop(H, a, b)
                if c is None:
                    # a - x = y - b
                    bump(H, a, x)
                    bump(H, y, b)
                    H.add_edge(x, y, m=2)
                else:
                    drop(H, c, d)
                    for u, w in ((a, x), (x, b), (c, y), (y, d), (x, y)):
                        bump(H, u, w)
                key = nx.weisfeiler_lehman_graph_hash(H, edge_attr="m")
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(H, K, edge_match=match) for K in bucket):
                    bucket.append(H)
                    nxt.append(H)
        level = nxt

    def simple(G):
        return all(u != w and d["m"] == 1 for u, w, d in G.edges(data=True))

    return tuple(G for G in level if simple(G)) if nv >= 4 else ()


def cubic_graphs(nv: int, connected: bool = True) -> list[Graph]:
    """All cubic graphs on ``nv`` vertices up to isomorphism (desk scale)."""
    import networkx as nx

    if nv % 2 or nv < 4:
        return []
    if connected:
        parts = [_connected_cubic(nv)]
    else:
        parts = []
        # multisets of connected component sizes, non-increasing
        def split(rest, cap, acc):
            if rest == 0:
                parts.append(list(acc))
                return
            for size in range(min(rest, cap), 3, -2):
                split(rest - size, size, acc + [size])
        split(nv, nv, [])
        by_size = {m: _connected_cubic(m) for m in range(4, nv + 1, 2)}
        combos = []
        for sizes in parts:
            pools = [by_size[m] for m in sizes]
            combos.extend(_unions(pools, sizes))
        parts = [combos]
    out = []
    for G in parts[0]:
        H = nx.convert_node_labels_to_integers(G, ordering="sorted")
        out.append(Graph(nv, tuple(sorted(tuple(sorted(e)) for e in H.edges()))))
    return sorted(out, key=lambda g: g.edges)


def _unions(pools, sizes):
    """Disjoint unions picking one graph per component size; equal sizes use
    non-decreasing indices so each multiset appears once."""
    import networkx as nx

    out = []

    def rec(i, last, acc):
        if i == len(pools):
            out.append(nx.disjoint_union_all(acc) if len(acc) > 1 else acc[0])
            return
        start = last if i > 0 and sizes[i] == sizes[i - 1] else 0
        for j in range(start, len(pools[i])):
            rec(i + 1, j, acc + [pools[i][j]])

    rec(0, 0, [])
    return out
