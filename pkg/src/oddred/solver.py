"""Polynomial-time construction of an odd-red perfect matching.

Start from any perfect matching; if its red count is even, swap along an
alternating cycle with an odd number of red edges.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import InputError
from .graphs import Cycle, Graph, Matching, RedBlueGraph, norm_edge

FOUND = "found"
NO_PERFECT_MATCHING = "no_perfect_matching"
NO_ODD_RED_PM = "no_odd_red_pm"


@dataclass(frozen=True)
class NoPerfectMatching:
    matching_size: int


@dataclass(frozen=True)
class SolverResult:
    outcome: str
    matching: Optional[Matching]
    iterations: int

    @property
    def found(self) -> bool:
        return self.outcome == FOUND


def _sides(h: RedBlueGraph):
    if h.graph.bipartition is None:
        raise InputError("graph has no bipartition")
    return h.graph.bipartition


def _hopcroft_karp(h: RedBlueGraph) -> dict:
    left, right = _sides(h)
    adj = h.graph.adjacency
    mate = {}
    INF = float("inf")

    def bfs():
        dist = {}
        q = deque()
        for u in left:
            if u not in mate:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for w in adj[u]:
                x = mate.get(w)
                if x is None:
                    found = True
                elif x not in dist:
                    dist[x] = dist[u] + 1
                    q.append(x)
        return found, dist

    def dfs(u, dist):
        # iterative to stay clear of the recursion limit
        stack = [(u, iter(adj[u]))]
        path = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for w in it:
                y = mate.get(w)
                if y is None:
                    path.append((x, w))
                    for a, b in path:
                        mate[a] = b
                        mate[b] = a
                    return True
                if dist.get(y, INF) == dist[x] + 1:
                    path.append((x, w))
                    stack.append((y, iter(adj[y])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while True:
        found, dist = bfs()
        if not found:
            break
        for u in left:
            if u not in mate:
                dfs(u, dist)
    return mate


def find_perfect_matching(h: RedBlueGraph):
    """A perfect matching via phased augmentation, or ``NoPerfectMatching``."""
    left, right = _sides(h)
    mate = _hopcroft_karp(h)
    edges = tuple(norm_edge(u, mate[u]) for u in left if u in mate)
    if len(left) != len(right) or 2 * len(edges) != h.n:
        return NoPerfectMatching(len(edges))
    return Matching(edges)


def _decompose(walk: list) -> list[list]:
    """Split a closed vertex walk into simple closed sub-walks."""
    cycles = []
    stack = []
    pos = {}
    for v in walk:
        if v in pos:
            i = pos[v]
            cyc = stack[i:]
            cycles.append(cyc)
            for w in cyc[1:]:
                del pos[w]
            del stack[i + 1:]
        else:
            pos[v] = len(stack)
            stack.append(v)
    return cycles


def find_odd_red_alternating_cycle(h: RedBlueGraph, m: Matching) -> Optional[Cycle]:
    """An ``m``-alternating cycle with an odd number of red edges, or None.

    Matched edges point left to right and unmatched ones right to left;
    each vertex is split by the red parity of the walk so far, and an odd
    alternating cycle exists iff some ``(v, 0)`` reaches ``(v, 1)``.
    """
    if not m.is_perfect(h.graph):
        raise InputError("matching is not perfect")
    left, _ = _sides(h)
    lset = set(left)
    mate = {}
    for a, b in m.edges:
        mate[a] = b
        mate[b] = a
    adj = h.graph.adjacency

    def succ(v):
        if v in lset:
            w = mate[v]
            yield w, h.is_red((v, w))
        else:
            for w in adj[v]:
                if w != mate[v]:
                    yield w, h.is_red((v, w))

    for start in range(h.n):
        parent = {(start, 0): None}
        q = deque([(start, 0)])
        target = (start, 1)
        while q and target not in parent:
            v, p = q.popleft()
            for w, r in succ(v):
                st = (w, p ^ r)
                if st not in parent:
                    parent[st] = (v, p)
                    q.append(st)
        if target not in parent:
            continue
        walk = []
        st = target
        while st is not None:
            walk.append(st[0])
            st = parent[st]
        walk.reverse()  # start ... start
        for cyc in _decompose(walk):
            closed = cyc + [cyc[0]]
            reds = sum(h.is_red((closed[i], closed[i + 1])) for i in range(len(cyc)))
            if reds % 2:
                return Cycle(tuple(cyc))
    return None


def swap(m: Matching, c: Cycle) -> Matching:
    return Matching(tuple(set(m.edges).symmetric_difference(c.edges)))


def solve_odd_red_pm(h: RedBlueGraph) -> SolverResult:
    pm = find_perfect_matching(h)
    if isinstance(pm, NoPerfectMatching):
        return SolverResult(NO_PERFECT_MATCHING, None, 1)
    if pm.red_count(h) % 2:
        return SolverResult(FOUND, pm, 1)
    cyc = find_odd_red_alternating_cycle(h, pm)
    if cyc is None:
        return SolverResult(NO_ODD_RED_PM, None, 1)
    out = swap(pm, cyc)
    if not out.is_perfect(h.graph) or out.red_count(h) % 2 == 0:
        raise AssertionError("swap did not produce an odd-red perfect matching")
    return SolverResult(FOUND, out, 2)


def pm_parity_counts(h: RedBlueGraph) -> tuple[int, int]:
    """Numbers of perfect matchings with even and odd red count (subset DP)."""
    left, right = _sides(h)
    if len(left) != len(right):
        return 0, 0
    if len(right) > 63:
        raise InputError("subset DP supports at most 63 vertices per side")
    ridx = {v: j for j, v in enumerate(right)}
    adj = np.zeros(len(left), dtype=np.uint64)
    red = np.zeros(len(left), dtype=np.uint64)
    lidx = {v: i for i, v in enumerate(left)}
    for u, v in h.edges:
        a, b = (u, v) if u in lidx else (v, u)
        bit = np.uint64(1) << np.uint64(ridx[b])
        adj[lidx[a]] |= bit
        if h.is_red((u, v)):
            red[lidx[a]] |= bit
    even, odd = kernels.pm_parity_counts(len(left), len(right), adj, red)
    return int(even), int(odd)


def random_instance(rng: random.Random, max_side: int = 12) -> RedBlueGraph:
    """A random bipartite red-blue graph; sides are occasionally unbalanced."""
    a = rng.randint(1, max_side)
    b = a if rng.random() < 0.85 else rng.randint(1, max_side)
    p = rng.uniform(0.25, 0.85)
    q = rng.choice([0.0, 0.1, 0.3, 0.5, 1.0])
    edges = [(u, a + v) for u in range(a) for v in range(b) if rng.random() < p]
    g = Graph(a + b, tuple(edges), (tuple(range(a)), tuple(range(a, a + b))))
    return RedBlueGraph(g, frozenset(e for e in edges if rng.random() < q))
